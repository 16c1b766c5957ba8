#include "vizrec/ingest/csv.hpp"

#include "vizrec/common/error.hpp"
#include "vizrec/ingest/corpus.hpp"

namespace vizrec::ingest {

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  return parse_csv_records(text, nullptr);
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text, std::vector<CsvPosition>* positions) {
  std::size_t base = 0;
  if (text.starts_with("\xEF\xBB\xBF")) {
    text.remove_prefix(3);
    base = 3;
  }
  CsvPosition start{1, base};
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (positions) positions->push_back(start);
    records.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '"') {
      if (!field.empty()) throw ParseError("quote inside unquoted field", line, base + i);
      const std::size_t open = i;
      const std::size_t open_line = line;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      if (!closed) throw ParseError("unterminated quoted field", open_line, base + open);
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        throw ParseError("unexpected character after closing quote", line, base + i);
      row_has_content = true;
      // An empty quoted field still counts; mark with nothing else to do.
      continue;
    }
    if (c == ',') {
      end_field();
      row_has_content = true;
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      if (row_has_content || !field.empty() || !row.empty()) end_row();
      ++line;
      start = {line, base + i};
      continue;
    }
    field += c;
    row_has_content = true;
    ++i;
  }
  if (row_has_content || !field.empty() || !row.empty()) end_row();
  return records;
}

std::string escape_csv_field(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                            (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string write_csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape_csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

std::string write_csv(const Dataset& dataset) {
  std::vector<std::string> header;
  for (const auto& c : dataset.columns()) header.push_back(c.name());
  // A single empty header cell would read back as a blank line; quote it explicitly.
  std::string out = header.size() == 1 && header[0].empty() ? "\"\"\n" : write_csv_row(header);
  for (std::size_t r = 0; r < dataset.row_count(); ++r) {
    std::vector<std::string> row;
    row.reserve(dataset.column_count());
    for (const auto& c : dataset.columns()) row.push_back(c.raw_values()[r]);
    if (row.size() == 1 && row[0].empty()) {
      out += "\"\"\n";
    } else {
      out += write_csv_row(row);
    }
  }
  return out;
}

namespace {

Dataset dataset_from_csv(std::string_view bytes, std::string id) {
  std::vector<CsvPosition> positions;
  auto records = parse_csv_records(bytes, &positions);
  if (records.empty() || records.front().empty()) throw EmptyInputError("table has no header row");
  const auto& header = records.front();
  const std::size_t width = header.size();
  std::vector<std::vector<std::string>> cells(width);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) + " fields, found " +
                           std::to_string(records[r].size()),
                       positions[r].line, positions[r].offset);
    }
    for (std::size_t c = 0; c < width; ++c) cells[c].push_back(std::move(records[r][c]));
  }
  std::vector<Column> columns;
  columns.reserve(width);
  for (std::size_t c = 0; c < width; ++c) columns.emplace_back(header[c], std::move(cells[c]));
  return Dataset(std::move(id), std::move(columns));
}

}  // namespace

Dataset parse_table(std::string_view bytes, TableFormat format, std::string id) {
  if (format == TableFormat::csv) return dataset_from_csv(bytes, std::move(id));
  auto record = parse_record_text(bytes);
  if (record.data.column_count() == 0) throw EmptyInputError("record has no data columns");
  return std::move(record.data);
}

}  // namespace vizrec::ingest

#include "vizrec/features/matrix_io.hpp"

#include <charconv>
#include <ostream>

#include "json.hpp"
#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/ingest/csv.hpp"

namespace vizrec::features {

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m) {
  std::vector<std::string> header{"id"};
  header.insert(header.end(), m.feature_names.begin(), m.feature_names.end());
  out << ingest::write_csv_row(header);
  std::vector<std::string> cells;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    cells.clear();
    cells.push_back(m.row_ids[r]);
    for (const auto& v : m.rows[r]) cells.push_back(v ? format_double(*v) : std::string());
    out << ingest::write_csv_row(cells);
  }
}

void write_matrix_jsonl(std::ostream& out, const FeatureMatrix& m) {
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    // Built by hand so numbers keep the same shortest form as the CSV writer.
    std::string line = "{\"id\":" + nlohmann::json(m.row_ids[r]).dump();
    for (std::size_t i = 0; i < m.rows[r].size(); ++i) {
      line += ',';
      line += nlohmann::json(m.feature_names[i]).dump();
      line += ':';
      line += m.rows[r][i] ? format_double(*m.rows[r][i]) : "null";
    }
    line += "}\n";
    out << line;
  }
}

FeatureMatrix read_matrix_csv(std::string_view text) {
  const auto records = ingest::parse_csv_records(text);
  if (records.empty() || records.front().empty() || records.front().front() != "id") {
    throw ValidationError("feature matrix must start with an 'id' column");
  }
  FeatureMatrix m;
  m.feature_names.assign(records.front().begin() + 1, records.front().end());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != m.feature_names.size() + 1) {
      throw ValidationError("feature matrix row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                            " cells, expected " + std::to_string(m.feature_names.size() + 1));
    }
    m.row_ids.push_back(rec[0]);
    std::vector<FeatureValue> row;
    row.reserve(m.feature_names.size());
    for (std::size_t i = 1; i < rec.size(); ++i) {
      if (rec[i].empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0;
      const auto* end = rec[i].data() + rec[i].size();
      auto [p, ec] = std::from_chars(rec[i].data(), end, v);
      if (ec != std::errc() || p != end) throw ValidationError("feature matrix cell '" + rec[i] + "' is not a number");
      row.push_back(v);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace vizrec::features

#include "vizrec/ingest/corpus.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"

namespace vizrec::ingest {

namespace {

std::string id_text(const Json& v, const char* key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  throw DataError(std::string("record field '") + key + "' must be a string or integer");
}

std::string cell_text(const Json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

std::vector<std::pair<std::string, std::vector<std::string>>> read_data(const Json& data) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  auto read_cells = [](const Json& cells, const std::string& name) {
    if (!cells.is_array()) throw DataError("data column '" + name + "' is not a list");
    std::vector<std::string> raw;
    raw.reserve(cells.size());
    for (const auto& c : cells) raw.push_back(cell_text(c));
    return raw;
  };
  if (data.is_object()) {
    for (const auto& [name, cells] : data.items()) out.emplace_back(name, read_cells(cells, name));
  } else if (data.is_array()) {
    // [{"name": ..., "values": [...]}, ...] preserves duplicate column names.
    for (const auto& col : data) {
      if (!col.is_object() || !col.contains("name") || !col.contains("values"))
        throw DataError("data column entries need 'name' and 'values'");
      const std::string name = cell_text(col.at("name"));
      out.emplace_back(name, read_cells(col.at("values"), name));
    }
  } else {
    throw DataError("record 'data' must be an object");
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CorpusRecord parse_record(const Json& doc) {
  if (!doc.is_object()) throw DataError("record is not a JSON object");
  for (const char* key : {"fid", "user_id", "data", "specification", "layout"}) {
    if (!doc.contains(key)) throw DataError(std::string("record is missing '") + key + "'");
  }
  CorpusRecord rec;
  rec.fid = id_text(doc.at("fid"), "fid");
  rec.user_id = id_text(doc.at("user_id"), "user_id");
  if (rec.fid.empty()) throw DataError("record 'fid' is empty");

  auto columns_raw = read_data(doc.at("data"));
  std::size_t rows = 0;
  for (const auto& [name, cells] : columns_raw) rows = std::max(rows, cells.size());
  std::vector<Column> columns;
  columns.reserve(columns_raw.size());
  for (auto& [name, cells] : columns_raw) {
    cells.resize(rows);  // pad ragged columns with missing cells
    columns.emplace_back(name, std::move(cells));
  }
  rec.data = Dataset(rec.fid, std::move(columns));

  const Json& spec = doc.at("specification");
  if (spec.is_array()) {
    rec.specification = spec;
  } else if (spec.is_object() && spec.contains("traces") && spec.at("traces").is_array()) {
    rec.specification = spec.at("traces");
  } else {
    throw DataError("record 'specification' must be a trace list");
  }
  if (rec.specification.empty()) throw DataError("record specification has no traces");

  if (!doc.at("layout").is_object()) throw DataError("record 'layout' must be an object");
  rec.layout = doc.at("layout");
  return rec;
}

CorpusRecord parse_record_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
  }
  return parse_record(doc);
}

Json record_to_json(const CorpusRecord& record) {
  Json doc = Json::object();
  doc["fid"] = record.fid;
  doc["user_id"] = record.user_id;
  std::set<std::string> names;
  bool unique = true;
  for (const auto& c : record.data.columns()) unique = names.insert(c.name()).second && unique;
  if (unique) {
    Json data = Json::object();
    for (const auto& c : record.data.columns()) data[c.name()] = c.raw_values();
    doc["data"] = std::move(data);
  } else {
    Json data = Json::array();
    for (const auto& c : record.data.columns()) data.push_back({{"name", c.name()}, {"values", c.raw_values()}});
    doc["data"] = std::move(data);
  }
  doc["specification"] = record.specification;
  doc["layout"] = record.layout;
  return doc;
}

Corpus load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("corpus directory is not readable: " + dir.string());
  std::vector<fs::path> files;
  fs::directory_iterator it(dir, ec);
  if (ec) throw IoError("corpus directory is not readable: " + dir.string() + " (" + ec.message() + ")");
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  using Outcome = std::variant<CorpusRecord, std::string>;
  std::vector<Outcome> outcomes(files.size(), std::string{});
  parallel_for(files.size(), [&](std::size_t i) {
    try {
      outcomes[i] = parse_record_text(read_file(files[i]));
    } catch (const std::exception& e) {
      outcomes[i] = std::string(e.what());
    }
  });

  Corpus corpus;
  corpus.provenance = "directory:" + dir.string();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string source = files[i].filename().string();
    if (auto* err = std::get_if<std::string>(&outcomes[i])) {
      spdlog::warn("skipping record {}: {}", source, *err);
      corpus.skipped.push_back({source, *err});
      continue;
    }
    auto& rec = std::get<CorpusRecord>(outcomes[i]);
    if (!seen.insert(rec.fid).second) {
      spdlog::warn("skipping record {}: duplicate fid {}", source, rec.fid);
      corpus.skipped.push_back({source, "duplicate fid " + rec.fid});
      continue;
    }
    corpus.records.push_back(std::move(rec));
  }
  if (corpus.records.empty()) spdlog::warn("corpus {} contains no usable records", dir.string());
  if (!corpus.skipped.empty()) spdlog::info("{} record(s) skipped while loading {}", corpus.skipped.size(), dir.string());
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& rec : corpus.records) {
    std::string safe = rec.fid;
    for (char& c : safe)
      if (c == '/' || c == '\\' || c == ':') c = '_';
    std::ofstream out(dir / (safe + ".json"), std::ios::binary);
    if (!out) throw IoError("cannot write record " + rec.fid);
    out << record_to_json(rec).dump() << '\n';
  }
}

}  // namespace vizrec::ingest

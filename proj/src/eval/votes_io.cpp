#include "vizrec/eval/votes_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vizrec/common/error.hpp"
#include "vizrec/ingest/csv.hpp"

namespace vizrec::eval {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> table(std::string_view text, const std::vector<std::string>& header) {
  auto rows = ingest::parse_csv_records(text);
  if (rows.empty()) throw EmptyInputError("empty CSV");
  if (rows.front() != header) {
    std::string want;
    for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + header[i];
    throw ValidationError("expected CSV header " + want);
  }
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw ValidationError("CSV row " + std::to_string(i + 2) + " has " + std::to_string(rows[i].size()) +
                            " fields, expected " + std::to_string(header.size()));
    }
  }
  return rows;
}

}  // namespace

std::vector<VoteDistribution> parse_votes_csv(std::string_view text, const std::vector<std::string>& vocabulary) {
  const auto rows = table(text, {"dataset_id", "worker_id", "choice"});
  std::vector<std::string> vocab = vocabulary;
  if (vocab.empty()) {
    std::set<std::string> seen;
    for (const auto& r : rows) seen.insert(r[2]);
    vocab.assign(seen.begin(), seen.end());
  }
  std::vector<VoteDistribution> out;
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto it = std::find(vocab.begin(), vocab.end(), r[2]);
    if (it == vocab.end()) {
      throw ValidationError("vote on row " + std::to_string(i + 2) + " for '" + r[2] + "' is outside the vocabulary");
    }
    auto [pos, fresh] = where.emplace(r[0], out.size());
    if (fresh) out.push_back(VoteDistribution{r[0], vocab, std::vector<std::size_t>(vocab.size(), 0)});
    ++out[pos->second].counts[static_cast<std::size_t>(it - vocab.begin())];
  }
  if (out.empty()) throw EmptyInputError("votes file has no votes");
  return out;
}

std::vector<VoteDistribution> read_votes_csv(const std::filesystem::path& path, const std::vector<std::string>& vocabulary) {
  try {
    return parse_votes_csv(slurp(path), vocabulary);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Predictions parse_predictions_csv(std::string_view text) {
  const auto rows = table(text, {"dataset_id", "choice"});
  Predictions p;
  for (const auto& r : rows) {
    if (!p.emplace(r[0], r[1]).second) throw ValidationError("duplicate prediction for dataset " + r[0]);
  }
  return p;
}

Predictions read_predictions_csv(const std::filesystem::path& path) {
  try {
    return parse_predictions_csv(slurp(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string write_predictions_csv(const Predictions& p) {
  std::string out = ingest::write_csv_row({"dataset_id", "choice"});
  for (const auto& [id, c] : p) out += ingest::write_csv_row({id, c});
  return out;
}

}  // namespace vizrec::eval

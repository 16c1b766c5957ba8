#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vizrec/ingest/dataset.hpp"

namespace vizrec::ingest {

using Json = nlohmann::ordered_json;

/// One visualization: its source table, the trace list, and the opaque layout.
struct CorpusRecord {
  std::string fid;
  std::string user_id;
  Dataset data;
  Json specification;  // array of trace objects, at least one
  Json layout;         // preserved verbatim
};

struct SkippedRecord {
  std::string source;
  std::string reason;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::string provenance;
  std::vector<SkippedRecord> skipped;
};

/// Parses one record document (keys fid, user_id, data, specification, layout).
/// `data` maps column name -> cell list; shorter columns are padded with missing cells.
/// Throws DataError describing the first schema violation.
CorpusRecord parse_record(const Json& document);
CorpusRecord parse_record_text(std::string_view text);
Json record_to_json(const CorpusRecord& record);

/// Loads every *.json file in `dir` (sorted by file name). Unparseable files and
/// duplicate fids are skipped and reported. Throws IoError if the directory is unreadable.
Corpus load_corpus(const std::filesystem::path& dir);

/// Writes one <fid>.json per record.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct FetchOptions {
  double requests_per_second = 2.0;  // <= 0 disables rate limiting
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{10000};
};

struct Page {
  std::vector<CorpusRecord> records;
  std::vector<SkippedRecord> skipped;
  std::optional<std::size_t> next_page;  // server-provided cursor, when present
  bool last = false;                     // server signalled the end (next_page: null)
};

/// Client for a `/plots?page=N` endpoint serving record documents.
class PlotsClient {
 public:
  explicit PlotsClient(std::string base_url, FetchOptions options = {});

  /// GET <base>/plots?page=N. Accepts a JSON array of records, or an object
  /// {"records": [...], "next_page": N|null}. Retries 429/5xx/transport failures with
  /// exponential backoff (honouring Retry-After); throws NetworkError when retries run out.
  Page fetch_page(std::size_t page);

  /// Follows pages from `first_page` until an empty page, a null cursor, or max_pages.
  Corpus fetch_corpus(std::size_t first_page, std::size_t max_pages);

  std::size_t requests_made() const noexcept { return requests_; }

 private:
  void throttle();

  std::string base_url_;
  FetchOptions options_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::size_t requests_ = 0;
};

std::vector<CorpusRecord> fetch_corpus_page(const std::string& base_url, std::size_t page,
                                            const FetchOptions& options = {});

}  // namespace vizrec::ingest

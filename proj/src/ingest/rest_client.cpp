#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>
#include <thread>

#include "httplib.h"
#include "vizrec/common/error.hpp"
#include "vizrec/ingest/corpus.hpp"

namespace vizrec::ingest {

namespace {

bool retryable_status(int status) { return status == 429 || status >= 500; }

std::chrono::milliseconds retry_after(const httplib::Result& res, std::chrono::milliseconds fallback) {
  if (res && res->has_header("Retry-After")) {
    try {
      const double secs = std::stod(res->get_header_value("Retry-After"));
      if (secs >= 0.0) return std::chrono::milliseconds(static_cast<long long>(secs * 1000.0));
    } catch (const std::exception&) {
      // HTTP-date form is not supported; use the computed backoff.
    }
  }
  return fallback;
}

}  // namespace

PlotsClient::PlotsClient(std::string base_url, FetchOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

void PlotsClient::throttle() {
  if (options_.requests_per_second <= 0.0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options_.requests_per_second));
  if (last_request_) {
    const auto ready = *last_request_ + interval;
    const auto now = std::chrono::steady_clock::now();
    if (now < ready) std::this_thread::sleep_for(ready - now);
  }
  last_request_ = std::chrono::steady_clock::now();
}

Page PlotsClient::fetch_page(std::size_t page) {
  httplib::Client client(base_url_);
  const auto timeout_s = options_.timeout.count() / 1000;
  const auto timeout_us = (options_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(timeout_s, timeout_us);
  client.set_read_timeout(timeout_s, timeout_us);
  const std::string path = "/plots?page=" + std::to_string(page);

  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    throttle();
    ++requests_;
    auto res = client.Get(path);
    if (res && res->status == 200) {
      Json body;
      try {
        body = Json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError("page " + std::to_string(page) + " is not valid JSON: " + e.what());
      }
      Page out;
      const Json* items = &body;
      if (body.is_object()) {
        if (!body.contains("records") || !body.at("records").is_array())
          throw DataError("page " + std::to_string(page) + " has no 'records' array");
        items = &body.at("records");
        if (body.contains("next_page")) {
          const Json& next = body.at("next_page");
          if (next.is_number_unsigned()) out.next_page = next.get<std::size_t>();
          else if (next.is_null()) out.last = true;
        }
      } else if (!body.is_array()) {
        throw DataError("page " + std::to_string(page) + " is neither a record list nor a page object");
      }
      for (std::size_t i = 0; i < items->size(); ++i) {
        const Json& doc = (*items)[i];
        try {
          out.records.push_back(parse_record(doc));
        } catch (const std::exception& e) {
          std::string source = "page " + std::to_string(page) + " item " + std::to_string(i);
          if (doc.is_object() && doc.contains("fid")) source += " (fid " + doc.at("fid").dump() + ")";
          spdlog::warn("skipping {}: {}", source, e.what());
          out.skipped.push_back({source, e.what()});
        }
      }
      return out;
    }
    if (res && !retryable_status(res->status)) {
      throw NetworkError("GET " + path + " returned HTTP " + std::to_string(res->status), false);
    }
    last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    if (attempt == options_.max_retries) break;
    const auto wait = retry_after(res, backoff);
    spdlog::info("GET {} failed ({}); retrying in {} ms", path, last_error, wait.count());
    std::this_thread::sleep_for(wait);
    backoff *= 2;
  }
  throw NetworkError("GET " + path + " failed after retries: " + last_error, true);
}

Corpus PlotsClient::fetch_corpus(std::size_t first_page, std::size_t max_pages) {
  Corpus corpus;
  corpus.provenance = "rest:" + base_url_ + "/plots";
  std::set<std::string> seen;
  std::size_t page = first_page;
  for (std::size_t n = 0; n < max_pages; ++n) {
    Page p = fetch_page(page);
    const bool empty = p.records.empty() && p.skipped.empty();
    for (auto& rec : p.records) {
      if (!seen.insert(rec.fid).second) {
        corpus.skipped.push_back({"fid " + rec.fid, "duplicate fid"});
        continue;
      }
      corpus.records.push_back(std::move(rec));
    }
    corpus.skipped.insert(corpus.skipped.end(), p.skipped.begin(), p.skipped.end());
    if (empty || p.last) break;
    page = p.next_page.value_or(page + 1);
  }
  return corpus;
}

std::vector<CorpusRecord> fetch_corpus_page(const std::string& base_url, std::size_t page,
                                            const FetchOptions& options) {
  PlotsClient client(base_url, options);
  return client.fetch_page(page).records;
}

}  // namespace vizrec::ingest

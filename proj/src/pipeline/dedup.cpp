#include "vizrec/pipeline/dedup.hpp"

#include <algorithm>
#include <map>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/rng.hpp"

namespace vizrec::pipeline {

DedupMode parse_dedup_mode(std::string_view text) {
  if (text == "exact") return DedupMode::exact;
  if (text == "per_user" || text == "per-user") return DedupMode::per_user;
  throw UsageError("unknown dedup mode '" + std::string(text) + "' (expected exact or per_user)");
}

namespace {

bool same_content(const ingest::Dataset& a, const ingest::Dataset& b) {
  if (a.column_count() != b.column_count()) return false;
  for (std::size_t i = 0; i < a.column_count(); ++i) {
    if (a.column(i).name() != b.column(i).name() || a.column(i).raw_values() != b.column(i).raw_values()) return false;
  }
  return true;
}

// Picks one member of each group. Members are ordered by fid so the pick does not
// depend on input order.
std::vector<bool> keep_one_per_group(const ingest::Corpus& c, const std::vector<std::vector<std::size_t>>& groups,
                                     std::uint64_t seed, std::string_view stream,
                                     const std::vector<std::uint64_t>& group_keys) {
  std::vector<bool> keep(c.records.size(), false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto members = groups[g];
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return c.records[a].fid < c.records[b].fid; });
    Rng rng(derive_seed(seed, stream, group_keys[g]));
    keep[members[rng.index(members.size())]] = true;
  }
  return keep;
}

ingest::Corpus filter(const ingest::Corpus& c, const std::vector<bool>& keep) {
  ingest::Corpus out;
  out.provenance = c.provenance;
  out.skipped = c.skipped;
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    if (keep[i]) out.records.push_back(c.records[i]);
  }
  return out;
}

ingest::Corpus exact(const ingest::Corpus& c, std::uint64_t seed) {
  std::map<std::uint64_t, std::vector<std::vector<std::size_t>>> by_hash;
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    auto& buckets = by_hash[c.records[i].data.content_hash()];
    bool placed = false;
    for (auto& b : buckets) {
      if (same_content(c.records[b.front()].data, c.records[i].data)) {
        b.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) buckets.push_back({i});
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::uint64_t> keys;
  for (auto& [h, buckets] : by_hash) {
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      groups.push_back(buckets[k]);
      keys.push_back(h + k);
    }
  }
  return filter(c, keep_one_per_group(c, groups, seed, "dedup_exact", keys));
}

ingest::Corpus per_user(const ingest::Corpus& c, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < c.records.size(); ++i) by_user[c.records[i].user_id].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::uint64_t> keys;
  for (auto& [user, members] : by_user) {
    groups.push_back(members);
    keys.push_back(fnv1a64(user));
  }
  return filter(c, keep_one_per_group(c, groups, seed, "dedup_user", keys));
}

}  // namespace

ingest::Corpus deduplicate(const ingest::Corpus& corpus, DedupMode mode, std::uint64_t seed) {
  ingest::Corpus out = exact(corpus, seed);
  if (mode == DedupMode::per_user) out = per_user(out, seed);
  return out;
}

}  // namespace vizrec::pipeline

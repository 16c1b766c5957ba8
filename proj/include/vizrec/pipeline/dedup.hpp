#pragma once

#include <cstdint>

#include "vizrec/ingest/corpus.hpp"

namespace vizrec::pipeline {

enum class DedupMode { exact, per_user };
DedupMode parse_dedup_mode(std::string_view text);

/// exact: datasets with identical column names and raw cells collapse to one randomly
/// chosen representative. per_user: exact first, then one random dataset per user.
/// Kept records stay in input order. Choices depend only on (seed, group content),
/// so the result is idempotent and independent of record order.
ingest::Corpus deduplicate(const ingest::Corpus& corpus, DedupMode mode, std::uint64_t seed);

}  // namespace vizrec::pipeline

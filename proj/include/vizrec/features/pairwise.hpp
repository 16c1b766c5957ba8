#pragma once

#include "vizrec/features/feature_vector.hpp"
#include "vizrec/ingest/dataset.hpp"

namespace vizrec::features {

/// All 30 pairwise features of two equal-length columns. Blocks that do not
/// apply to the pair's types are missing; shared-value and name blocks are always filled.
PairwiseFeatures extract_pairwise_features(const ingest::Column& a, const ingest::Column& b);

}  // namespace vizrec::features

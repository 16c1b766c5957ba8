#pragma once

#include <span>
#include <vector>

#include "vizrec/features/feature_vector.hpp"
#include "vizrec/ingest/dataset.hpp"

namespace vizrec::features {

/// Applies one aggregator to the present values of a feature. Inputs are sorted
/// first so the result does not depend on column order.
FeatureValue aggregate(Aggregator agg, std::span<const double> present_values);

/// The 841 dataset-level features. `pairs` holds every unordered column pair (i < j)
/// in row-major order. Throws ValidationError for a dataset without columns.
DatasetFeatures aggregate_features(const std::vector<SingleColumnFeatures>& singles,
                                   const std::vector<PairwiseFeatures>& pairs, const ingest::Dataset& dataset);

}  // namespace vizrec::features

#pragma once

#include <vector>

#include "vizrec/features/feature_vector.hpp"
#include "vizrec/ingest/dataset.hpp"

namespace vizrec::features {

struct DatasetExtraction {
  std::vector<SingleColumnFeatures> columns;
  std::vector<PairwiseFeatures> pairs;  // (0,1), (0,2), ..., (1,2), ...
  DatasetFeatures dataset;
};

DatasetExtraction extract_features(const ingest::Dataset& dataset);

/// Extracts every dataset in parallel; results are in input order.
std::vector<DatasetExtraction> extract_features(const std::vector<const ingest::Dataset*>& datasets);

}  // namespace vizrec::features

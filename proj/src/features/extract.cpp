#include "vizrec/features/extract.hpp"

#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/features/aggregate.hpp"
#include "vizrec/features/pairwise.hpp"
#include "vizrec/features/single_column.hpp"

namespace vizrec::features {

DatasetExtraction extract_features(const ingest::Dataset& dataset) {
  DatasetExtraction out;
  const auto& cols = dataset.columns();
  out.columns.reserve(cols.size());
  for (const auto& c : cols) out.columns.push_back(extract_single_column_features(c));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) out.pairs.push_back(extract_pairwise_features(cols[i], cols[j]));
  }
  out.dataset = aggregate_features(out.columns, out.pairs, dataset);
  return out;
}

std::vector<DatasetExtraction> extract_features(const std::vector<const ingest::Dataset*>& datasets) {
  std::vector<DatasetExtraction> out(datasets.size());
  parallel_for(datasets.size(), [&](std::size_t i) {
    try {
      out[i] = extract_features(*datasets[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("dataset '" + datasets[i]->id() + "': " + e.what());
    }
  });
  return out;
}

}  // namespace vizrec::features

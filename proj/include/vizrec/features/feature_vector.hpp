#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vizrec/features/catalog.hpp"

namespace vizrec::features {

using FeatureValue = std::optional<double>;

/// Ordered feature values of one catalog level. Booleans are stored as 0/1.
struct FeatureVector {
  Level level = Level::single_column;
  std::vector<FeatureValue> values;

  std::size_t size() const noexcept { return values.size(); }
  const FeatureValue& operator[](std::size_t i) const { return values[i]; }
  FeatureValue& operator[](std::size_t i) { return values[i]; }
  /// Value by catalog name; throws std::out_of_range for unknown names.
  FeatureValue get(std::string_view name) const;
  bool operator==(const FeatureVector&) const = default;
};

using SingleColumnFeatures = FeatureVector;
using PairwiseFeatures = FeatureVector;

struct DatasetFeatures : FeatureVector {
  /// How many column (or pair) values each aggregate was computed from.
  /// Specials carry the number of columns.
  std::vector<std::uint32_t> support;
  bool operator==(const DatasetFeatures&) const = default;
};

/// Restricts a single-column or dataset-level vector to a feature set.
std::vector<FeatureValue> apply_feature_mask(const FeatureVector& features, FeatureSet set);

}  // namespace vizrec::features

#pragma once

#include <cstdint>
#include <utility>

#include "vizrec/common/rng.hpp"
#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// One CART tree. Internal nodes send x[feature] <= threshold to the left child.
struct Tree {
  std::vector<std::int32_t> feature;  // -1 marks a leaf
  std::vector<double> threshold;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<double> value;          // nodes x classes, class fractions of the node's samples
  std::vector<double> importance;     // features, summed weighted impurity decrease

  std::size_t nodes() const { return feature.size(); }
  std::size_t leaf_of(std::span<const double> row) const;
};

/// Grows a Gini tree on the given (possibly repeated) sample rows. Each split
/// draws features in a random order and evaluates them until max_features
/// non-constant ones were seen, so a node only becomes a leaf by purity, depth,
/// size or when every feature is constant on it.
Tree grow_tree(const Matrix& x, const std::vector<std::size_t>& y, std::size_t classes,
               std::vector<std::size_t> samples, std::size_t max_features, std::optional<std::size_t> max_depth,
               std::size_t min_samples_split, Rng& rng);

class RandomForest final : public Model {
 public:
  RandomForest(std::size_t features, std::size_t classes);
  Family family() const override { return Family::random_forest; }
  Json parameters() const override;
  static std::unique_ptr<RandomForest> from_parameters(const Json& j);

  /// Mean decrease in impurity: each tree's decreases normalised to sum 1,
  /// averaged over trees, renormalised.
  std::vector<double> importances() const;

  std::vector<Tree> trees;

 protected:
  void predict_proba(const Matrix& x, std::vector<double>& out) const override;
};

std::unique_ptr<Model> train_forest(const ForestParams& params, const TrainingData& data, std::uint64_t seed);

/// (feature index, importance) sorted by importance descending, ties by index.
/// Throws UsageError for models that are not random forests.
std::vector<std::pair<std::size_t, double>> mdi_importances(const Model& model);

}  // namespace vizrec::models

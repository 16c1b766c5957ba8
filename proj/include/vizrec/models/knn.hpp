#pragma once

#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// Euclidean k-nearest neighbours over the stored training rows. Candidates at
/// equal distance are ordered by class index, then by row; probabilities are the
/// vote fractions among the k kept.
class Knn final : public Model {
 public:
  Knn(std::size_t features, std::size_t classes, std::size_t k);
  Family family() const override { return Family::knn; }
  Json parameters() const override;
  static std::unique_ptr<Knn> from_parameters(const Json& j);

  std::size_t k;
  std::vector<double> points;  // stored rows x features
  std::vector<std::size_t> labels;

 protected:
  void predict_proba(const Matrix& x, std::vector<double>& out) const override;
};

std::unique_ptr<Model> train_knn(const KnnParams& params, const TrainingData& data);

}  // namespace vizrec::models

#pragma once

#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// Multinomial logistic regression with an L1 penalty on the weights (the
/// intercepts are not penalised).
class Logistic final : public Model {
 public:
  Logistic(std::size_t features, std::size_t classes);
  Family family() const override { return Family::logistic_regression; }
  Json parameters() const override;
  static std::unique_ptr<Logistic> from_parameters(const Json& j);

  std::vector<double> weights;    // classes x features
  std::vector<double> intercept;  // classes

 protected:
  void predict_proba(const Matrix& x, std::vector<double>& out) const override;
};

/// Summed log-loss plus strength * |W|_1, minimised by accelerated proximal
/// gradient (soft-thresholding) with backtracking and adaptive restart. Stops when
/// the relative objective change falls below the tolerance; at the iteration cap
/// the best iterate is kept and the log carries a "not_converged" flag.
std::unique_ptr<Model> train_logistic(const LogisticParams& params, const TrainingData& data);

/// Penalised objective of a fitted model on the given data (for tests).
double logistic_objective(const Logistic& model, const TrainingData& data, double l1_strength);

}  // namespace vizrec::models

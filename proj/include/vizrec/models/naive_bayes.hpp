#pragma once

#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// Gaussian naive Bayes. Class priors are the training frequencies; classes
/// absent from the training rows get probability zero.
class NaiveBayes final : public Model {
 public:
  NaiveBayes(std::size_t features, std::size_t classes);
  Family family() const override { return Family::naive_bayes; }
  Json parameters() const override;
  static std::unique_ptr<NaiveBayes> from_parameters(const Json& j);

  std::vector<double> log_prior;  // classes
  std::vector<double> mean;       // classes x features
  std::vector<double> variance;   // classes x features, smoothing included
  double epsilon = 0;

 protected:
  void predict_proba(const Matrix& x, std::vector<double>& out) const override;
};

std::unique_ptr<Model> train_naive_bayes(const NaiveBayesParams& params, const TrainingData& data);

}  // namespace vizrec::models

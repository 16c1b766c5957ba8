#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vizrec/pipeline/preprocess.hpp"

namespace vizrec::models {

using Json = nlohmann::ordered_json;
using pipeline::Matrix;

enum class Family { naive_bayes, knn, logistic_regression, random_forest, neural_network };
inline constexpr Family kAllFamilies[] = {Family::naive_bayes, Family::knn, Family::logistic_regression,
                                          Family::random_forest, Family::neural_network};
std::string_view to_string(Family f);
/// Accepts full names and the short forms nb, knn, lr, rf, nn.
Family parse_family(std::string_view text);

struct NaiveBayesParams {
  double var_smoothing = 1e-9;  // times the largest feature variance
};

struct KnnParams {
  std::size_t k = 5;
};

struct LogisticParams {
  double l1_strength = 1.0;  // objective: summed log-loss + strength * |W|_1
  double tolerance = 1e-6;   // relative objective change
  std::size_t max_iterations = 10000;
};

struct ForestParams {
  std::size_t trees = 100;
  std::optional<std::size_t> max_features;  // default: floor(sqrt(d))
  std::optional<std::size_t> max_depth;     // default: unbounded
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
};

struct NetworkParams {
  std::vector<std::size_t> hidden = {1000, 1000, 1000};
  std::size_t batch_size = 200;
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_epochs = 100;
  std::size_t plateau_window = 10;
  double plateau_tolerance = 1e-3;  // fraction of accuracy, not points
  double decay_factor = 0.1;
  std::size_t max_reductions = 3;
};

struct ModelSpec {
  Family family = Family::logistic_regression;
  std::uint64_t seed = 0;
  NaiveBayesParams naive_bayes;
  KnnParams knn;
  LogisticParams logistic;
  ForestParams forest;
  NetworkParams network;

  /// Hyperparameters of the selected family only.
  Json hyperparameters() const;
  /// Overrides fields present in `j` (same keys as hyperparameters()).
  void apply_overrides(const Json& j);
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0;
  double train_accuracy = 0;
  double validation_accuracy = 0;
  double learning_rate = 0;
};

struct LearningRateEvent {
  std::size_t epoch = 0;
  double learning_rate = 0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  std::vector<LearningRateEvent> lr_events;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<std::string> flags;
  std::optional<double> final_validation_accuracy;

  Json to_json() const;
  static TrainingLog from_json(const Json& j);
};

struct Prediction {
  std::vector<std::size_t> labels;
  std::vector<double> probabilities;  // rows x classes
  std::size_t classes = 0;
  std::span<const double> row(std::size_t r) const { return {probabilities.data() + r * classes, classes}; }
};

/// Index of the largest value; ties go to the smallest index.
std::size_t argmax(std::span<const double> v);

class Model {
 public:
  virtual ~Model() = default;
  virtual Family family() const = 0;
  std::size_t num_features() const { return features_; }
  std::size_t num_classes() const { return classes_; }

  /// Probabilities for each row (rows x classes, each row sums to 1).
  /// Throws ValidationError when the width does not match the fitted features.
  Prediction predict(const Matrix& x) const;

  virtual Json parameters() const = 0;
  const TrainingLog& log() const { return log_; }
  TrainingLog& log() { return log_; }

 protected:
  Model(std::size_t features, std::size_t classes) : features_(features), classes_(classes) {}
  virtual void predict_proba(const Matrix& x, std::vector<double>& out) const = 0;

  std::size_t features_;
  std::size_t classes_;
  TrainingLog log_;
};

/// Labelled rows for training. Labels index the class vocabulary.
struct TrainingData {
  const Matrix* x = nullptr;
  const std::vector<std::size_t>* y = nullptr;
  std::size_t classes = 0;
};

/// Trains a model. Needs two or more classes present; the neural network also
/// needs validation data for its schedule. Deterministic given spec.seed.
std::unique_ptr<Model> train(const ModelSpec& spec, const TrainingData& train,
                             const std::optional<TrainingData>& validation = std::nullopt);

/// Rebuilds a model from its family and parameters() document.
std::unique_ptr<Model> model_from_parameters(Family family, const Json& parameters, const ModelSpec& spec);

void check_training_data(const TrainingData& d);

}  // namespace vizrec::models

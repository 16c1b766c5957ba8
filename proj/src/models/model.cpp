#include "vizrec/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vizrec/common/error.hpp"
#include "vizrec/models/knn.hpp"
#include "vizrec/models/logistic.hpp"
#include "vizrec/models/mlp.hpp"
#include "vizrec/models/naive_bayes.hpp"
#include "vizrec/models/random_forest.hpp"

namespace vizrec::models {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::naive_bayes: return "naive_bayes";
    case Family::knn: return "knn";
    case Family::logistic_regression: return "logistic_regression";
    case Family::random_forest: return "random_forest";
    case Family::neural_network: return "neural_network";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "naive_bayes" || text == "nb") return Family::naive_bayes;
  if (text == "knn") return Family::knn;
  if (text == "logistic_regression" || text == "lr") return Family::logistic_regression;
  if (text == "random_forest" || text == "rf") return Family::random_forest;
  if (text == "neural_network" || text == "nn") return Family::neural_network;
  throw UsageError("unknown model family '" + std::string(text) +
                   "' (expected naive_bayes, knn, logistic_regression, random_forest or neural_network)");
}

Json ModelSpec::hyperparameters() const {
  switch (family) {
    case Family::naive_bayes: return Json{{"variant", "gaussian"}, {"var_smoothing", naive_bayes.var_smoothing}};
    case Family::knn: return Json{{"k", knn.k}, {"metric", "euclidean"}};
    case Family::logistic_regression:
      return Json{{"penalty", "l1"},
                  {"l1_strength", logistic.l1_strength},
                  {"tolerance", logistic.tolerance},
                  {"max_iterations", logistic.max_iterations},
                  {"solver", "proximal_gradient_backtracking"}};
    case Family::random_forest:
      return Json{{"trees", forest.trees},
                  {"max_features", forest.max_features ? Json(*forest.max_features) : Json("sqrt")},
                  {"max_depth", forest.max_depth ? Json(*forest.max_depth) : Json(nullptr)},
                  {"min_samples_split", forest.min_samples_split},
                  {"bootstrap", forest.bootstrap},
                  {"criterion", "gini"}};
    case Family::neural_network:
      return Json{{"hidden", network.hidden},
                  {"activation", "relu"},
                  {"optimizer", "adam"},
                  {"batch_size", network.batch_size},
                  {"learning_rate", network.learning_rate},
                  {"beta1", network.beta1},
                  {"beta2", network.beta2},
                  {"epsilon", network.epsilon},
                  {"max_epochs", network.max_epochs},
                  {"plateau_window", network.plateau_window},
                  {"plateau_tolerance", network.plateau_tolerance},
                  {"decay_factor", network.decay_factor},
                  {"max_reductions", network.max_reductions}};
  }
  return Json::object();
}

void ModelSpec::apply_overrides(const Json& j) {
  if (!j.is_object()) throw UsageError("model hyperparameters must be an object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key) && !j[key].is_null()) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    switch (family) {
      case Family::naive_bayes: get("var_smoothing", naive_bayes.var_smoothing); break;
      case Family::knn: get("k", knn.k); break;
      case Family::logistic_regression:
        get("l1_strength", logistic.l1_strength);
        get("tolerance", logistic.tolerance);
        get("max_iterations", logistic.max_iterations);
        break;
      case Family::random_forest:
        get("trees", forest.trees);
        if (j.contains("max_features") && j["max_features"].is_number()) forest.max_features = j["max_features"].get<std::size_t>();
        if (j.contains("max_depth") && j["max_depth"].is_number()) forest.max_depth = j["max_depth"].get<std::size_t>();
        get("min_samples_split", forest.min_samples_split);
        get("bootstrap", forest.bootstrap);
        break;
      case Family::neural_network:
        get("hidden", network.hidden);
        get("batch_size", network.batch_size);
        get("learning_rate", network.learning_rate);
        get("beta1", network.beta1);
        get("beta2", network.beta2);
        get("epsilon", network.epsilon);
        get("max_epochs", network.max_epochs);
        get("plateau_window", network.plateau_window);
        get("plateau_tolerance", network.plateau_tolerance);
        get("decay_factor", network.decay_factor);
        get("max_reductions", network.max_reductions);
        break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad model hyperparameter: ") + e.what());
  }
}

Json TrainingLog::to_json() const {
  Json ep = Json::array();
  for (const auto& e : epochs) {
    ep.push_back(Json{{"epoch", e.epoch},
                      {"loss", e.loss},
                      {"train_accuracy", e.train_accuracy},
                      {"validation_accuracy", e.validation_accuracy},
                      {"learning_rate", e.learning_rate}});
  }
  Json lr = Json::array();
  for (const auto& e : lr_events) lr.push_back(Json{{"epoch", e.epoch}, {"learning_rate", e.learning_rate}});
  return Json{{"iterations", iterations},
              {"converged", converged},
              {"flags", flags},
              {"final_validation_accuracy", final_validation_accuracy ? Json(*final_validation_accuracy) : Json(nullptr)},
              {"learning_rate_events", lr},
              {"epochs", ep}};
}

TrainingLog TrainingLog::from_json(const Json& j) {
  TrainingLog t;
  t.iterations = j.value("iterations", std::size_t{0});
  t.converged = j.value("converged", true);
  if (j.contains("flags")) t.flags = j["flags"].get<std::vector<std::string>>();
  if (j.contains("final_validation_accuracy") && j["final_validation_accuracy"].is_number()) {
    t.final_validation_accuracy = j["final_validation_accuracy"].get<double>();
  }
  if (j.contains("learning_rate_events")) {
    for (const auto& e : j["learning_rate_events"]) {
      t.lr_events.push_back({e.at("epoch").get<std::size_t>(), e.at("learning_rate").get<double>()});
    }
  }
  if (j.contains("epochs")) {
    for (const auto& e : j["epochs"]) {
      t.epochs.push_back({e.at("epoch").get<std::size_t>(), e.at("loss").get<double>(),
                          e.at("train_accuracy").get<double>(), e.at("validation_accuracy").get<double>(),
                          e.at("learning_rate").get<double>()});
    }
  }
  return t;
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Prediction Model::predict(const Matrix& x) const {
  Prediction p;
  p.classes = classes_;
  if (x.rows == 0) return p;
  if (x.cols != features_) {
    throw ValidationError("input has " + std::to_string(x.cols) + " features, model expects " +
                          std::to_string(features_));
  }
  p.probabilities.assign(x.rows * classes_, 0.0);
  predict_proba(x, p.probabilities);
  p.labels.resize(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) p.labels[r] = argmax(p.row(r));
  return p;
}

void check_training_data(const TrainingData& d) {
  if (!d.x || !d.y) throw InternalError("training data not set");
  if (d.x->rows != d.y->size()) throw ValidationError("feature rows and labels differ in count");
  if (d.x->rows == 0) throw ValidationError("no training rows");
  std::set<std::size_t> present;
  for (std::size_t l : *d.y) {
    if (l >= d.classes) throw ValidationError("label index out of range");
    present.insert(l);
  }
  if (present.size() < 2) throw ValidationError("training data has a single class; at least two are needed");
  for (double v : d.x->data) {
    if (!std::isfinite(v)) throw ValidationError("training features contain non-finite values");
  }
}

std::unique_ptr<Model> train(const ModelSpec& spec, const TrainingData& data,
                             const std::optional<TrainingData>& validation) {
  check_training_data(data);
  switch (spec.family) {
    case Family::naive_bayes: return train_naive_bayes(spec.naive_bayes, data);
    case Family::knn: return train_knn(spec.knn, data);
    case Family::logistic_regression: return train_logistic(spec.logistic, data);
    case Family::random_forest: return train_forest(spec.forest, data, spec.seed);
    case Family::neural_network:
      if (!validation) throw ValidationError("the neural network needs validation data");
      return train_network(spec.network, data, *validation, spec.seed);
  }
  throw InternalError("unknown model family");
}

std::unique_ptr<Model> model_from_parameters(Family family, const Json& parameters, const ModelSpec& spec) {
  switch (family) {
    case Family::naive_bayes: return NaiveBayes::from_parameters(parameters);
    case Family::knn: return Knn::from_parameters(parameters);
    case Family::logistic_regression: return Logistic::from_parameters(parameters);
    case Family::random_forest: return RandomForest::from_parameters(parameters);
    case Family::neural_network: return Network::from_parameters(parameters, spec.network);
  }
  throw InternalError("unknown model family");
}

}  // namespace vizrec::models

#include "vizrec/models/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"

namespace vizrec::models {

NaiveBayes::NaiveBayes(std::size_t features, std::size_t classes)
    : Model(features, classes),
      log_prior(classes, -std::numeric_limits<double>::infinity()),
      mean(classes * features, 0.0),
      variance(classes * features, 1.0) {}

std::unique_ptr<Model> train_naive_bayes(const NaiveBayesParams& params, const TrainingData& data) {
  const Matrix& x = *data.x;
  const auto& y = *data.y;
  const std::size_t d = x.cols, c = data.classes, n = x.rows;
  auto model = std::make_unique<NaiveBayes>(d, c);

  // largest per-feature variance over all rows sets the smoothing floor
  double max_var = 0;
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0;
    for (std::size_t r = 0; r < n; ++r) s += x.at(r, j);
    const double m = s / static_cast<double>(n);
    double v = 0;
    for (std::size_t r = 0; r < n; ++r) v += (x.at(r, j) - m) * (x.at(r, j) - m);
    max_var = std::max(max_var, v / static_cast<double>(n));
  }
  model->epsilon = params.var_smoothing * max_var;
  // an all-constant input would leave zero variances; keep the densities finite
  if (model->epsilon <= 0) model->epsilon = params.var_smoothing > 0 ? params.var_smoothing : 1e-9;

  std::vector<std::size_t> counts(c, 0);
  for (std::size_t r = 0; r < n; ++r) {
    ++counts[y[r]];
    for (std::size_t j = 0; j < d; ++j) model->mean[y[r] * d + j] += x.at(r, j);
  }
  for (std::size_t k = 0; k < c; ++k) {
    if (counts[k] == 0) continue;
    model->log_prior[k] = std::log(static_cast<double>(counts[k]) / static_cast<double>(n));
    for (std::size_t j = 0; j < d; ++j) model->mean[k * d + j] /= static_cast<double>(counts[k]);
  }
  std::vector<double> ss(c * d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x.at(r, j) - model->mean[y[r] * d + j];
      ss[y[r] * d + j] += diff * diff;
    }
  }
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = counts[k] ? ss[k * d + j] / static_cast<double>(counts[k]) : 0.0;
      model->variance[k * d + j] = v + model->epsilon;
    }
  }
  model->log().converged = true;
  model->log().flags.push_back("variant:gaussian");
  return model;
}

void NaiveBayes::predict_proba(const Matrix& x, std::vector<double>& out) const {
  const std::size_t d = features_, c = classes_;
  const double log2pi = std::log(2.0 * std::numbers::pi);
  std::vector<double> joint(c);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) {
      double s = log_prior[k];
      if (std::isfinite(s)) {
        for (std::size_t j = 0; j < d; ++j) {
          const double v = variance[k * d + j];
          const double diff = x.at(r, j) - mean[k * d + j];
          s -= 0.5 * (log2pi + std::log(v) + diff * diff / v);
        }
      }
      joint[k] = s;
      best = std::max(best, s);
    }
    double z = 0;
    for (std::size_t k = 0; k < c; ++k) {
      joint[k] = std::exp(joint[k] - best);
      z += joint[k];
    }
    for (std::size_t k = 0; k < c; ++k) out[r * c + k] = joint[k] / z;
  }
}

Json NaiveBayes::parameters() const {
  return Json{{"features", features_},
              {"classes", classes_},
              {"epsilon", encode_doubles(std::span<const double>(&epsilon, 1))},
              {"log_prior", encode_doubles(log_prior)},
              {"mean", encode_doubles(mean)},
              {"variance", encode_doubles(variance)}};
}

std::unique_ptr<NaiveBayes> NaiveBayes::from_parameters(const Json& j) {
  try {
    auto m = std::make_unique<NaiveBayes>(j.at("features").get<std::size_t>(), j.at("classes").get<std::size_t>());
    m->epsilon = decode_doubles(j.at("epsilon").get<std::string>()).at(0);
    m->log_prior = decode_doubles(j.at("log_prior").get<std::string>());
    m->mean = decode_doubles(j.at("mean").get<std::string>());
    m->variance = decode_doubles(j.at("variance").get<std::string>());
    if (m->log_prior.size() != m->classes_ || m->mean.size() != m->classes_ * m->features_ ||
        m->variance.size() != m->mean.size()) {
      throw ValidationError("naive Bayes parameter blocks have the wrong size");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad naive Bayes parameters: ") + e.what());
  } catch (const std::out_of_range&) {
    throw ValidationError("bad naive Bayes parameters: missing epsilon");
  }
}

}  // namespace vizrec::models

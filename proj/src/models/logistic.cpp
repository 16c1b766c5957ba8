#include "vizrec/models/logistic.hpp"

#include <cmath>
#include <limits>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/kernels/kernels.hpp"

namespace vizrec::models {

namespace {

struct Problem {
  const Matrix& x;
  const std::vector<std::size_t>& y;
  std::size_t c;
  double lambda;
};

// scores = X W^T + b, returns summed log-loss; fills residual P - Y when asked
double smooth_loss(const Problem& p, const std::vector<double>& w, const std::vector<double>& b,
                   std::vector<double>& scores, std::vector<double>* residual) {
  const std::size_t n = p.x.rows, d = p.x.cols, c = p.c;
  scores.resize(n * c);
  kernels::gemm_nt(n, c, d, p.x.data.data(), d, w.data(), d, 0.0, scores.data(), c);
  double loss = 0;
  if (residual) residual->resize(n * c);
  for (std::size_t r = 0; r < n; ++r) {
    double* s = scores.data() + r * c;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) {
      s[k] += b[k];
      mx = std::max(mx, s[k]);
    }
    double z = 0;
    for (std::size_t k = 0; k < c; ++k) z += std::exp(s[k] - mx);
    const double lse = mx + std::log(z);
    loss += lse - s[p.y[r]];
    if (residual) {
      double* g = residual->data() + r * c;
      for (std::size_t k = 0; k < c; ++k) g[k] = std::exp(s[k] - lse);
      g[p.y[r]] -= 1.0;
    }
  }
  return loss;
}

double l1(const std::vector<double>& w) {
  double s = 0;
  for (double v : w) s += std::abs(v);
  return s;
}

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

Logistic::Logistic(std::size_t features, std::size_t classes)
    : Model(features, classes), weights(features * classes, 0.0), intercept(classes, 0.0) {}

std::unique_ptr<Model> train_logistic(const LogisticParams& params, const TrainingData& data) {
  if (params.l1_strength < 0) throw UsageError("l1_strength must be non-negative");
  if (params.max_iterations == 0) throw UsageError("max_iterations must be positive");
  const Matrix& x = *data.x;
  const std::size_t d = x.cols, c = data.classes;
  Problem prob{x, *data.y, c, params.l1_strength};

  std::vector<double> xw(c * d, 0.0), xb(c, 0.0);  // current iterate
  std::vector<double> yw = xw, yb = xb;             // extrapolated point
  std::vector<double> zw(c * d), zb(c);              // candidate
  std::vector<double> gw(c * d), gb(c), scores, resid;

  double fx = smooth_loss(prob, xw, xb, scores, nullptr);
  double big_f = fx + prob.lambda * l1(xw);
  double t = 1.0;
  double lip = 1.0;
  bool converged = false;
  std::size_t it = 0;

  for (; it < params.max_iterations; ++it) {
    const double fy = smooth_loss(prob, yw, yb, scores, &resid);
    kernels::gemm_tn(c, d, x.rows, resid.data(), c, x.data.data(), d, 0.0, gw.data(), d);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
      for (std::size_t k = 0; k < c; ++k) gb[k] += resid[r * c + k];
    }

    double fz = 0;
    for (;;) {
      double inner = 0, sq = 0;
      for (std::size_t i = 0; i < c * d; ++i) {
        zw[i] = soft(yw[i] - gw[i] / lip, prob.lambda / lip);
        const double dlt = zw[i] - yw[i];
        inner += gw[i] * dlt;
        sq += dlt * dlt;
      }
      for (std::size_t k = 0; k < c; ++k) {
        zb[k] = yb[k] - gb[k] / lip;
        const double dlt = zb[k] - yb[k];
        inner += gb[k] * dlt;
        sq += dlt * dlt;
      }
      fz = smooth_loss(prob, zw, zb, scores, nullptr);
      if (!std::isfinite(fz)) throw InternalError("logistic loss became non-finite");
      if (fz <= fy + inner + 0.5 * lip * sq + 1e-12 * std::abs(fy)) break;
      lip *= 2.0;
      if (lip > 1e300) throw InternalError("logistic line search failed");
    }

    const double big_fz = fz + prob.lambda * l1(zw);
    if (big_fz > big_f) {
      // momentum overshot: restart from the current iterate
      if (yw == xw && yb == xb) {
        // a plain proximal step cannot increase the objective beyond rounding
        converged = true;
        break;
      }
      yw = xw;
      yb = xb;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double mom = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < c * d; ++i) yw[i] = zw[i] + mom * (zw[i] - xw[i]);
    for (std::size_t k = 0; k < c; ++k) yb[k] = zb[k] + mom * (zb[k] - xb[k]);
    t = t_next;
    const double change = big_f - big_fz;
    xw.swap(zw);
    xb.swap(zb);
    big_f = big_fz;
    if (change <= params.tolerance * std::max(std::abs(big_f), std::numeric_limits<double>::min())) {
      converged = true;
      ++it;
      break;
    }
  }

  auto m = std::make_unique<Logistic>(d, c);
  m->weights = std::move(xw);
  m->intercept = std::move(xb);
  m->log().iterations = it;
  m->log().converged = converged;
  if (!converged) m->log().flags.push_back("not_converged");
  return m;
}

double logistic_objective(const Logistic& model, const TrainingData& data, double l1_strength) {
  Problem prob{*data.x, *data.y, data.classes, l1_strength};
  std::vector<double> scores;
  return smooth_loss(prob, model.weights, model.intercept, scores, nullptr) + l1_strength * l1(model.weights);
}

void Logistic::predict_proba(const Matrix& x, std::vector<double>& out) const {
  const std::size_t c = classes_, d = features_;
  kernels::gemm_nt(x.rows, c, d, x.data.data(), d, weights.data(), d, 0.0, out.data(), c);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double* s = out.data() + r * c;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) {
      s[k] += intercept[k];
      mx = std::max(mx, s[k]);
    }
    double z = 0;
    for (std::size_t k = 0; k < c; ++k) {
      s[k] = std::exp(s[k] - mx);
      z += s[k];
    }
    for (std::size_t k = 0; k < c; ++k) s[k] /= z;
  }
}

Json Logistic::parameters() const {
  return Json{{"features", features_},
              {"classes", classes_},
              {"weights", encode_doubles(weights)},
              {"intercept", encode_doubles(intercept)}};
}

std::unique_ptr<Logistic> Logistic::from_parameters(const Json& j) {
  try {
    auto m = std::make_unique<Logistic>(j.at("features").get<std::size_t>(), j.at("classes").get<std::size_t>());
    m->weights = decode_doubles(j.at("weights").get<std::string>());
    m->intercept = decode_doubles(j.at("intercept").get<std::string>());
    if (m->weights.size() != m->features_ * m->classes_ || m->intercept.size() != m->classes_) {
      throw ValidationError("logistic parameter blocks have the wrong size");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad logistic parameters: ") + e.what());
  }
}

}  // namespace vizrec::models

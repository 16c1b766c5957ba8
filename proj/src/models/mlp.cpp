#include "vizrec/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/kernels/kernels.hpp"

namespace vizrec::models {

template <typename T>
Mlp<T>::Mlp(std::vector<std::size_t> layer_sizes) : sizes(std::move(layer_sizes)) {
  if (sizes.size() < 2) throw UsageError("a network needs an input and an output layer");
  for (auto s : sizes) {
    if (s == 0) throw UsageError("network layers must be non-empty");
  }
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    weights.emplace_back(sizes[l] * sizes[l + 1], T(0));
    biases.emplace_back(sizes[l + 1], T(0));
  }
}

template <typename T>
std::size_t Mlp<T>::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

template <typename T>
void Mlp<T>::initialize(Rng& rng) {
  for (std::size_t l = 0; l < layers(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(sizes[l]));
    for (auto& w : weights[l]) w = static_cast<T>((2.0 * rng.uniform() - 1.0) * bound);
    std::fill(biases[l].begin(), biases[l].end(), T(0));
  }
}

template <typename T>
void Mlp<T>::forward(const T* x, std::size_t batch, Workspace& ws) const {
  const std::size_t nl = layers();
  ws.acts.resize(nl + 1);
  const T* in = x;
  for (std::size_t l = 0; l < nl; ++l) {
    const std::size_t ni = sizes[l], no = sizes[l + 1];
    auto& out = ws.acts[l + 1];
    out.resize(batch * no);
    for (std::size_t r = 0; r < batch; ++r) std::copy(biases[l].begin(), biases[l].end(), out.begin() + r * no);
    kernels::gemm(batch, no, ni, in, ni, weights[l].data(), no, T(1), out.data(), no);
    if (l + 1 < nl) {
      for (auto& v : out) v = v > T(0) ? v : T(0);
    } else {
      for (std::size_t r = 0; r < batch; ++r) {
        T* z = out.data() + r * no;
        const T mx = *std::max_element(z, z + no);
        T s = 0;
        for (std::size_t k = 0; k < no; ++k) {
          z[k] = std::exp(z[k] - mx);
          s += z[k];
        }
        for (std::size_t k = 0; k < no; ++k) z[k] /= s;
      }
    }
    in = out.data();
  }
}

namespace {
template <typename T>
double summed_nll(const std::vector<T>& probs, const std::size_t* y, std::size_t batch, std::size_t classes) {
  double loss = 0;
  for (std::size_t r = 0; r < batch; ++r) {
    const T p = std::max(probs[r * classes + y[r]], std::numeric_limits<T>::min());
    loss -= std::log(static_cast<double>(p));
  }
  return loss;
}
}  // namespace

template <typename T>
double Mlp<T>::loss(const T* x, const std::size_t* y, std::size_t batch, Workspace& ws) const {
  forward(x, batch, ws);
  return summed_nll(ws.acts.back(), y, batch, outputs());
}

template <typename T>
double Mlp<T>::loss_and_gradient(const T* x, const std::size_t* y, std::size_t batch, Workspace& ws,
                                 std::vector<std::vector<T>>& grad_w, std::vector<std::vector<T>>& grad_b) const {
  forward(x, batch, ws);
  const std::size_t nl = layers(), c = outputs();
  const double total = summed_nll(ws.acts.back(), y, batch, c);
  grad_w.resize(nl);
  grad_b.resize(nl);

  ws.delta = ws.acts.back();
  for (std::size_t r = 0; r < batch; ++r) ws.delta[r * c + y[r]] -= T(1);

  for (std::size_t l = nl; l-- > 0;) {
    const std::size_t ni = sizes[l], no = sizes[l + 1];
    const T* in = l == 0 ? x : ws.acts[l].data();
    grad_w[l].resize(ni * no);
    grad_b[l].assign(no, T(0));
    kernels::gemm_tn(ni, no, batch, in, ni, ws.delta.data(), no, T(0), grad_w[l].data(), no);
    for (std::size_t r = 0; r < batch; ++r) {
      for (std::size_t k = 0; k < no; ++k) grad_b[l][k] += ws.delta[r * no + k];
    }
    if (l == 0) break;
    ws.delta_prev.resize(batch * ni);
    kernels::gemm_nt(batch, ni, no, ws.delta.data(), no, weights[l].data(), no, T(0), ws.delta_prev.data(), ni);
    const auto& act = ws.acts[l];
    for (std::size_t i = 0; i < batch * ni; ++i) {
      if (!(act[i] > T(0))) ws.delta_prev[i] = T(0);
    }
    ws.delta.swap(ws.delta_prev);
  }
  return total;
}

template struct Mlp<float>;
template struct Mlp<double>;

double nn_gradient_check(const Mlp<double>& net, const std::vector<double>& x, const std::vector<std::size_t>& y,
                         double step) {
  const std::size_t batch = y.size();
  if (x.size() != batch * net.inputs()) throw ValidationError("gradient check batch has the wrong width");
  Mlp<double>::Workspace ws;
  std::vector<std::vector<double>> gw, gb;
  net.loss_and_gradient(x.data(), y.data(), batch, ws, gw, gb);

  Mlp<double> probe = net;
  double worst = 0;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + step;
    const double up = probe.loss(x.data(), y.data(), batch, ws);
    param = saved - step;
    const double down = probe.loss(x.data(), y.data(), batch, ws);
    param = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe.layers(); ++l) {
    for (std::size_t i = 0; i < probe.weights[l].size(); ++i) check(probe.weights[l][i], gw[l][i]);
    for (std::size_t i = 0; i < probe.biases[l].size(); ++i) check(probe.biases[l][i], gb[l][i]);
  }
  return worst;
}

Network::Network(Mlp<float> n) : Model(n.inputs(), n.outputs()), net(std::move(n)) {}

namespace {

constexpr std::size_t kPredictChunk = 256;

std::vector<float> to_float(const Matrix& m) {
  std::vector<float> out(m.data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(m.data[i]);
  return out;
}

double accuracy_of(const Mlp<float>& net, const std::vector<float>& x, const std::vector<std::size_t>& y) {
  const std::size_t n = y.size(), d = net.inputs(), c = net.outputs();
  if (n == 0) return 0;
  Mlp<float>::Workspace ws;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < n; start += kPredictChunk) {
    const std::size_t b = std::min(kPredictChunk, n - start);
    net.forward(x.data() + start * d, b, ws);
    const auto& p = ws.acts.back();
    for (std::size_t r = 0; r < b; ++r) {
      const float* row = p.data() + r * c;
      const auto pred = static_cast<std::size_t>(std::max_element(row, row + c) - row);
      correct += pred == y[start + r];
    }
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace

void Network::predict_proba(const Matrix& x, std::vector<double>& out) const {
  const std::size_t c = classes_, chunks = (x.rows + kPredictChunk - 1) / kPredictChunk;
  parallel_for(chunks, [&](std::size_t ci) {
    const std::size_t start = ci * kPredictChunk, b = std::min(kPredictChunk, x.rows - start);
    std::vector<float> xb(b * features_);
    for (std::size_t i = 0; i < xb.size(); ++i) xb[i] = static_cast<float>(x.data[start * features_ + i]);
    Mlp<float>::Workspace ws;
    net.forward(xb.data(), b, ws);
    const auto& p = ws.acts.back();
    for (std::size_t r = 0; r < b; ++r) {
      double s = 0;
      for (std::size_t k = 0; k < c; ++k) s += static_cast<double>(p[r * c + k]);
      for (std::size_t k = 0; k < c; ++k) out[(start + r) * c + k] = static_cast<double>(p[r * c + k]) / s;
    }
  });
}

std::unique_ptr<Model> train_network(const NetworkParams& params, const TrainingData& train,
                                     const TrainingData& validation, std::uint64_t seed) {
  if (!validation.x || !validation.y || validation.x->rows == 0 || validation.x->rows != validation.y->size()) {
    throw ValidationError("the neural network needs non-empty validation rows with labels");
  }
  if (validation.x->cols != train.x->cols) throw ValidationError("validation width differs from training width");
  if (params.batch_size == 0 || params.max_epochs == 0 || params.plateau_window == 0) {
    throw UsageError("batch_size, max_epochs and plateau_window must be positive");
  }
  std::vector<std::size_t> sizes{train.x->cols};
  sizes.insert(sizes.end(), params.hidden.begin(), params.hidden.end());
  sizes.push_back(train.classes);
  Mlp<float> net(sizes);
  Rng init(derive_seed(seed, "nn_init"));
  net.initialize(init);

  const std::size_t n = train.x->rows, d = train.x->cols, c = train.classes, nl = net.layers();
  const std::vector<float> xt = to_float(*train.x), xv = to_float(*validation.x);
  const auto& yt = *train.y;

  std::vector<std::vector<float>> m1(nl), m2(nl), mb1(nl), mb2(nl), gw, gb;
  for (std::size_t l = 0; l < nl; ++l) {
    m1[l].assign(net.weights[l].size(), 0.f);
    m2[l].assign(net.weights[l].size(), 0.f);
    mb1[l].assign(net.biases[l].size(), 0.f);
    mb2[l].assign(net.biases[l].size(), 0.f);
  }
  const float b1 = static_cast<float>(params.beta1), b2 = static_cast<float>(params.beta2);
  const float eps = static_cast<float>(params.epsilon);
  auto adam = [&](std::vector<float>& w, std::vector<float>& ma, std::vector<float>& va, const std::vector<float>& g,
                  float scale, float step, float c2) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const float gi = g[i] * scale;
      ma[i] = b1 * ma[i] + (1.f - b1) * gi;
      va[i] = b2 * va[i] + (1.f - b2) * gi * gi;
      w[i] -= step * ma[i] / (std::sqrt(va[i] / c2) + eps);
    }
  };

  TrainingLog log;
  double lr = params.learning_rate;
  std::size_t steps = 0, reductions = 0;
  std::deque<double> window;
  std::vector<std::size_t> order(n), yb;
  std::vector<float> xb;
  Mlp<float>::Workspace ws;
  bool scheduled_stop = false;

  for (std::size_t epoch = 1; epoch <= params.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle(derive_seed(seed, "nn_epoch", epoch));
    shuffle.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n; start += params.batch_size) {
      const std::size_t b = std::min(params.batch_size, n - start);
      xb.resize(b * d);
      yb.resize(b);
      for (std::size_t r = 0; r < b; ++r) {
        const std::size_t src = order[start + r];
        std::copy_n(xt.data() + src * d, d, xb.data() + r * d);
        yb[r] = yt[src];
      }
      const double batch_loss = net.loss_and_gradient(xb.data(), yb.data(), b, ws, gw, gb);
      if (!std::isfinite(batch_loss)) {
        throw InternalError("neural network loss became non-finite at epoch " + std::to_string(epoch) +
                            ", batch starting at row " + std::to_string(start) + ", learning rate " +
                            format_double(lr));
      }
      epoch_loss += batch_loss;
      const auto& p = ws.acts.back();
      for (std::size_t r = 0; r < b; ++r) {
        const float* row = p.data() + r * c;
        correct += static_cast<std::size_t>(std::max_element(row, row + c) - row) == yb[r];
      }
      ++steps;
      const double c1 = 1.0 - std::pow(params.beta1, static_cast<double>(steps));
      const double c2 = 1.0 - std::pow(params.beta2, static_cast<double>(steps));
      const float step = static_cast<float>(lr / c1);
      const float scale = 1.f / static_cast<float>(b);
      for (std::size_t l = 0; l < nl; ++l) {
        adam(net.weights[l], m1[l], m2[l], gw[l], scale, step, static_cast<float>(c2));
        adam(net.biases[l], mb1[l], mb2[l], gb[l], scale, step, static_cast<float>(c2));
      }
    }
    const double val_acc = accuracy_of(net, xv, *validation.y);
    log.epochs.push_back({epoch, epoch_loss / static_cast<double>(n),
                          static_cast<double>(correct) / static_cast<double>(n), val_acc, lr});
    log.final_validation_accuracy = val_acc;

    window.push_back(val_acc);
    if (window.size() > params.plateau_window) window.pop_front();
    if (window.size() == params.plateau_window) {
      const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
      if (*hi - *lo < params.plateau_tolerance) {
        ++reductions;
        lr *= params.decay_factor;
        log.lr_events.push_back({epoch, lr});
        window.clear();
        if (reductions >= params.max_reductions) {
          scheduled_stop = true;
          break;
        }
      }
    }
  }
  log.iterations = steps;
  log.converged = scheduled_stop;
  if (!scheduled_stop) log.flags.push_back("epoch_cap_reached");
  log.flags.push_back("precision:float32");

  auto model = std::make_unique<Network>(std::move(net));
  model->log() = std::move(log);
  return model;
}

Json Network::parameters() const {
  Json w = Json::array(), b = Json::array();
  for (std::size_t l = 0; l < net.layers(); ++l) {
    w.push_back(encode_floats(net.weights[l]));
    b.push_back(encode_floats(net.biases[l]));
  }
  return Json{{"sizes", net.sizes}, {"weights", w}, {"biases", b}};
}

std::unique_ptr<Network> Network::from_parameters(const Json& j, const NetworkParams&) {
  try {
    Mlp<float> net(j.at("sizes").get<std::vector<std::size_t>>());
    const auto& w = j.at("weights");
    const auto& b = j.at("biases");
    if (w.size() != net.layers() || b.size() != net.layers()) throw ValidationError("network layer count mismatch");
    for (std::size_t l = 0; l < net.layers(); ++l) {
      auto wl = decode_floats(w[l].get<std::string>());
      auto bl = decode_floats(b[l].get<std::string>());
      if (wl.size() != net.weights[l].size() || bl.size() != net.biases[l].size()) {
        throw ValidationError("network layer " + std::to_string(l) + " has the wrong size");
      }
      net.weights[l] = std::move(wl);
      net.biases[l] = std::move(bl);
    }
    return std::make_unique<Network>(std::move(net));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad network parameters: ") + e.what());
  }
}

}  // namespace vizrec::models

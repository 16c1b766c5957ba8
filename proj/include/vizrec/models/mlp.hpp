#pragma once

#include <cstdint>

#include "vizrec/common/rng.hpp"
#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// Fully connected ReLU network with a softmax output. Layer l maps sizes[l]
/// inputs to sizes[l+1] outputs; weights are stored inputs x outputs, row-major.
template <typename T>
struct Mlp {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<T>> weights;
  std::vector<std::vector<T>> biases;

  Mlp() = default;
  explicit Mlp(std::vector<std::size_t> layer_sizes);

  std::size_t layers() const { return weights.size(); }
  std::size_t inputs() const { return sizes.front(); }
  std::size_t outputs() const { return sizes.back(); }
  std::size_t parameter_count() const;

  /// Uniform in +-sqrt(6 / fan_in) for weights, zero biases.
  void initialize(Rng& rng);

  struct Workspace {
    std::vector<std::vector<T>> acts;  // acts[l]: batch x sizes[l]; last holds probabilities
    std::vector<T> delta, delta_prev;
  };

  /// Softmax probabilities for `batch` rows of x (batch x inputs) into ws.acts.back().
  void forward(const T* x, std::size_t batch, Workspace& ws) const;

  /// Summed cross-entropy over the batch; gradients of that sum (not the mean)
  /// are written to grad_w / grad_b, shaped like weights / biases.
  double loss_and_gradient(const T* x, const std::size_t* y, std::size_t batch, Workspace& ws,
                           std::vector<std::vector<T>>& grad_w, std::vector<std::vector<T>>& grad_b) const;

  double loss(const T* x, const std::size_t* y, std::size_t batch, Workspace& ws) const;
};

extern template struct Mlp<float>;
extern template struct Mlp<double>;

/// Largest relative difference |a - n| / max(|a| + |n|, 1e-8) between analytic
/// gradients and central finite differences of the summed loss.
double nn_gradient_check(const Mlp<double>& net, const std::vector<double>& x, const std::vector<std::size_t>& y,
                         double step = 1e-5);

class Network final : public Model {
 public:
  explicit Network(Mlp<float> net);
  Family family() const override { return Family::neural_network; }
  Json parameters() const override;
  static std::unique_ptr<Network> from_parameters(const Json& j, const NetworkParams& params);

  Mlp<float> net;

 protected:
  void predict_proba(const Matrix& x, std::vector<double>& out) const override;
};

/// Adam on minibatches with a plateau schedule: when the last plateau_window
/// validation accuracies (since the previous reduction) vary by less than
/// plateau_tolerance, the learning rate is multiplied by decay_factor; training
/// stops at the max_reductions-th reduction or after max_epochs. Throws
/// InternalError when the loss turns non-finite.
std::unique_ptr<Model> train_network(const NetworkParams& params, const TrainingData& train,
                                     const TrainingData& validation, std::uint64_t seed);

}  // namespace vizrec::models

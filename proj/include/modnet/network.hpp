#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modnet/dataset.hpp"
#include "modnet/matrix.hpp"
#include "modnet/rng.hpp"

namespace modnet {

double sigmoid(double x);

// Layered sigmoid network. Layers are numbered 0..depth()-1 here; weights[d]
// connects layer d (rows) to layer d+1 (columns) and biases[d] belongs to
// layer d+1, the destination of weights[d].
struct NetworkParams {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  NetworkParams() = default;
  // All-zero parameters of the given shape.
  explicit NetworkParams(std::vector<std::size_t> sizes);

  std::size_t depth() const noexcept { return layer_sizes.size(); }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;

  // Checks shape and finiteness invariants; throws ShapeError /
  // NumericDomainError.
  void validate() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

struct TrainingConfig {
  double lambda = 1e-6;   // L1 weight penalty
  double epsilon = 1e-3;  // added to o(1-o) in every delta
  double a1 = 4000.0;     // iterations = a1 * n
  double eta0 = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

// Learning rate at 1-based iteration i for a run of `total` iterations.
double learning_rate(double eta0, double total, std::size_t i);

// Activations of every layer; outputs[0] is the input itself.
using Activations = std::vector<std::vector<double>>;

Activations forward(const NetworkParams& net, std::span<const double> x);
std::vector<double> predict(const NetworkParams& net, std::span<const double> x);

// Mean over samples of the squared Euclidean output error.
double mean_squared_error(const NetworkParams& net, const Dataset& data);
inline double training_error(const NetworkParams& net, const Dataset& data) {
  return mean_squared_error(net, data);
}
inline double generalization_error(const NetworkParams& net, const Dataset& test) {
  return mean_squared_error(net, test);
}

// (n/2) E(w) + lambda * sum |w| over weights only.
double lasso_objective(const NetworkParams& net, const Dataset& data, double lambda);

// Gradient-shaped buffer matching a NetworkParams.
struct Gradient {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  explicit Gradient(const NetworkParams& net);
  void clear();
};

// Back-propagated per-sample gradient of 1/2 ||y - f(x)||^2 with the
// epsilon-stabilized derivative o(1-o) + epsilon. With epsilon == 0 this is
// the exact gradient. `acts` must come from forward(net, x). Overwrites grad.
void backprop(const NetworkParams& net, const Activations& acts, std::span<const double> y,
              double epsilon, Gradient& grad);

// Stochastic steepest descent with L1 subgradient (sgn(0) = 0): a1*n
// iterations, each on one sample drawn uniformly with replacement, learning
// rate eta0 * N / (N + 5 i). Throws DivergenceError if any parameter becomes
// non-finite or exceeds 1e8 in magnitude.
NetworkParams train_sgd(NetworkParams net, const Dataset& data, const TrainingConfig& cfg);

// Independent N(0, 0.5) weights and biases.
NetworkParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

}  // namespace modnet

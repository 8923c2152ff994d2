#include "modnet/network.hpp"

#include <cmath>
#include <string>

#include "modnet/errors.hpp"

namespace modnet {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

NetworkParams::NetworkParams(std::vector<std::size_t> sizes) : layer_sizes(std::move(sizes)) {
  if (layer_sizes.size() < 2) throw ShapeError("a network needs at least two layers");
  for (std::size_t d = 0; d + 1 < layer_sizes.size(); ++d) {
    weights.emplace_back(layer_sizes[d], layer_sizes[d + 1]);
    biases.emplace_back(layer_sizes[d + 1], 0.0);
  }
  validate();
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t d = 0; d < weights.size(); ++d) count += weights[d].size() + biases[d].size();
  return count;
}

void NetworkParams::validate() const {
  if (layer_sizes.size() < 2) throw ShapeError("a network needs at least two layers");
  for (std::size_t s : layer_sizes)
    if (s == 0) throw ShapeError("every layer needs at least one unit");
  if (weights.size() != depth() - 1 || biases.size() != depth() - 1)
    throw ShapeError("expected one weight matrix and bias vector per layer pair");
  for (std::size_t d = 0; d + 1 < depth(); ++d) {
    if (weights[d].rows() != layer_sizes[d] || weights[d].cols() != layer_sizes[d + 1])
      throw ShapeError("weight matrix " + std::to_string(d) + " has the wrong shape");
    if (biases[d].size() != layer_sizes[d + 1])
      throw ShapeError("bias vector " + std::to_string(d) + " has the wrong length");
    for (double w : weights[d].data())
      if (!std::isfinite(w)) throw NumericDomainError("non-finite weight");
    for (double b : biases[d])
      if (!std::isfinite(b)) throw NumericDomainError("non-finite bias");
  }
}

void TrainingConfig::validate() const {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(a1 >= 1.0)) throw ConfigError("a1 must be >= 1");
  if (!(eta0 > 0.0)) throw ConfigError("eta0 must be > 0");
}

double learning_rate(double eta0, double total, std::size_t i) {
  return eta0 * total / (total + 5.0 * static_cast<double>(i));
}

Activations forward(const NetworkParams& net, std::span<const double> x) {
  Activations acts(net.depth());
  if (x.size() != net.input_dim())
    throw ShapeError("input has " + std::to_string(x.size()) + " values, network expects " +
                     std::to_string(net.input_dim()));
  acts[0].assign(x.begin(), x.end());
  for (std::size_t d = 0; d + 1 < net.depth(); ++d) {
    const Matrix& w = net.weights[d];
    std::vector<double>& next = acts[d + 1];
    next = net.biases[d];
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double o = acts[d][i];
      const auto row = w.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) next[j] += row[j] * o;
    }
    for (double& v : next) v = sigmoid(v);
  }
  return acts;
}

std::vector<double> predict(const NetworkParams& net, std::span<const double> x) {
  return std::move(forward(net, x).back());
}

double mean_squared_error(const NetworkParams& net, const Dataset& data) {
  data.validate();
  if (data.size() == 0) throw ArgumentError("error of an empty dataset is undefined");
  if (data.output_dim() != net.output_dim())
    throw ShapeError("dataset output dimension does not match the network");
  double total = 0.0;
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto out = predict(net, data.inputs.row(s));
    const auto y = data.outputs.row(s);
    for (std::size_t j = 0; j < out.size(); ++j) total += (y[j] - out[j]) * (y[j] - out[j]);
  }
  return total / static_cast<double>(data.size());
}

double lasso_objective(const NetworkParams& net, const Dataset& data, double lambda) {
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
  double l1 = 0.0;
  for (const Matrix& w : net.weights)
    for (double v : w.data()) l1 += std::abs(v);
  return 0.5 * static_cast<double>(data.size()) * mean_squared_error(net, data) + lambda * l1;
}

Gradient::Gradient(const NetworkParams& net) {
  for (std::size_t d = 0; d < net.weights.size(); ++d) {
    weights.emplace_back(net.weights[d].rows(), net.weights[d].cols());
    biases.emplace_back(net.biases[d].size(), 0.0);
  }
}

void Gradient::clear() {
  for (Matrix& m : weights)
    for (double& v : m.data()) v = 0.0;
  for (auto& b : biases)
    for (double& v : b) v = 0.0;
}

void backprop(const NetworkParams& net, const Activations& acts, std::span<const double> y,
              double epsilon, Gradient& grad) {
  const std::size_t last = net.depth() - 1;
  if (y.size() != net.output_dim()) throw ShapeError("target length does not match output layer");

  // biases[d] holds the deltas of layer d+1.
  auto& out_delta = grad.biases[last - 1];
  for (std::size_t j = 0; j < out_delta.size(); ++j) {
    const double o = acts[last][j];
    out_delta[j] = (o - y[j]) * (o * (1.0 - o) + epsilon);
  }
  for (std::size_t d = last - 1; d >= 1; --d) {
    const Matrix& w = net.weights[d];
    const auto& upper = grad.biases[d];
    auto& delta = grad.biases[d - 1];
    for (std::size_t j = 0; j < w.rows(); ++j) {
      const auto row = w.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) s += upper[k] * row[k];
      const double o = acts[d][j];
      delta[j] = s * (o * (1.0 - o) + epsilon);
    }
  }
  for (std::size_t d = 0; d < last; ++d) {
    Matrix& gw = grad.weights[d];
    const auto& delta = grad.biases[d];
    for (std::size_t i = 0; i < gw.rows(); ++i) {
      const double o = acts[d][i];
      auto row = gw.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = delta[j] * o;
    }
  }
}

namespace {
double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

constexpr double kDivergenceBound = 1e8;
}  // namespace

NetworkParams train_sgd(NetworkParams net, const Dataset& data, const TrainingConfig& cfg) {
  cfg.validate();
  net.validate();
  data.validate();
  if (data.size() == 0) throw ArgumentError("cannot train on an empty dataset");
  if (data.input_dim() != net.input_dim() || data.output_dim() != net.output_dim())
    throw ShapeError("dataset dimensions do not match the network");

  const double total = std::round(cfg.a1 * static_cast<double>(data.size()));
  const auto iterations = static_cast<std::size_t>(total);
  Rng rng = make_rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  Gradient grad(net);

  for (std::size_t it = 1; it <= iterations; ++it) {
    const std::size_t k = pick(rng);
    const double eta = learning_rate(cfg.eta0, total, it);
    const Activations acts = forward(net, data.inputs.row(k));
    backprop(net, acts, data.outputs.row(k), cfg.epsilon, grad);

    bool ok = true;
    for (std::size_t d = 0; d < net.weights.size(); ++d) {
      auto w = net.weights[d].data();
      const auto g = grad.weights[d].data();
      for (std::size_t e = 0; e < w.size(); ++e) {
        w[e] -= eta * (g[e] + cfg.lambda * sgn(w[e]));
        ok &= std::abs(w[e]) <= kDivergenceBound;
      }
      auto& b = net.biases[d];
      const auto& gb = grad.biases[d];
      for (std::size_t j = 0; j < b.size(); ++j) {
        b[j] -= eta * gb[j];
        ok &= std::abs(b[j]) <= kDivergenceBound;
      }
    }
    // NaN fails the <= comparison as well.
    if (!ok)
      throw DivergenceError("training diverged at iteration " + std::to_string(it), it);
  }
  return net;
}

NetworkParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
  NetworkParams net(layer_sizes);
  Rng rng = make_rng(seed);
  for (std::size_t d = 0; d < net.weights.size(); ++d) {
    for (double& w : net.weights[d].data()) w = normal_variance(rng, 0.0, 0.5);
    for (double& b : net.biases[d]) b = normal_variance(rng, 0.0, 0.5);
  }
  return net;
}

}  // namespace modnet

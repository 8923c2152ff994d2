#pragma once

// Independent reference computations written directly from the defining
// formulas. They deliberately share no code with the library beyond plain
// data types.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "modnet/community.hpp"
#include "modnet/matrix.hpp"
#include "modnet/network.hpp"

namespace oracle {

// 1/2 ||y - f(x)||^2 via the plain recursion o^{d+1}_j = s(sum_i w_ij o^d_i + b_j),
// accumulated in long double.
inline long double half_squared_loss(const modnet::NetworkParams& net, const std::vector<double>& x,
                                     const std::vector<double>& y) {
  std::vector<long double> o(x.begin(), x.end());
  for (std::size_t d = 0; d < net.weights.size(); ++d) {
    std::vector<long double> next(net.layer_sizes[d + 1]);
    for (std::size_t j = 0; j < next.size(); ++j) {
      long double u = net.biases[d][j];
      for (std::size_t i = 0; i < o.size(); ++i) u += net.weights[d](i, j) * o[i];
      next[j] = 1.0L / (1.0L + std::exp(-u));
    }
    o = std::move(next);
  }
  long double s = 0.0L;
  for (std::size_t j = 0; j < o.size(); ++j) s += (y[j] - o[j]) * (y[j] - o[j]);
  return 0.5L * s;
}

// Fourth-order central difference of half_squared_loss w.r.t. every
// parameter, laid out like modnet::Gradient.
inline modnet::Gradient finite_difference_gradient(modnet::NetworkParams net,
                                                   const std::vector<double>& x,
                                                   const std::vector<double>& y,
                                                   double h = 1e-3) {
  modnet::Gradient g(net);
  auto probe = [&](double& p) {
    const double saved = p;
    auto at = [&](double offset) {
      p = saved + offset;
      return half_squared_loss(net, x, y);
    };
    const long double d = (8.0L * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0L * h);
    p = saved;
    return static_cast<double>(d);
  };
  for (std::size_t d = 0; d < net.weights.size(); ++d) {
    for (std::size_t i = 0; i < net.weights[d].rows(); ++i)
      for (std::size_t j = 0; j < net.weights[d].cols(); ++j)
        g.weights[d](i, j) = probe(net.weights[d](i, j));
    for (std::size_t j = 0; j < net.biases[d].size(); ++j) g.biases[d][j] = probe(net.biases[d][j]);
  }
  return g;
}

inline double joint_mass(const modnet::LayerConnections& layer, const modnet::EmParams& p,
                         const std::vector<std::size_t>& z) {
  double mass = 1.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const std::size_t c = z[k];
    mass *= p.prior[c];
    if (layer.incoming)
      for (std::size_t i = 0; i < layer.incoming->rows(); ++i)
        mass *= std::pow(p.incoming(c, i), (*layer.incoming)(i, k));
    if (layer.outgoing)
      for (std::size_t j = 0; j < layer.outgoing->cols(); ++j)
        mass *= std::pow(p.outgoing(c, j), (*layer.outgoing)(k, j));
  }
  return mass;
}

// q_{k,c} = sum over all C^l assignments with z_k = c of the joint, divided
// by the total.
inline modnet::Matrix brute_force_posterior(const modnet::LayerConnections& layer,
                                            const modnet::EmParams& p) {
  const std::size_t l = layer.width();
  const std::size_t C = p.prior.size();
  modnet::Matrix q(l, C);
  std::vector<std::size_t> z(l, 0);
  double total = 0.0;
  while (true) {
    const double m = joint_mass(layer, p, z);
    total += m;
    for (std::size_t k = 0; k < l; ++k) q(k, z[k]) += m;
    std::size_t pos = 0;
    while (pos < l && ++z[pos] == C) z[pos++] = 0;
    if (pos == l) break;
  }
  for (double& v : q.data()) v /= total;
  return q;
}

// sum_k sum_c q_kc (ln pi_c + sum_i A_ik ln tau_ci + sum_j B_kj ln tau'_cj)
inline double expected_complete_log_likelihood(const modnet::LayerConnections& layer,
                                               const modnet::EmParams& p,
                                               const modnet::Matrix& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t c = 0; c < q.cols(); ++c) {
      if (q(k, c) == 0.0) continue;
      double t = std::log(p.prior[c]);
      if (layer.incoming)
        for (std::size_t i = 0; i < layer.incoming->rows(); ++i)
          t += (*layer.incoming)(i, k) * std::log(p.incoming(c, i));
      if (layer.outgoing)
        for (std::size_t j = 0; j < layer.outgoing->cols(); ++j)
          t += (*layer.outgoing)(k, j) * std::log(p.outgoing(c, j));
      s += q(k, c) * t;
    }
  return s;
}

// Random 0.99/0.01 matrix with connection probability `density`.
inline modnet::Matrix random_soft_matrix(std::size_t rows, std::size_t cols, double density,
                                         std::mt19937_64& rng) {
  std::bernoulli_distribution on(density);
  modnet::Matrix m(rows, cols);
  for (double& v : m.data()) v = on(rng) ? 0.99 : 0.01;
  return m;
}

inline modnet::EmParams random_em_params(std::size_t C, std::size_t parents, std::size_t children,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  modnet::EmParams p;
  p.prior.resize(C);
  double s = 0.0;
  for (double& v : p.prior) s += (v = u(rng));
  for (double& v : p.prior) v /= s;
  auto fill = [&](modnet::Matrix& m, std::size_t cols) {
    m = modnet::Matrix(cols ? C : 0, cols);
    for (std::size_t c = 0; c < m.rows(); ++c) {
      double t = 0.0;
      for (std::size_t j = 0; j < cols; ++j) t += (m(c, j) = u(rng));
      for (std::size_t j = 0; j < cols; ++j) m(c, j) /= t;
    }
  };
  fill(p.incoming, parents);
  fill(p.outgoing, children);
  return p;
}

inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace oracle

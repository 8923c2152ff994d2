#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "modnet/graph.hpp"
#include "modnet/matrix.hpp"
#include "modnet/rng.hpp"

namespace modnet {

// Connection matrices seen by one layer of width l. `incoming` is the
// parent_width x l matrix A, `outgoing` the l x child_width matrix B. Either
// may be null (input / output layer), in which case its factor is dropped
// from the likelihood. Non-owning.
struct LayerConnections {
  const Matrix* incoming = nullptr;
  const Matrix* outgoing = nullptr;

  std::size_t width() const;
  std::size_t parent_width() const { return incoming ? incoming->rows() : 0; }
  std::size_t child_width() const { return outgoing ? outgoing->cols() : 0; }
  void validate() const;
};

LayerConnections layer_connections(const LayerGraph& graph, std::size_t layer);

// pi (prior over communities), tau (C x parent_width) and tau' (C x
// child_width). Every row of tau / tau' and pi itself sum to one.
struct EmParams {
  std::vector<double> prior;
  Matrix incoming;
  Matrix outgoing;

  std::size_t communities() const noexcept { return prior.size(); }
  friend bool operator==(const EmParams&, const EmParams&) = default;
};

struct CommunityModel {
  EmParams params;
  Matrix responsibilities;  // width x C, rows sum to one
  double expected_log_likelihood = 0.0;

  std::size_t communities() const noexcept { return params.communities(); }
  std::size_t width() const noexcept { return responsibilities.rows(); }
  friend bool operator==(const CommunityModel&, const CommunityModel&) = default;
};

struct EmOptions {
  std::size_t communities = 3;
  std::size_t restarts = 10;
  std::size_t iterations = 200;
  // Stop a chain once the expected log likelihood moves less than this.
  // Disabled when unset.
  std::optional<double> tolerance;
};

// Per-unit log of pi_c prod_i tau_ci^A_ik prod_j tau'_cj^B_kj (width x C).
Matrix log_masses(const LayerConnections& layer, const EmParams& params);

double expected_log_likelihood(const LayerConnections& layer, const EmParams& params,
                               const Matrix& responsibilities);

// Posterior community probabilities, computed in log space and normalized.
Matrix e_step(const LayerConnections& layer, const EmParams& params);

// Closed-form maximizer of the expected log likelihood for fixed q. A
// community with no responsibility mass keeps a uniform tau/tau' row and a
// prior floor of 1e-12 (before renormalization).
EmParams m_step(const LayerConnections& layer, const Matrix& responsibilities);

// Uniform(0,1) draws, normalized.
EmParams random_params(const LayerConnections& layer, std::size_t communities, Rng& rng);

// Expected log likelihood after each of the iterations, in order.
using EmTrace = std::vector<double>;

// One EM chain from `initial`: alternates e_step / m_step. The returned
// model holds the final M-step parameters and the responsibilities they were
// fitted to.
CommunityModel run_em_chain(const LayerConnections& layer, EmParams initial,
                            std::size_t iterations, EmTrace* trace = nullptr,
                            std::optional<double> tolerance = std::nullopt);

// `restarts` independent chains from random initial parameters; keeps the one
// with the largest final expected log likelihood (earliest restart on ties).
CommunityModel detect_layer(const LayerConnections& layer, const EmOptions& options,
                            std::uint64_t seed, std::vector<EmTrace>* traces = nullptr);

// argmax_c q_kc per unit, ties to the lowest index.
std::vector<std::size_t> assign(const CommunityModel& model);

// Runs detect_layer on every layer of the graph. `communities` holds C per
// layer; a single value is broadcast. Layer d uses seed derive_seed(seed, d).
std::vector<CommunityModel> detect_all_layers(const LayerGraph& graph,
                                              const std::vector<std::size_t>& communities,
                                              const EmOptions& options, std::uint64_t seed,
                                              std::vector<std::vector<EmTrace>>* traces = nullptr);

}  // namespace modnet

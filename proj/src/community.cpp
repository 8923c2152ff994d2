#include "modnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "modnet/errors.hpp"

namespace modnet {

namespace {
constexpr double kPriorFloor = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void normalize(std::span<double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

Matrix log_of(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t e = 0; e < m.size(); ++e) out.data()[e] = std::log(m.data()[e]);
  return out;
}

void check_params(const LayerConnections& layer, const EmParams& params) {
  const std::size_t c = params.communities();
  if (c == 0) throw ArgumentError("at least one community is required");
  if (layer.incoming &&
      (params.incoming.rows() != c || params.incoming.cols() != layer.parent_width()))
    throw ShapeError("tau does not match the incoming matrix");
  if (layer.outgoing &&
      (params.outgoing.rows() != c || params.outgoing.cols() != layer.child_width()))
    throw ShapeError("tau' does not match the outgoing matrix");
}
}  // namespace

std::size_t LayerConnections::width() const {
  if (incoming) return incoming->cols();
  if (outgoing) return outgoing->rows();
  return 0;
}

void LayerConnections::validate() const {
  if (!incoming && !outgoing) throw ArgumentError("layer has neither parent nor child matrix");
  if (incoming && outgoing && incoming->cols() != outgoing->rows())
    throw ShapeError("incoming and outgoing matrices disagree on the layer width");
  if (width() == 0) throw ArgumentError("layer has no units");
}

LayerConnections layer_connections(const LayerGraph& graph, std::size_t layer) {
  return {graph.incoming(layer), graph.outgoing(layer)};
}

Matrix log_masses(const LayerConnections& layer, const EmParams& params) {
  layer.validate();
  check_params(layer, params);
  const std::size_t width = layer.width();
  const std::size_t c_count = params.communities();
  Matrix out(width, c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    const double lp = std::log(params.prior[c]);
    for (std::size_t k = 0; k < width; ++k) out(k, c) = lp;
  }
  if (layer.incoming) {
    const Matrix& a = *layer.incoming;
    const Matrix ltau = log_of(params.incoming);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < width; ++k) {
        const double aik = a(i, k);
        for (std::size_t c = 0; c < c_count; ++c) out(k, c) += aik * ltau(c, i);
      }
  }
  if (layer.outgoing) {
    const Matrix& b = *layer.outgoing;
    const Matrix ltau = log_of(params.outgoing);
    for (std::size_t k = 0; k < width; ++k)
      for (std::size_t c = 0; c < c_count; ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < b.cols(); ++j) s += b(k, j) * ltau(c, j);
        out(k, c) += s;
      }
  }
  return out;
}

double expected_log_likelihood(const LayerConnections& layer, const EmParams& params,
                               const Matrix& responsibilities) {
  const Matrix lm = log_masses(layer, params);
  if (responsibilities.rows() != lm.rows() || responsibilities.cols() != lm.cols())
    throw ShapeError("responsibilities do not match the layer");
  double total = 0.0;
  for (std::size_t e = 0; e < lm.size(); ++e) {
    const double q = responsibilities.data()[e];
    if (q == 0.0) continue;
    if (!std::isfinite(lm.data()[e]))
      throw NumericDomainError("zero parameter carries nonzero responsibility");
    total += q * lm.data()[e];
  }
  return total;
}

Matrix e_step(const LayerConnections& layer, const EmParams& params) {
  Matrix q = log_masses(layer, params);
  for (std::size_t k = 0; k < q.rows(); ++k) {
    auto row = q.row(k);
    const double mx = *std::max_element(row.begin(), row.end());
    if (mx == kNegInf || std::isnan(mx))
      throw NumericDomainError("unit " + std::to_string(k) + " has zero mass in every community");
    for (double& v : row) v = std::exp(v - mx);
    normalize(row);
  }
  return q;
}

EmParams m_step(const LayerConnections& layer, const Matrix& responsibilities) {
  layer.validate();
  const std::size_t width = layer.width();
  const std::size_t c_count = responsibilities.cols();
  if (responsibilities.rows() != width) throw ShapeError("responsibilities do not match the layer");
  if (c_count == 0) throw ArgumentError("at least one community is required");

  EmParams p;
  p.prior.assign(c_count, 0.0);
  for (std::size_t k = 0; k < width; ++k)
    for (std::size_t c = 0; c < c_count; ++c) p.prior[c] += responsibilities(k, c);

  auto fit = [&](const Matrix& m, bool incoming, std::size_t other) {
    Matrix tau(c_count, other, 0.0);
    for (std::size_t c = 0; c < c_count; ++c) {
      for (std::size_t k = 0; k < width; ++k) {
        const double q = responsibilities(k, c);
        if (q == 0.0) continue;
        for (std::size_t x = 0; x < other; ++x) tau(c, x) += q * (incoming ? m(x, k) : m(k, x));
      }
      auto row = tau.row(c);
      double s = 0.0;
      for (double v : row) s += v;
      if (s > 0.0) {
        for (double& v : row) v /= s;
      } else {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(other));
      }
    }
    return tau;
  };
  if (layer.incoming) p.incoming = fit(*layer.incoming, true, layer.parent_width());
  if (layer.outgoing) p.outgoing = fit(*layer.outgoing, false, layer.child_width());

  for (double& v : p.prior) {
    v /= static_cast<double>(width);
    if (v <= 0.0) v = kPriorFloor;
  }
  normalize(p.prior);
  return p;
}

EmParams random_params(const LayerConnections& layer, std::size_t communities, Rng& rng) {
  layer.validate();
  if (communities == 0) throw ArgumentError("at least one community is required");
  // Open interval (0,1): a zero draw would make a parameter exactly zero.
  std::uniform_real_distribution<double> u(std::nextafter(0.0, 1.0), 1.0);
  EmParams p;
  p.prior.resize(communities);
  for (double& v : p.prior) v = u(rng);
  normalize(p.prior);
  auto draw = [&](std::size_t cols) {
    Matrix m(communities, cols);
    for (std::size_t c = 0; c < communities; ++c) {
      for (double& v : m.row(c)) v = u(rng);
      normalize(m.row(c));
    }
    return m;
  };
  if (layer.incoming) p.incoming = draw(layer.parent_width());
  if (layer.outgoing) p.outgoing = draw(layer.child_width());
  return p;
}

CommunityModel run_em_chain(const LayerConnections& layer, EmParams initial,
                            std::size_t iterations, EmTrace* trace,
                            std::optional<double> tolerance) {
  layer.validate();
  CommunityModel model;
  model.params = std::move(initial);
  if (iterations == 0) {
    model.responsibilities = e_step(layer, model.params);
    model.expected_log_likelihood =
        expected_log_likelihood(layer, model.params, model.responsibilities);
    return model;
  }
  double previous = kNegInf;
  for (std::size_t it = 0; it < iterations; ++it) {
    model.responsibilities = e_step(layer, model.params);
    model.params = m_step(layer, model.responsibilities);
    const double ell = expected_log_likelihood(layer, model.params, model.responsibilities);
    model.expected_log_likelihood = ell;
    if (trace) trace->push_back(ell);
    if (tolerance && std::abs(ell - previous) < *tolerance) break;
    previous = ell;
  }
  return model;
}

CommunityModel detect_layer(const LayerConnections& layer, const EmOptions& options,
                            std::uint64_t seed, std::vector<EmTrace>* traces) {
  layer.validate();
  if (options.communities == 0) throw ArgumentError("at least one community is required");
  if (options.restarts == 0) throw ArgumentError("at least one restart is required");
  std::optional<CommunityModel> best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Rng rng = make_rng(derive_seed(seed, r));
    EmTrace trace;
    CommunityModel model =
        run_em_chain(layer, random_params(layer, options.communities, rng), options.iterations,
                     traces ? &trace : nullptr, options.tolerance);
    if (traces) traces->push_back(std::move(trace));
    if (!best || model.expected_log_likelihood > best->expected_log_likelihood)
      best = std::move(model);
  }
  return std::move(*best);
}

std::vector<std::size_t> assign(const CommunityModel& model) {
  std::vector<std::size_t> g(model.width());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto row = model.responsibilities.row(k);
    // max_element returns the first maximum.
    g[k] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return g;
}

std::vector<CommunityModel> detect_all_layers(const LayerGraph& graph,
                                              const std::vector<std::size_t>& communities,
                                              const EmOptions& options, std::uint64_t seed,
                                              std::vector<std::vector<EmTrace>>* traces) {
  graph.validate();
  if (communities.size() != 1 && communities.size() != graph.depth())
    throw ArgumentError("expected one community count or one per layer");
  std::vector<CommunityModel> models;
  if (traces) traces->assign(graph.depth(), {});
  for (std::size_t d = 0; d < graph.depth(); ++d) {
    EmOptions layer_options = options;
    layer_options.communities = communities.size() == 1 ? communities[0] : communities[d];
    models.push_back(detect_layer(layer_connections(graph, d), layer_options,
                                  derive_seed(seed, d), traces ? &(*traces)[d] : nullptr));
  }
  return models;
}

}  // namespace modnet

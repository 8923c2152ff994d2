#include "modnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modnet/errors.hpp"
#include "modnet/rng.hpp"

namespace modnet {

namespace {
enum Stream : std::uint64_t { kInputs = 0, kGenerator = 1, kBundles = 2, kNoise = 3 };

std::vector<std::string> names(const char* prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}
}  // namespace

Matrix gen_correlated_inputs(std::size_t n, double alpha, std::uint64_t seed, std::size_t dim,
                             double variance) {
  if (dim == 0 || dim % GroundTruth::kBlocks != 0)
    throw ArgumentError("input dimension must be a positive multiple of 3");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in [0, 1)");
  const std::size_t block = dim / GroundTruth::kBlocks;
  Rng rng = make_rng(seed);
  Matrix x(n, dim);
  std::vector<double> z(dim);
  for (std::size_t s = 0; s < n; ++s) {
    for (double& v : z) v = normal_variance(rng, 0.0, variance);
    for (std::size_t j = 0; j < dim; ++j) {
      if (j < block) {
        x(s, j) = z[j];
      } else {
        const std::size_t offset = j < 2 * block ? block : 2 * block;
        x(s, j) = (1.0 - alpha) * z[j] + alpha * z[j - offset];
      }
    }
  }
  return x;
}

std::pair<Dataset, GroundTruth> generate_synthetic(const SynthOptions& options,
                                                   std::uint64_t seed) {
  if (options.samples == 0) throw ArgumentError("need at least one sample");
  if (options.block_size == 0) throw ArgumentError("block size must be positive");
  const std::size_t bs = options.block_size;
  const std::size_t width = GroundTruth::kBlocks * bs;

  GroundTruth truth;
  truth.block_size = bs;
  truth.kappa = options.kappa;
  truth.alpha = options.alpha;
  for (std::size_t d = 0; d < 3; ++d) {
    std::vector<std::size_t> labels(width);
    for (std::size_t u = 0; u < width; ++u) labels[u] = u / bs;
    truth.block_of.push_back(std::move(labels));
  }

  // Block-diagonal merge of three independent width-bs networks.
  truth.generator = NetworkParams({width, width, width});
  Rng gen = make_rng(derive_seed(seed, kGenerator));
  for (std::size_t b = 0; b < GroundTruth::kBlocks; ++b) {
    for (std::size_t d = 0; d < 2; ++d) {
      Matrix& w = truth.generator.weights[d];
      for (std::size_t i = 0; i < bs; ++i)
        for (std::size_t j = 0; j < bs; ++j) {
          const double v = normal_variance(gen, 0.0, options.weight_variance);
          w(b * bs + i, b * bs + j) = std::abs(v) <= options.sparsify_at ? 0.0 : v;
        }
      for (std::size_t j = 0; j < bs; ++j)
        truth.generator.biases[d][b * bs + j] = normal_variance(gen, 0.0, options.bias_variance);
    }
  }

  if (options.kappa > 0) {
    std::vector<AddedBundle> candidates;
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t a = 0; a < GroundTruth::kBlocks; ++a)
        for (std::size_t b = 0; b < GroundTruth::kBlocks; ++b)
          if (a != b) candidates.push_back({d, a, b});
    if (options.kappa > candidates.size())
      throw ArgumentError("kappa exceeds the " + std::to_string(candidates.size()) +
                          " available cross-block community pairs");
    Rng rng = make_rng(derive_seed(seed, kBundles));
    // Partial Fisher-Yates: first kappa entries are a uniform sample
    // without repetition.
    for (std::size_t i = 0; i < options.kappa; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
      std::swap(candidates[i], candidates[pick(rng)]);
      const AddedBundle& bundle = candidates[i];
      Matrix& w = truth.generator.weights[bundle.layer];
      for (std::size_t u = 0; u < bs; ++u)
        for (std::size_t v = 0; v < bs; ++v)
          w(bundle.from_block * bs + u, bundle.to_block * bs + v) =
              normal_variance(rng, 0.0, options.weight_variance);
      truth.bundles.push_back(bundle);
    }
  }

  Dataset data;
  data.inputs = gen_correlated_inputs(options.samples, options.alpha,
                                      derive_seed(seed, kInputs), width, options.input_variance);
  data.outputs = Matrix(options.samples, width);
  Rng noise = make_rng(derive_seed(seed, kNoise));
  for (std::size_t s = 0; s < options.samples; ++s) {
    const auto out = predict(truth.generator, data.inputs.row(s));
    for (std::size_t j = 0; j < width; ++j)
      data.outputs(s, j) = out[j] + normal_variance(noise, 0.0, options.noise_variance);
  }
  data.input_names = names("x", width);
  data.output_names = names("y", width);
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset, GroundTruth> gen_independent(std::size_t n, std::size_t block_size,
                                                std::uint64_t seed) {
  SynthOptions o;
  o.samples = n;
  o.block_size = block_size;
  return generate_synthetic(o, seed);
}

std::pair<Dataset, GroundTruth> gen_dependent(std::size_t n, std::size_t kappa,
                                              std::uint64_t seed, std::size_t block_size) {
  SynthOptions o;
  o.samples = n;
  o.block_size = block_size;
  o.kappa = kappa;
  return generate_synthetic(o, seed);
}

std::vector<std::size_t> input_blocks(const GroundTruth& truth) { return truth.block_of.front(); }
std::vector<std::size_t> output_blocks(const GroundTruth& truth) { return truth.block_of.back(); }

}  // namespace modnet

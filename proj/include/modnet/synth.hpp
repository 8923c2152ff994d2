#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modnet/dataset.hpp"
#include "modnet/network.hpp"

namespace modnet {

// A cross-block bundle wired into the generator: every unit of block
// `from_block` in `layer` connects to every unit of block `to_block` in
// `layer + 1`.
struct AddedBundle {
  std::size_t layer = 0;
  std::size_t from_block = 0;
  std::size_t to_block = 0;
  friend bool operator==(const AddedBundle&, const AddedBundle&) = default;
};

struct GroundTruth {
  static constexpr std::size_t kBlocks = 3;

  std::size_t block_size = 15;
  // block_of[layer][unit] for the generator's input, hidden and output layers.
  std::vector<std::vector<std::size_t>> block_of;
  // The three generator networks merged block-diagonally into one 3-layer
  // network, plus any added bundles.
  NetworkParams generator;
  std::vector<AddedBundle> bundles;
  std::size_t kappa = 0;
  double alpha = 0.0;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct SynthOptions {
  std::size_t samples = 1000;
  std::size_t block_size = 15;
  std::size_t kappa = 0;   // cross-block bundles added to the generator
  double alpha = 0.0;      // input dependence, 0 <= alpha < 1
  double input_variance = 3.0;
  double weight_variance = 2.0;
  double bias_variance = 0.5;
  double sparsify_at = 1.0;  // generator weights with |w| <= this become 0
  double noise_variance = 0.05;
};

// Inputs z ~ N(0, 3) of dimension `dim` (a multiple of 3, blocks of dim/3)
// mixed as x_j = z_j in the first block and x_j = (1 - alpha) z_j +
// alpha z_{j - offset} in the second and third, offset being one or two
// block widths.
Matrix gen_correlated_inputs(std::size_t n, double alpha, std::uint64_t seed,
                             std::size_t dim = 15, double variance = 3.0);

// Full generator: inputs, three sparse random sigmoid networks (plus kappa
// bundles), outputs with additive Gaussian noise.
std::pair<Dataset, GroundTruth> generate_synthetic(const SynthOptions& options,
                                                   std::uint64_t seed);

std::pair<Dataset, GroundTruth> gen_independent(std::size_t n, std::size_t block_size,
                                                std::uint64_t seed);
std::pair<Dataset, GroundTruth> gen_dependent(std::size_t n, std::size_t kappa,
                                              std::uint64_t seed, std::size_t block_size = 15);

// Labels for an arbitrary trained network whose input/output layers follow
// the ground-truth column order: input and output units inherit their block.
std::vector<std::size_t> input_blocks(const GroundTruth& truth);
std::vector<std::size_t> output_blocks(const GroundTruth& truth);

}  // namespace modnet

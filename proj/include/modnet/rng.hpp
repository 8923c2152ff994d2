#pragma once

#include <cstdint>
#include <random>

namespace modnet {

// Every stochastic operation in the library draws from this engine and takes
// it (or a seed to build one) explicitly.
using Rng = std::mt19937_64;

// Derives an independent 64-bit seed for sub-stream `stream` of `base`
// (splitmix64 finalizer over the pair). Used to give each trial, restart and
// pipeline stage its own generator.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Gaussian draw parameterized by variance, matching the N(mean, variance)
// convention used throughout.
double normal_variance(Rng& rng, double mean, double variance);

}  // namespace modnet

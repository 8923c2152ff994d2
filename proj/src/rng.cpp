#include "modnet/rng.hpp"

#include <cmath>

namespace modnet {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

double normal_variance(Rng& rng, double mean, double variance) {
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  return dist(rng);
}

}  // namespace modnet

#include "vqc/random.hpp"

#include <algorithm>
#include <random>

namespace vqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

RealVector InitScheme::draw(int num_params, std::uint64_t index) const {
  std::mt19937_64 rng(derive_seed(seed, 0x1417, index));
  RealVector theta(num_params);
  if (sigma <= 0.0) {
    theta.setConstant(std::clamp(mean, clip_lo, clip_hi));
    return theta;
  }
  std::normal_distribution<double> normal(mean, sigma);
  for (int j = 0; j < num_params; ++j) theta(j) = std::clamp(normal(rng), clip_lo, clip_hi);
  return theta;
}

}  // namespace vqc

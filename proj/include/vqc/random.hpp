#pragma once

#include <cstdint>

#include "vqc/tensor.hpp"

namespace vqc {

/// Counter-based seed split: the same (master, stream, index) always yields the
/// same child seed, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Gaussian initial parameters clipped to [clip_lo, clip_hi].
struct InitScheme {
  double mean = 0.0;
  double sigma = 0.5;
  double clip_lo = -1.0;
  double clip_hi = 1.0;
  std::uint64_t seed = 0;

  /// Draw number `index` from this scheme; reproducible per (seed, index).
  RealVector draw(int num_params, std::uint64_t index) const;
};

}  // namespace vqc

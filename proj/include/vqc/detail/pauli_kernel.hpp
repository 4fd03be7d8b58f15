#pragma once

// In-place action of Pauli strings and Pauli rotations on basis-indexed rows.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "vqc/pauli.hpp"

namespace vqc::detail {

/// P|x> = i^y_count * (-1)^popcount(x & z_mask) |x ^ x_mask>.
struct PauliOp {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;

  static PauliOp from(const PauliString& p, int shift = 0) {
    return {p.x_mask() << shift, p.z_mask() << shift, p.y_count()};
  }

  std::complex<double> phase(std::uint64_t x) const {
    static constexpr std::complex<double> kIPow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    auto ph = kIPow[y_count & 3];
    return (std::popcount(x & z_mask) & 1) ? -ph : ph;
  }
};

/// rows <- exp(-i * a * P) rows, rows indexed by basis state.
template <typename Derived>
void apply_rotation(Eigen::MatrixBase<Derived>& m, const PauliOp& p, double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  const std::complex<double> mis(0.0, -s);
  const auto dim = static_cast<std::uint64_t>(m.rows());
  if (p.x_mask == 0) {
    for (std::uint64_t x = 0; x < dim; ++x) {
      m.row(x) *= std::complex<double>(c, 0.0) + mis * p.phase(x);
    }
    return;
  }
  const std::uint64_t top = std::bit_floor(p.x_mask);
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & top) continue;
    const std::uint64_t y = x ^ p.x_mask;
    const auto kx = mis * p.phase(y);  // coefficient of row y in new row x
    const auto ky = mis * p.phase(x);
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      const auto vx = m(x, col);
      const auto vy = m(y, col);
      m(x, col) = c * vx + kx * vy;
      m(y, col) = c * vy + ky * vx;
    }
  }
}

/// Tr(M P).
template <typename Derived>
std::complex<double> trace_with(const Eigen::MatrixBase<Derived>& m, const PauliOp& p) {
  std::complex<double> acc = 0.0;
  const auto dim = static_cast<std::uint64_t>(m.rows());
  for (std::uint64_t x = 0; x < dim; ++x) acc += p.phase(x) * m(x, x ^ p.x_mask);
  return acc;
}

}  // namespace vqc::detail

#pragma once

// Real Pauli transfer matrices for channels on the circuit register.
//
// Pauli basis index: (x_mask << n) | z_mask, the Pauli being
// i^popcount(x & z) X^x Z^z with the usual qubit-1-is-MSB bit convention.
// Entry (i, j) of a transfer matrix is Tr(P_i E(P_j)) / 2^n.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vqc/detail/pauli_kernel.hpp"
#include "vqc/simulator.hpp"

namespace vqc::detail {

using Ptm = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Anticommuting pairs (q, r), q < r, with -i P P_q = sign * P_r.
struct RotationPairs {
  std::vector<std::uint32_t> q, r;
  std::vector<double> sign;
};

RotationPairs rotation_pairs(const PauliOp& p, int n);

/// m <- PTM(exp(-i a P)) * m.
void rotate_rows(Ptm& m, const RotationPairs& pairs, double a);

/// 4x4 transfer matrix of a single-qubit channel, local order (I, Z, X, Y).
Eigen::Matrix4d single_qubit_ptm(const KrausChannel& ch);

/// m <- (channel on `qubit`) * m.
void channel_rows(Ptm& m, const Eigen::Matrix4d& r, int n, int qubit);

Ptm unitary_ptm(const ComplexMatrix& u);

/// Process fidelity |Tr(V^dagger K_k)|^2 / d^2 summed over the Kraus operators
/// of the noisy circuit; equal to the density-matrix HS-test probability.
class NoisyProcessFidelity {
 public:
  NoisyProcessFidelity(const NoisyCircuitPlan& plan, const ComplexMatrix& target);
  double operator()(const RealVector& theta) const;

 private:
  NoisyCircuitPlan plan_;
  int n_;
  std::vector<RotationPairs> gates_;
  Eigen::Matrix4d channel_;
  Ptm target_ptm_;
};

}  // namespace vqc::detail

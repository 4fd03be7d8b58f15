#pragma once

// Hamiltonian variational ansatz: m first-order Trotter layers, one rotation
// per Hamiltonian term, parameters shared across layers.

#include <array>
#include <vector>

#include "vqc/detail/pauli_kernel.hpp"
#include "vqc/pauli.hpp"
#include "vqc/tensor.hpp"

namespace vqc {

enum class GateKind { SingleRotation, TwoRotation };

/// R_a(phi) = exp(-i phi/2 sigma_a) or R_aa(phi) = exp(-i phi/2 sigma_a sigma_a)
/// with phi = angle_scale * theta[param_index].
struct GateOp {
  GateKind kind = GateKind::SingleRotation;
  Pauli axis = Pauli::X;
  std::array<int, 2> qubits{0, 0};  // 0-based; qubits[1] unused for single rotations
  int param_index = 0;
  double angle_scale = 2.0;

  int arity() const { return kind == GateKind::SingleRotation ? 1 : 2; }
  PauliString generator(int n) const;
  double angle(const RealVector& theta) const { return angle_scale * theta(param_index); }
};

struct AnsatzCircuit {
  int n = 0;
  int depth = 0;
  double t0 = 1.0;
  int num_params = 0;
  /// Gate list of one Trotter layer; every layer applies this same list.
  std::vector<GateOp> layer;

  int gate_count() const { return depth * static_cast<int>(layer.size()); }
  Eigen::Index dim() const { return Eigen::Index{1} << n; }
};

AnsatzCircuit build_hva(const HamiltonianSpec& spec, int depth, double t0 = 1.0);

/// Dense unitary of a single gate on the circuit's n qubits.
ComplexMatrix gate_unitary(const AnsatzCircuit& c, const GateOp& g, const RealVector& theta);
/// Dense unitary of one Trotter layer.
ComplexMatrix layer_unitary(const AnsatzCircuit& c, const RealVector& theta);
/// Ordered product of every gate in the circuit.
ComplexMatrix circuit_unitary(const AnsatzCircuit& c, const RealVector& theta);

/// Gate-by-gate application to a register of >= n qubits; the circuit acts on
/// register qubits [offset, offset + n).
StateVector apply_circuit(const AnsatzCircuit& c, const RealVector& theta,
                          const StateVector& psi, int offset = 0);

namespace detail {
/// Generator of `g` on an n-qubit circuit whose basis bits are shifted left by `shift`.
PauliOp gate_pauli_op(const GateOp& g, int n, int shift = 0);
}  // namespace detail

}  // namespace vqc

#pragma once

// Statevector and density-matrix execution, Kraus channels, and the
// Hilbert-Schmidt test on a 2n-qubit register.

#include <string>
#include <vector>

#include "vqc/ansatz.hpp"
#include "vqc/gates.hpp"
#include "vqc/tensor.hpp"

namespace vqc {

/// Single-qubit channel rho -> sum_k E_k rho E_k^dagger.
struct KrausChannel {
  std::string label;
  std::vector<ComplexMatrix> operators;

  /// max |sum_k E_k^dagger E_k - I|.
  double completeness_error() const;
};

/// E0 = [[1, 0], [0, sqrt(1 - p)]], E1 = [[0, sqrt(p)], [0, 0]].
KrausChannel amplitude_damping(double p);

enum class Placement { AfterEachLayer, AfterEachGate, FinalOnly };

const char* placement_name(Placement p);
Placement parse_placement(const std::string& name);

struct NoisyCircuitPlan {
  AnsatzCircuit circuit;
  KrausChannel channel;
  Placement placement = Placement::AfterEachLayer;
  std::vector<int> target_qubits;  // 0-based circuit qubits
};

/// Channel after every layer on every circuit qubit.
NoisyCircuitPlan damping_plan(const AnsatzCircuit& c, double p,
                              Placement placement = Placement::AfterEachLayer);

// Register-level primitives. Circuit-local qubit q of an operator placed at
// `offset` is register qubit offset + q (0-based, qubit 0 most significant).
StateVector apply_gate(const StateVector& psi, const ComplexMatrix& u, int offset);
DensityMatrix apply_gate(const DensityMatrix& rho, const ComplexMatrix& u, int offset);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, int qubit);

/// Alternates unitary segments of plan.circuit with the channel, as set by the
/// plan's placement; the circuit acts on register qubits [offset, offset + n).
DensityMatrix evolve_density(const NoisyCircuitPlan& plan, const RealVector& theta,
                             const DensityMatrix& rho, int offset = 0);

/// n Bell pairs (qubit i with qubit n + i) prepared with H and CNOT.
StateVector bell_register(int n);

/// Probability of the all-zeros outcome of the Hilbert-Schmidt test. With a
/// plan, the channel acts inside U_QC only and the run is on density matrices.
double hs_test_probability(const AnsatzCircuit& c, const RealVector& theta,
                           const TargetGate& target, const NoisyCircuitPlan* plan = nullptr);

}  // namespace vqc

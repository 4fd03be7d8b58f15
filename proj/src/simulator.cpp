#include "vqc/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace vqc {

namespace {

using RowBlock = Eigen::Matrix<Complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_placement(int total, int offset, int k) {
  if (offset < 0 || offset + k > total) {
    throw DimMismatch("operator does not fit in the register");
  }
}

// rows <- (I (x) u (x) I) rows for a row-major matrix. With hi = 2^offset and
// lo = 2^(total - offset - k), each hi-slice is a contiguous 2^k x (lo * cols)
// row-major block, so the action is one dense product per slice.
void left_local(DensityMatrix& m, const ComplexMatrix& u, int offset) {
  const int total = qubit_count(m.rows());
  const int k = qubit_count(u.rows());
  check_placement(total, offset, k);
  const Eigen::Index sub = u.rows();
  const Eigen::Index slice_cols = (m.rows() >> (offset + k)) * m.cols();
  const Eigen::Index hi = Eigen::Index{1} << offset;
  RowBlock tmp(sub, slice_cols);
  for (Eigen::Index h = 0; h < hi; ++h) {
    Eigen::Map<RowBlock> block(m.data() + h * sub * slice_cols, sub, slice_cols);
    // Row-wise accumulation; faster than a general product for these shapes.
    for (Eigen::Index i = 0; i < sub; ++i) {
      tmp.row(i) = u(i, 0) * block.row(0);
      for (Eigen::Index j = 1; j < sub; ++j) tmp.row(i) += u(i, j) * block.row(j);
    }
    block = tmp;
  }
}

// Same action on a vector: each hi-slice viewed column-major is lo x 2^k.
void left_local(StateVector& psi, const ComplexMatrix& u, int offset) {
  const int total = qubit_count(psi.size());
  const int k = qubit_count(u.rows());
  check_placement(total, offset, k);
  const Eigen::Index sub = u.rows();
  const Eigen::Index lo = psi.size() >> (offset + k);
  const Eigen::Index hi = Eigen::Index{1} << offset;
  for (Eigen::Index h = 0; h < hi; ++h) {
    Eigen::Map<ComplexMatrix> block(psi.data() + h * sub * lo, lo, sub);
    block = (block * u.transpose()).eval();
  }
}

// rho <- U rho U^dagger through two left actions: (U (U rho)^dagger)^dagger.
void conjugate(DensityMatrix& rho, const ComplexMatrix& u, int offset) {
  left_local(rho, u, offset);
  rho = rho.adjoint().eval();
  left_local(rho, u, offset);
  rho = rho.adjoint().eval();
}

// Applies the superoperator sum_k E_k (.) E_k^dagger to every 2x2 block that
// couples the two values of `bit` in the row and column index. The block is
// handled as the vector (b00, b01, b10, b11); only nonzero superoperator
// entries are visited.
void channel_in_place(DensityMatrix& rho, const KrausChannel& ch, Eigen::Index bit) {
  Eigen::Matrix4cd super = Eigen::Matrix4cd::Zero();
  for (const auto& e : ch.operators) {
    const Eigen::Matrix2cd ek = e;
    // vec_rowmajor(E B E^dagger) = (E kron conj(E)) vec_rowmajor(B)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) super(2 * i + j, 2 * k + l) += ek(i, k) * std::conj(ek(j, l));
  }
  struct Entry {
    int out, in;
    Complex<double> w;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (super(i, j) != Complex<double>(0.0)) entries.push_back({i, j, super(i, j)});

  const Eigen::Index dim = rho.rows();
  Complex<double> in[4], out[4];
  for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
    if (r0 & bit) continue;
    Complex<double>* row0 = rho.data() + r0 * dim;
    Complex<double>* row1 = rho.data() + (r0 | bit) * dim;
    for (Eigen::Index c0 = 0; c0 < dim; ++c0) {
      if (c0 & bit) continue;
      const Eigen::Index c1 = c0 | bit;
      in[0] = row0[c0]; in[1] = row0[c1]; in[2] = row1[c0]; in[3] = row1[c1];
      out[0] = out[1] = out[2] = out[3] = 0.0;
      for (const auto& e : entries) out[e.out] += e.w * in[e.in];
      row0[c0] = out[0]; row0[c1] = out[1]; row1[c0] = out[2]; row1[c1] = out[3];
    }
  }
}

void apply_targets(DensityMatrix& rho, const NoisyCircuitPlan& plan, int offset) {
  const int total = qubit_count(rho.rows());
  for (int q : plan.target_qubits) {
    if (q < 0 || q >= plan.circuit.n) throw DimMismatch("plan target qubit out of range");
    channel_in_place(rho, plan.channel, Eigen::Index{1} << (total - 1 - offset - q));
  }
}

template <typename M>
void hadamard(M& m, int qubit) {
  left_local(m, elementary("H").matrix, qubit);
}

// CNOT between non-adjacent register qubits: swap rows with control=1,
// target=0 against control=1, target=1.
void cnot_rows(StateVector& psi, int control, int target) {
  const int total = qubit_count(psi.size());
  const Eigen::Index cbit = Eigen::Index{1} << (total - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (total - 1 - target);
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    if ((x & cbit) && !(x & tbit)) std::swap(psi(x), psi(x | tbit));
  }
}

}  // namespace

double KrausChannel::completeness_error() const {
  if (operators.empty()) return 1.0;
  ComplexMatrix sum = ComplexMatrix::Zero(operators.front().rows(), operators.front().cols());
  for (const auto& e : operators) sum += e.adjoint() * e;
  return max_abs((sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).eval());
}

KrausChannel amplitude_damping(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("amplitude_damping: p must lie in [0, 1]");
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - p);
  e1 << 0.0, std::sqrt(p), 0.0, 0.0;
  return {"amplitude_damping", {e0, e1}};
}

const char* placement_name(Placement p) {
  switch (p) {
    case Placement::AfterEachLayer: return "after-each-layer";
    case Placement::AfterEachGate: return "after-each-gate";
    case Placement::FinalOnly: return "final-only";
  }
  return "?";
}

Placement parse_placement(const std::string& name) {
  for (Placement p : {Placement::AfterEachLayer, Placement::AfterEachGate, Placement::FinalOnly}) {
    if (name == placement_name(p)) return p;
  }
  throw ConfigError("unknown channel placement '" + name + "'");
}

NoisyCircuitPlan damping_plan(const AnsatzCircuit& c, double p, Placement placement) {
  NoisyCircuitPlan plan{c, amplitude_damping(p), placement, {}};
  for (int q = 0; q < c.n; ++q) plan.target_qubits.push_back(q);
  return plan;
}

StateVector apply_gate(const StateVector& psi, const ComplexMatrix& u, int offset) {
  StateVector out = psi;
  left_local(out, u, offset);
  return out;
}

DensityMatrix apply_gate(const DensityMatrix& rho, const ComplexMatrix& u, int offset) {
  DensityMatrix out = rho;
  conjugate(out, u, offset);
  return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, int qubit) {
  const int total = qubit_count(rho.rows());
  if (qubit < 0 || qubit >= total) throw DimMismatch("apply_channel: qubit out of range");
  DensityMatrix out = rho;
  channel_in_place(out, ch, Eigen::Index{1} << (total - 1 - qubit));
  return out;
}

DensityMatrix evolve_density(const NoisyCircuitPlan& plan, const RealVector& theta,
                             const DensityMatrix& rho, int offset) {
  const auto& c = plan.circuit;
  if (rho.rows() != rho.cols()) throw DimMismatch("evolve_density: density matrix not square");
  check_placement(qubit_count(rho.rows()), offset, c.n);
  DensityMatrix out = rho;
  switch (plan.placement) {
    case Placement::FinalOnly:
      conjugate(out, circuit_unitary(c, theta), offset);
      apply_targets(out, plan, offset);
      break;
    case Placement::AfterEachLayer: {
      const ComplexMatrix layer = layer_unitary(c, theta);
      for (int l = 0; l < c.depth; ++l) {
        conjugate(out, layer, offset);
        apply_targets(out, plan, offset);
      }
      break;
    }
    case Placement::AfterEachGate: {
      std::vector<ComplexMatrix> gates;
      for (const auto& g : c.layer) gates.push_back(gate_unitary(c, g, theta));
      for (int l = 0; l < c.depth; ++l) {
        for (const auto& g : gates) {
          conjugate(out, g, offset);
          apply_targets(out, plan, offset);
        }
      }
      break;
    }
  }
  return out;
}

StateVector bell_register(int n) {
  StateVector psi = basis_state(Eigen::Index{1} << (2 * n), 0);
  for (int q = 0; q < n; ++q) {
    hadamard(psi, q);
    cnot_rows(psi, q, n + q);
  }
  return psi;
}

double hs_test_probability(const AnsatzCircuit& c, const RealVector& theta,
                           const TargetGate& target, const NoisyCircuitPlan* plan) {
  if (target.n != c.n) throw DimMismatch("hs_test_probability: target and circuit sizes differ");
  const int n = c.n;
  const ComplexMatrix target_inv = target.matrix.adjoint();
  const StateVector prep = bell_register(n);

  if (plan == nullptr) {
    StateVector psi = apply_circuit(c, theta, prep, 0);
    left_local(psi, target_inv, 0);
    // Undo the Bell preparation in reverse order.
    for (int q = n - 1; q >= 0; --q) {
      cnot_rows(psi, q, n + q);
      hadamard(psi, q);
    }
    return std::norm(psi(0));
  }

  if (plan->circuit.n != n || plan->circuit.depth != c.depth ||
      plan->circuit.num_params != c.num_params) {
    throw DimMismatch("hs_test_probability: plan circuit differs from the compiled circuit");
  }
  DensityMatrix rho = evolve_density(*plan, theta, pure_density(prep), 0);
  conjugate(rho, target_inv, 0);
  // Undoing the (unitary) Bell preparation B and reading |0..0> is <0|B^dagger rho B|0>,
  // i.e. the overlap with the prepared state.
  return std::max(0.0, (prep.adjoint() * rho * prep)(0, 0).real());
}

}  // namespace vqc

#include "vqc/ansatz.hpp"

#include "vqc/detail/pauli_kernel.hpp"

namespace vqc {

namespace {

void check_theta(const AnsatzCircuit& c, const RealVector& theta) {
  if (theta.size() != c.num_params) {
    throw LengthMismatch("ansatz: expected " + std::to_string(c.num_params) +
                         " parameters, got " + std::to_string(theta.size()));
  }
}

}  // namespace

detail::PauliOp detail::gate_pauli_op(const GateOp& g, int n, int shift) {
  std::uint64_t bits = std::uint64_t{1} << (n - 1 - g.qubits[0]);
  if (g.kind == GateKind::TwoRotation) bits |= std::uint64_t{1} << (n - 1 - g.qubits[1]);
  bits <<= shift;
  detail::PauliOp op;
  op.x_mask = (g.axis == Pauli::X || g.axis == Pauli::Y) ? bits : 0;
  op.z_mask = (g.axis == Pauli::Z || g.axis == Pauli::Y) ? bits : 0;
  op.y_count = g.axis == Pauli::Y ? g.arity() : 0;
  return op;
}

namespace {

template <typename Derived>
void apply_layer(const AnsatzCircuit& c, const RealVector& theta,
                 Eigen::MatrixBase<Derived>& m, int shift) {
  for (const auto& g : c.layer) {
    detail::apply_rotation(m, detail::gate_pauli_op(g, c.n, shift), 0.5 * g.angle(theta));
  }
}

}  // namespace

PauliString GateOp::generator(int n) const {
  return kind == GateKind::SingleRotation ? local_pauli(n, qubits[0], axis)
                                          : bond_pauli(n, qubits[0], axis);
}

AnsatzCircuit build_hva(const HamiltonianSpec& spec, int depth, double t0) {
  if (depth < 1) throw InvalidDepth("build_hva: Trotter depth must be >= 1");
  if (!(t0 > 0.0)) throw InvalidDepth("build_hva: layer time t0 must be positive");
  AnsatzCircuit c;
  c.n = spec.n;
  c.depth = depth;
  c.t0 = t0;
  c.num_params = spec.num_params();
  for (const auto& term : spec.terms) {
    const auto& letters = term.pauli.letters;
    GateOp g;
    g.param_index = term.param_index;
    g.angle_scale = 2.0 * t0;
    std::vector<int> support;
    for (int q = 0; q < spec.n; ++q) {
      if (letters[q] != Pauli::I) support.push_back(q);
    }
    if (support.size() == 1) {
      g.kind = GateKind::SingleRotation;
      g.qubits = {support[0], support[0]};
    } else if (support.size() == 2 && support[1] == support[0] + 1 &&
               letters[support[0]] == letters[support[1]]) {
      g.kind = GateKind::TwoRotation;
      g.qubits = {support[0], support[1]};
    } else {
      throw InvalidQubitCount("build_hva: term " + term.pauli.label() +
                              " is not a local field or nearest-neighbour coupling");
    }
    g.axis = letters[support[0]];
    c.layer.push_back(g);
  }
  return c;
}

ComplexMatrix gate_unitary(const AnsatzCircuit& c, const GateOp& g, const RealVector& theta) {
  check_theta(c, theta);
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  detail::apply_rotation(u, detail::gate_pauli_op(g, c.n, 0), 0.5 * g.angle(theta));
  return u;
}

ComplexMatrix layer_unitary(const AnsatzCircuit& c, const RealVector& theta) {
  check_theta(c, theta);
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  apply_layer(c, theta, u, 0);
  return u;
}

ComplexMatrix circuit_unitary(const AnsatzCircuit& c, const RealVector& theta) {
  check_theta(c, theta);
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int l = 0; l < c.depth; ++l) apply_layer(c, theta, u, 0);
  return u;
}

StateVector apply_circuit(const AnsatzCircuit& c, const RealVector& theta,
                          const StateVector& psi, int offset) {
  check_theta(c, theta);
  const int total = qubit_count(psi.size());
  if (offset < 0 || offset + c.n > total) {
    throw DimMismatch("apply_circuit: circuit does not fit in the register");
  }
  StateVector out = psi;
  const int shift = total - offset - c.n;
  for (int l = 0; l < c.depth; ++l) apply_layer(c, theta, out, shift);
  return out;
}

}  // namespace vqc

#pragma once

// Anisotropic Heisenberg Hamiltonian as an ordered list of Pauli terms.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vqc/tensor.hpp"

namespace vqc {

enum class Pauli : std::uint8_t { I, X, Y, Z };

char pauli_char(Pauli p);

/// Tensor product of single-qubit Paulis; letters[0] acts on qubit 1.
struct PauliString {
  std::vector<Pauli> letters;

  int size() const { return static_cast<int>(letters.size()); }
  int weight() const;

  /// Basis-index bits flipped by the string (X or Y letters).
  std::uint64_t x_mask() const;
  /// Basis-index bits that pick up a sign (Y or Z letters).
  std::uint64_t z_mask() const;
  int y_count() const;

  /// Compact label such as "Z2" or "X1X2" (identity letters omitted).
  std::string label() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Single-qubit Pauli `p` on qubit `q` (0-based) of an n-qubit string.
PauliString local_pauli(int n, int q, Pauli p);
/// `p` on qubits q and q + 1.
PauliString bond_pauli(int n, int q, Pauli p);

struct HamiltonianTerm {
  PauliString pauli;
  int param_index = 0;
};

/// Ordered (PauliString, parameter index) list; H(theta) = sum_j theta_j H_j.
struct HamiltonianSpec {
  int n = 0;
  std::vector<HamiltonianTerm> terms;

  int num_params() const { return static_cast<int>(terms.size()); }
  /// Index of the term labelled `label`, or -1.
  int find(std::string_view label) const;
  std::vector<std::string> labels() const;
};

/// Canonical term order: X,Y,Z fields on each qubit, then XX,YY,ZZ on each
/// nearest-neighbour bond. n = 3 yields 15 parameters.
HamiltonianSpec heisenberg_spec(int n);

ComplexMatrix pauli_matrix(const PauliString& p);

/// Dense H(theta) for the given spec.
ComplexMatrix assemble(const HamiltonianSpec& spec, const RealVector& theta);

/// Wraps into [-pi, pi].
double wrap_angle(double x);
RealVector wrap(const RealVector& theta);

// Text form: one "LABEL index value" line per term, in spec order.
std::string format_parameters(const HamiltonianSpec& spec, const RealVector& theta);
RealVector parse_parameters(const HamiltonianSpec& spec, std::string_view text);

}  // namespace vqc

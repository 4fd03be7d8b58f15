#include "vqc/pauli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace vqc {

namespace {

ComplexMatrix single_pauli(Pauli p) {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -1i, 1i, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

std::uint64_t qubit_bit(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

}  // namespace

char pauli_char(Pauli p) {
  constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : letters) w += p != Pauli::I;
  return w;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (int q = 0; q < size(); ++q) {
    if (letters[q] == Pauli::X || letters[q] == Pauli::Y) m |= qubit_bit(size(), q);
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (int q = 0; q < size(); ++q) {
    if (letters[q] == Pauli::Z || letters[q] == Pauli::Y) m |= qubit_bit(size(), q);
  }
  return m;
}

int PauliString::y_count() const {
  int c = 0;
  for (Pauli p : letters) c += p == Pauli::Y;
  return c;
}

std::string PauliString::label() const {
  std::string out;
  for (int q = 0; q < size(); ++q) {
    if (letters[q] == Pauli::I) continue;
    out += pauli_char(letters[q]);
    out += std::to_string(q + 1);
  }
  return out.empty() ? std::string("I") : out;
}

PauliString local_pauli(int n, int q, Pauli p) {
  PauliString s{std::vector<Pauli>(n, Pauli::I)};
  s.letters.at(q) = p;
  return s;
}

PauliString bond_pauli(int n, int q, Pauli p) {
  PauliString s{std::vector<Pauli>(n, Pauli::I)};
  s.letters.at(q) = p;
  s.letters.at(q + 1) = p;
  return s;
}

int HamiltonianSpec::find(std::string_view label) const {
  for (const auto& t : terms) {
    if (t.pauli.label() == label) return t.param_index;
  }
  return -1;
}

std::vector<std::string> HamiltonianSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.pauli.label());
  return out;
}

HamiltonianSpec heisenberg_spec(int n) {
  if (n < 2) throw InvalidQubitCount("heisenberg_spec: need at least 2 qubits");
  if (n > 8) throw InvalidQubitCount("heisenberg_spec: at most 8 qubits supported");
  constexpr Pauli kAxes[] = {Pauli::X, Pauli::Y, Pauli::Z};
  HamiltonianSpec spec;
  spec.n = n;
  int index = 0;
  for (int q = 0; q < n; ++q) {
    for (Pauli a : kAxes) spec.terms.push_back({local_pauli(n, q, a), index++});
  }
  for (int q = 0; q + 1 < n; ++q) {
    for (Pauli a : kAxes) spec.terms.push_back({bond_pauli(n, q, a), index++});
  }
  return spec;
}

ComplexMatrix pauli_matrix(const PauliString& p) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (Pauli letter : p.letters) out = kron(out, single_pauli(letter));
  return out;
}

ComplexMatrix assemble(const HamiltonianSpec& spec, const RealVector& theta) {
  if (theta.size() != spec.num_params()) {
    throw LengthMismatch("assemble: theta length does not match the spec");
  }
  const Eigen::Index dim = Eigen::Index{1} << spec.n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : spec.terms) {
    h += theta(term.param_index) * pauli_matrix(term.pauli);
  }
  return h;
}

double wrap_angle(double x) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (x >= -std::numbers::pi && x <= std::numbers::pi) return x;
  return std::remainder(x, kTwoPi);
}

RealVector wrap(const RealVector& theta) { return theta.unaryExpr(&wrap_angle); }

std::string format_parameters(const HamiltonianSpec& spec, const RealVector& theta) {
  if (theta.size() != spec.num_params()) {
    throw LengthMismatch("format_parameters: theta length does not match the spec");
  }
  std::string out;
  char buf[64];
  for (const auto& term : spec.terms) {
    std::snprintf(buf, sizeof buf, " %d %.17g\n", term.param_index, theta(term.param_index));
    out += term.pauli.label();
    out += buf;
  }
  return out;
}

RealVector parse_parameters(const HamiltonianSpec& spec, std::string_view text) {
  RealVector theta = RealVector::Constant(spec.num_params(), std::nan(""));
  std::istringstream in{std::string(text)};
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string label;
    int index = -1;
    double value = 0.0;
    if (!(ls >> label)) continue;
    if (!(ls >> index >> value)) {
      throw ConfigError("parse_parameters: malformed line '" + line + "'");
    }
    const int expected = spec.find(label);
    if (expected < 0 || expected != index) {
      throw ConfigError("parse_parameters: label/index mismatch on '" + line + "'");
    }
    if (!std::isnan(theta(index))) {
      throw ConfigError("parse_parameters: duplicate term " + label);
    }
    theta(index) = value;
    ++seen;
  }
  if (seen != spec.num_params()) {
    throw LengthMismatch("parse_parameters: expected " + std::to_string(spec.num_params()) +
                         " terms, read " + std::to_string(seen));
  }
  return theta;
}

}  // namespace vqc

#pragma once

// Dense complex linear algebra over small Hilbert spaces.
//
// Qubit ordering: qubit 1 is the most significant bit of a computational
// basis index. Every module in the library relies on this convention.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "vqc/errors.hpp"

namespace vqc {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

// Row-major so that an operator acting on the leading qubits of a register is
// a single contiguous product (see simulator.cpp).
template <typename Real>
using Density =
    Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ComplexMatrix = Matrix<double>;
using StateVector = Vector<double>;
using DensityMatrix = Density<double>;
using RealVector = Eigen::VectorXd;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kHamiltonianTol = 1e-12;

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename DA, typename DB>
typename DA::RealScalar max_abs_diff(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimMismatch("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

/// Kronecker product; the (i, j) block of the result is a(i, j) * b.
template <typename DA, typename DB>
Matrix<typename DA::RealScalar> kron(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  Matrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Complex<Real>(a(i, j)) * b.template cast<Complex<Real>>();
    }
  }
  return out;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u,
                typename Derived::RealScalar tol = kStructuralTol) {
  if (u.rows() != u.cols()) return false;
  const auto eye = Derived::PlainObject::Identity(u.rows(), u.cols());
  return max_abs((u.adjoint() * u).eval() - eye) <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h,
                  typename Derived::RealScalar tol = kHamiltonianTol) {
  if (h.rows() != h.cols()) return false;
  return max_abs((h - h.adjoint()).eval()) <= tol;
}

/// exp(-i * scale * h) for Hermitian h, through its eigendecomposition.
template <typename Derived>
Matrix<typename Derived::RealScalar> hermitian_expm(
    const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar scale) {
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols()) throw DimMismatch("hermitian_expm: matrix not square");
  if (!is_hermitian(h, Real(kStructuralTol))) {
    throw NotHermitian("hermitian_expm: input is not Hermitian");
  }
  const Matrix<Real> sym = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> eig(sym);
  const auto& vecs = eig.eigenvectors();
  Vector<Real> phases(sym.rows());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(Real(1), -scale * eig.eigenvalues()(k));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

/// |Tr(v^dagger u)|^2 / d^2.
template <typename DA, typename DB>
typename DA::RealScalar hs_overlap(const Eigen::MatrixBase<DA>& u,
                                   const Eigen::MatrixBase<DB>& v) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows()) {
    throw DimMismatch("hs_overlap: operands must be square of equal dimension");
  }
  const auto tr = (v.conjugate().cwiseProduct(u)).sum();
  const auto d = static_cast<typename DA::RealScalar>(u.rows());
  return std::norm(tr) / (d * d);
}

inline StateVector basis_state(Eigen::Index dim, Eigen::Index index) {
  StateVector psi = StateVector::Zero(dim);
  psi(index) = 1.0;
  return psi;
}

inline DensityMatrix pure_density(const StateVector& psi) {
  return psi * psi.adjoint();
}

/// Number of qubits for a power-of-two dimension; throws otherwise.
inline int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || dim < 1) {
    throw DimMismatch("dimension is not a power of two");
  }
  return n;
}

}  // namespace vqc

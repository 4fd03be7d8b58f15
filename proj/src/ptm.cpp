#include "vqc/detail/ptm.hpp"

#include <bit>
#include <cmath>

#include "vqc/ansatz.hpp"

namespace vqc::detail {

namespace {

int weight_xz(std::uint64_t x, std::uint64_t z) { return std::popcount(x & z); }

ComplexMatrix pauli_dense(std::uint64_t x, std::uint64_t z, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const PauliOp op{x, z, weight_xz(x, z)};
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t v = 0; v < static_cast<std::uint64_t>(dim); ++v) m(v ^ x, v) = op.phase(v);
  return m;
}

void apply_targets(Ptm& m, const NoisyCircuitPlan& plan, const Eigen::Matrix4d& ch, int n) {
  for (int q : plan.target_qubits) channel_rows(m, ch, n, q);
}

}  // namespace

RotationPairs rotation_pairs(const PauliOp& p, int n) {
  RotationPairs out;
  const std::uint64_t zmask_all = (std::uint64_t{1} << n) - 1;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t q = 0; q < count; ++q) {
    const std::uint64_t xq = q >> n, zq = q & zmask_all;
    if (((std::popcount(p.x_mask & zq) + std::popcount(p.z_mask & xq)) & 1) == 0) continue;
    const std::uint64_t xr = p.x_mask ^ xq, zr = p.z_mask ^ zq;
    const std::uint64_t r = (xr << n) | zr;
    if (r < q) continue;
    // P P_q = i^e P_r with e from X^a Z^b X^c Z^d = (-1)^{b.c} X^{a^c} Z^{b^d}.
    const int e = weight_xz(p.x_mask, p.z_mask) + weight_xz(xq, zq) - weight_xz(xr, zr) +
                  2 * std::popcount(p.z_mask & xq);
    const int k = ((e - 1) % 4 + 4) % 4;  // -i P P_q = i^k P_r, k in {0, 2}
    out.q.push_back(static_cast<std::uint32_t>(q));
    out.r.push_back(static_cast<std::uint32_t>(r));
    out.sign.push_back(k == 0 ? 1.0 : -1.0);
  }
  return out;
}

void rotate_rows(Ptm& m, const RotationPairs& pairs, double a) {
  const double c = std::cos(2.0 * a);
  const double s = std::sin(2.0 * a);
  const Eigen::Index cols = m.cols();
  for (std::size_t k = 0; k < pairs.q.size(); ++k) {
    double* rq = m.data() + pairs.q[k] * cols;
    double* rr = m.data() + pairs.r[k] * cols;
    const double ss = pairs.sign[k] * s;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double vq = rq[j], vr = rr[j];
      rq[j] = c * vq - ss * vr;
      rr[j] = c * vr + ss * vq;
    }
  }
}

Eigen::Matrix4d single_qubit_ptm(const KrausChannel& ch) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix pj = pauli_dense(j >> 1, j & 1, 1);
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (const auto& e : ch.operators) out += e * pj * e.adjoint();
    for (int i = 0; i < 4; ++i) {
      r(i, j) = (pauli_dense(i >> 1, i & 1, 1) * out).trace().real() / 2.0;
    }
  }
  return r;
}

void channel_rows(Ptm& m, const Eigen::Matrix4d& r, int n, int qubit) {
  const std::uint64_t zbit = std::uint64_t{1} << (n - 1 - qubit);
  const std::uint64_t xbit = zbit << n;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const Eigen::Index cols = m.cols();
  double* rows[4];
  double in[4];
  for (std::uint64_t base = 0; base < count; ++base) {
    if (base & (zbit | xbit)) continue;
    for (int l = 0; l < 4; ++l) {
      rows[l] = m.data() + (base | ((l & 2) ? xbit : 0) | ((l & 1) ? zbit : 0)) * cols;
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (int l = 0; l < 4; ++l) in[l] = rows[l][j];
      for (int l = 0; l < 4; ++l) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += r(l, k) * in[k];
        rows[l][j] = acc;
      }
    }
  }
}

Ptm unitary_ptm(const ComplexMatrix& u) {
  const int n = qubit_count(u.rows());
  const Eigen::Index count = Eigen::Index{1} << (2 * n);
  const std::uint64_t zmask_all = (std::uint64_t{1} << n) - 1;
  Ptm out(count, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const ComplexMatrix mj = u * pauli_dense(j >> n, j & zmask_all, n) * u.adjoint();
    for (Eigen::Index i = 0; i < count; ++i) {
      const PauliOp op{static_cast<std::uint64_t>(i) >> n, i & zmask_all,
                       weight_xz(i >> n, i & zmask_all)};
      out(i, j) = trace_with(mj, op).real() / static_cast<double>(u.rows());
    }
  }
  return out;
}

NoisyProcessFidelity::NoisyProcessFidelity(const NoisyCircuitPlan& plan,
                                           const ComplexMatrix& target)
    : plan_(plan), n_(plan.circuit.n), target_ptm_(unitary_ptm(target)) {
  if (plan.channel.operators.empty() || plan.channel.operators.front().rows() != 2) {
    throw DimMismatch("noisy cost: channel must act on a single qubit");
  }
  for (int q : plan.target_qubits) {
    if (q < 0 || q >= n_) throw DimMismatch("plan target qubit out of range");
  }
  channel_ = single_qubit_ptm(plan.channel);
  for (const auto& g : plan.circuit.layer) gates_.push_back(rotation_pairs(gate_pauli_op(g, n_), n_));
}

double NoisyProcessFidelity::operator()(const RealVector& theta) const {
  const auto& c = plan_.circuit;
  Ptm m = Ptm::Identity(target_ptm_.rows(), target_ptm_.cols());
  auto gate = [&](std::size_t k) { rotate_rows(m, gates_[k], 0.5 * c.layer[k].angle(theta)); };
  switch (plan_.placement) {
    case Placement::FinalOnly:
      for (int l = 0; l < c.depth; ++l)
        for (std::size_t k = 0; k < gates_.size(); ++k) gate(k);
      apply_targets(m, plan_, channel_, n_);
      break;
    case Placement::AfterEachLayer:
      for (int l = 0; l < c.depth; ++l) {
        for (std::size_t k = 0; k < gates_.size(); ++k) gate(k);
        apply_targets(m, plan_, channel_, n_);
      }
      break;
    case Placement::AfterEachGate:
      for (int l = 0; l < c.depth; ++l) {
        for (std::size_t k = 0; k < gates_.size(); ++k) {
          gate(k);
          apply_targets(m, plan_, channel_, n_);
        }
      }
      break;
  }
  const double d = static_cast<double>(Eigen::Index{1} << n_);
  return std::max(0.0, m.cwiseProduct(target_ptm_).sum() / (d * d));
}

}  // namespace vqc::detail

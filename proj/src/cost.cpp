#include "vqc/cost.hpp"

#include <algorithm>

#include "vqc/detail/pauli_kernel.hpp"
#include "vqc/detail/ptm.hpp"

namespace vqc {

const char* cost_mode_name(CostMode m) {
  switch (m) {
    case CostMode::ExactTrace: return "exact-trace";
    case CostMode::HsTestStatevector: return "hs-test-statevector";
    case CostMode::HsTestDensity: return "hs-test-density";
  }
  return "?";
}

CostEvaluator::CostEvaluator(AnsatzCircuit circuit, TargetGate target, CostMode mode)
    : circuit_(std::move(circuit)), target_(std::move(target)), mode_(mode) {
  if (mode_ == CostMode::HsTestDensity) {
    throw NoisyModeUnsupported("CostEvaluator: density mode needs a noisy circuit plan");
  }
  if (target_.n != circuit_.n) throw DimMismatch("CostEvaluator: target and circuit sizes differ");
  target_adjoint_ = target_.matrix.adjoint();
}

CostEvaluator::CostEvaluator(TargetGate target, NoisyCircuitPlan plan)
    : circuit_(plan.circuit),
      target_(std::move(target)),
      mode_(CostMode::HsTestDensity),
      plan_(std::move(plan)) {
  if (target_.n != circuit_.n) throw DimMismatch("CostEvaluator: target and circuit sizes differ");
  target_adjoint_ = target_.matrix.adjoint();
  noisy_kernel_ = std::make_shared<const detail::NoisyProcessFidelity>(*plan_, target_.matrix);
}

CostEvaluator::CostEvaluator(const CostEvaluator& other)
    : circuit_(other.circuit_),
      target_(other.target_),
      mode_(other.mode_),
      plan_(other.plan_),
      target_adjoint_(other.target_adjoint_),
      noisy_kernel_(other.noisy_kernel_),
      evals_(other.evals_.load()) {}

double CostEvaluator::cost(const RealVector& theta) const {
  if (theta.size() != circuit_.num_params) {
    throw LengthMismatch("cost: expected " + std::to_string(circuit_.num_params) +
                         " parameters, got " + std::to_string(theta.size()));
  }
  evals_.fetch_add(1, std::memory_order_relaxed);
  double overlap = 0.0;
  switch (mode_) {
    case CostMode::ExactTrace:
      overlap = hs_overlap(circuit_unitary(circuit_, theta), target_.matrix);
      break;
    case CostMode::HsTestStatevector:
      overlap = hs_test_probability(circuit_, theta, target_);
      break;
    case CostMode::HsTestDensity:
      overlap = (*noisy_kernel_)(theta);
      break;
  }
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

RealVector CostEvaluator::gradient(const RealVector& theta, GradientMethod method) const {
  if (noisy()) throw NoisyModeUnsupported("gradient: noisy cost modes are gradient-free");
  if (theta.size() != circuit_.num_params) throw LengthMismatch("gradient: parameter length");
  if (method == GradientMethod::Adjoint) return adjoint_gradient(theta);
  RealVector grad(theta.size());
  RealVector probe = theta;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    probe(j) = theta(j) + kCentralDiffStep;
    const double up = cost(probe);
    probe(j) = theta(j) - kCentralDiffStep;
    const double down = cost(probe);
    probe(j) = theta(j);
    grad(j) = (up - down) / (2.0 * kCentralDiffStep);
  }
  return grad;
}

// With U = G_K ... G_1 and f = Tr(V^dagger U), the derivative through gate k is
// -i t Tr(M_k P_k) where M_K = U V^dagger and M_{k-1} = G_k^dagger M_k G_k.
RealVector CostEvaluator::adjoint_gradient(const RealVector& theta) const {
  evals_.fetch_add(1, std::memory_order_relaxed);
  const ComplexMatrix u = circuit_unitary(circuit_, theta);
  const Complex<double> f = (target_.matrix.conjugate().cwiseProduct(u)).sum();
  ComplexMatrix m = u * target_adjoint_;

  std::vector<Complex<double>> df(circuit_.num_params, 0.0);
  for (int l = circuit_.depth - 1; l >= 0; --l) {
    for (auto g = circuit_.layer.rbegin(); g != circuit_.layer.rend(); ++g) {
      const auto op = detail::gate_pauli_op(*g, circuit_.n);
      const double half = 0.5 * g->angle(theta);
      df[g->param_index] +=
          Complex<double>(0.0, -0.5 * g->angle_scale) * detail::trace_with(m, op);
      detail::apply_rotation(m, op, -half);
      m = m.adjoint().eval();
      detail::apply_rotation(m, op, -half);
      m = m.adjoint().eval();
    }
  }
  const double d2 = static_cast<double>(u.rows() * u.rows());
  RealVector grad(circuit_.num_params);
  for (int j = 0; j < circuit_.num_params; ++j) {
    grad(j) = -2.0 * (std::conj(f) * df[j]).real() / d2;
  }
  return grad;
}

GradientStats gradient_stats(const CostEvaluator& e, int samples, InitScheme init,
                             std::uint64_t seed) {
  if (samples < 2) throw OutOfRange("gradient_stats: need at least 2 samples");
  init.seed = seed;
  const int q = e.num_params();
  Eigen::MatrixXd grads(q, samples);
  for (int s = 0; s < samples; ++s) grads.col(s) = e.gradient(init.draw(q, s));

  GradientStats out;
  out.samples = samples;
  // Shifted-data variance: identical samples give exactly zero.
  const Eigen::VectorXd shift = grads.col(0);
  const Eigen::MatrixXd d = grads.colwise() - shift;
  const Eigen::VectorXd dsum = d.rowwise().sum();
  out.mean = shift + dsum / samples;
  out.variance = ((d.rowwise().squaredNorm() - dsum.cwiseAbs2() / samples) /
                  static_cast<double>(samples - 1))
                     .cwiseMax(0.0);
  const double n_all = static_cast<double>(grads.size());
  const double s0 = grads(0, 0);
  const double sum = (grads.array() - s0).sum();
  out.overall_variance =
      std::max(0.0, ((grads.array() - s0).square().sum() - sum * sum / n_all) / (n_all - 1));
  return out;
}

}  // namespace vqc

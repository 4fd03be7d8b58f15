#pragma once

// Hilbert-Schmidt cost C(theta) = 1 - |Tr(V^dagger U(theta))|^2 / d^2 and its
// gradient.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "vqc/ansatz.hpp"
#include "vqc/gates.hpp"
#include "vqc/random.hpp"
#include "vqc/simulator.hpp"

namespace vqc {

namespace detail {
class NoisyProcessFidelity;
}

enum class CostMode { ExactTrace, HsTestStatevector, HsTestDensity };
enum class GradientMethod { CentralDiff, Adjoint };

const char* cost_mode_name(CostMode m);

inline constexpr double kCentralDiffStep = 1e-6;

class CostEvaluator {
 public:
  CostEvaluator(AnsatzCircuit circuit, TargetGate target, CostMode mode = CostMode::ExactTrace);
  /// Hilbert-Schmidt test on the density matrix with the plan's channel inside
  /// the circuit. Evaluated through Pauli transfer matrices of the register,
  /// which gives the same probability as the 2n-qubit density simulation.
  CostEvaluator(TargetGate target, NoisyCircuitPlan plan);

  CostEvaluator(const CostEvaluator& other);
  CostEvaluator& operator=(const CostEvaluator&) = delete;

  /// C(theta) in [0, 1]; counts one evaluation.
  double cost(const RealVector& theta) const;
  double fidelity(const RealVector& theta) const { return 1.0 - cost(theta); }

  /// dC/dtheta; only for noiseless modes.
  RealVector gradient(const RealVector& theta,
                      GradientMethod method = GradientMethod::Adjoint) const;

  bool noisy() const { return mode_ == CostMode::HsTestDensity; }
  CostMode mode() const { return mode_; }
  const AnsatzCircuit& circuit() const { return circuit_; }
  const TargetGate& target() const { return target_; }
  const std::optional<NoisyCircuitPlan>& plan() const { return plan_; }
  int num_params() const { return circuit_.num_params; }
  std::uint64_t eval_count() const { return evals_.load(std::memory_order_relaxed); }

 private:
  RealVector adjoint_gradient(const RealVector& theta) const;

  AnsatzCircuit circuit_;
  TargetGate target_;
  CostMode mode_;
  std::optional<NoisyCircuitPlan> plan_;
  ComplexMatrix target_adjoint_;
  std::shared_ptr<const detail::NoisyProcessFidelity> noisy_kernel_;
  mutable std::atomic<std::uint64_t> evals_{0};
};

struct GradientStats {
  RealVector mean;
  RealVector variance;      // per coordinate, unbiased
  double overall_variance;  // pooled over every coordinate and sample
  int samples;
};

/// Gradient statistics over `samples` draws of `init`; draw k uses
/// derive_seed(seed, ., k), so results depend only on (init, samples, seed).
GradientStats gradient_stats(const CostEvaluator& e, int samples, InitScheme init,
                             std::uint64_t seed);

}  // namespace vqc

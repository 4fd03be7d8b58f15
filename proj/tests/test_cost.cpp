#include <gtest/gtest.h>

#include "compiled.hpp"
#include "test_util.hpp"
#include "vqc/cost.hpp"

using namespace vqc;
using namespace vqc::test;

namespace {

CostEvaluator toffoli_cost(int m, CostMode mode = CostMode::ExactTrace) {
  return CostEvaluator(build_hva(heisenberg_spec(3), m), toffoli(), mode);
}

}  // namespace

TEST(Cost, ZeroAnglesAgainstToffoli) {
  const double oracle = 1.0 - 36.0 / 64.0;
  EXPECT_NEAR(toffoli_cost(6).cost(RealVector::Zero(15)), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.4375, 1e-15);
}

TEST(Cost, ZeroWhenCircuitEqualsTarget) {
  std::mt19937_64 rng(51);
  const auto c = build_hva(heisenberg_spec(3), 3);
  const RealVector theta = random_theta(15, rng);
  CostEvaluator e(c, TargetGate{"self", circuit_unitary(c, theta), 3});
  EXPECT_NEAR(e.cost(theta), 0.0, 1e-14);
}

TEST(Cost, CompiledToffoliBelowThreshold) {
  const RealVector theta = compiled_toffoli_m6();
  const auto e = toffoli_cost(6);
  EXPECT_LT(e.cost(theta), 1e-4);
  EXPECT_LT(e.gradient(theta).lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(Cost, ModesAgreeOnRandomAngles) {
  std::mt19937_64 rng(52);
  const auto exact = toffoli_cost(6);
  const auto hs = toffoli_cost(6, CostMode::HsTestStatevector);
  for (int trial = 0; trial < 100; ++trial) {
    const RealVector theta = random_theta(15, rng);
    EXPECT_NEAR(exact.cost(theta), hs.cost(theta), 1e-10);
  }
}

TEST(Cost, DensityModeAtZeroDampingAgrees) {
  std::mt19937_64 rng(53);
  const auto exact = toffoli_cost(6);
  CostEvaluator noisy(toffoli(), damping_plan(exact.circuit(), 0.0));
  EXPECT_TRUE(noisy.noisy());
  for (int trial = 0; trial < 20; ++trial) {
    const RealVector theta = random_theta(15, rng);
    EXPECT_NEAR(exact.cost(theta), noisy.cost(theta), 1e-10);
  }
}

TEST(Cost, BoundedAndPeriodic) {
  std::mt19937_64 rng(54);
  const auto e = toffoli_cost(6);
  for (int trial = 0; trial < 30; ++trial) {
    const RealVector theta = random_theta(15, rng, -10.0, 10.0);
    const double c = e.cost(theta);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_NEAR(e.cost(wrap(theta)), c, 1e-12);
    for (int j = 0; j < 15; ++j) {
      RealVector shifted = theta;
      shifted(j) += 2 * kPi;
      EXPECT_NEAR(e.cost(shifted), c, 1e-12);
    }
  }
}

TEST(Cost, NoisyCostBounded) {
  std::mt19937_64 rng(55);
  const auto c = build_hva(heisenberg_spec(3), 2);
  CostEvaluator noisy(fredkin(), damping_plan(c, 0.05));
  for (int trial = 0; trial < 5; ++trial) {
    const double v = noisy.cost(random_theta(15, rng));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Cost, CountsEvaluations) {
  const auto e = toffoli_cost(1);
  const auto before = e.eval_count();
  e.cost(RealVector::Zero(15));
  e.cost(RealVector::Zero(15));
  EXPECT_EQ(e.eval_count(), before + 2);
}

TEST(Cost, LengthAndModeErrors) {
  EXPECT_THROW(toffoli_cost(2).cost(RealVector::Zero(3)), LengthMismatch);
  EXPECT_THROW(toffoli_cost(2, CostMode::HsTestDensity), NoisyModeUnsupported);
  CostEvaluator noisy(toffoli(), damping_plan(build_hva(heisenberg_spec(3), 1), 0.01));
  EXPECT_THROW(noisy.gradient(RealVector::Zero(15)), NoisyModeUnsupported);
  EXPECT_THROW(CostEvaluator(build_hva(heisenberg_spec(2), 1), toffoli()), DimMismatch);
}

TEST(Gradient, AdjointMatchesCentralDifferences) {
  std::mt19937_64 rng(56);
  for (int m : {1, 6}) {
    for (auto target : {toffoli(), fredkin()}) {
      CostEvaluator e(build_hva(heisenberg_spec(3), m), target);
      for (int trial = 0; trial < 20; ++trial) {
        const RealVector theta = random_theta(15, rng);
        const RealVector adj = e.gradient(theta, GradientMethod::Adjoint);
        const RealVector cd = e.gradient(theta, GradientMethod::CentralDiff);
        EXPECT_LT((adj - cd).lpNorm<Eigen::Infinity>(), 1e-6);
      }
    }
  }
}

TEST(Gradient, IndependentFiniteDifferenceAtZero) {
  // Oracle: symmetric difference of the dense exact-trace cost, written
  // independently of the evaluator.
  const auto c = build_hva(heisenberg_spec(3), 6);
  const auto e = toffoli_cost(6);
  const RealVector g = e.gradient(RealVector::Zero(15));
  const double h = 1e-5;
  for (int j = 0; j < 15; ++j) {
    RealVector plus = RealVector::Zero(15), minus = RealVector::Zero(15);
    plus(j) = h;
    minus(j) = -h;
    const double fd = (hs_overlap(circuit_unitary(c, minus), toffoli().matrix) -
                       hs_overlap(circuit_unitary(c, plus), toffoli().matrix)) /
                      (2 * h);
    EXPECT_NEAR(g(j), fd, 1e-7) << j;
    if (std::abs(fd) > 1e-6) EXPECT_EQ(std::signbit(g(j)), std::signbit(fd));
  }
}

TEST(GradientStats, VarianceAboveFloorAtDepthSix) {
  InitScheme init;
  const auto st = gradient_stats(toffoli_cost(6), 100, init, 2024);
  EXPECT_EQ(st.samples, 100);
  EXPECT_GT(st.variance(0), 1e-6);
  EXPECT_GT(st.overall_variance, 1e-6);
}

TEST(GradientStats, DeterministicForEqualSeeds) {
  InitScheme init;
  const auto a = gradient_stats(toffoli_cost(2), 2, init, 77);
  const auto b = gradient_stats(toffoli_cost(2), 2, init, 77);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.overall_variance, b.overall_variance);
}

TEST(GradientStats, FixedInitHasZeroVariance) {
  InitScheme init;
  init.mean = 0.3;
  init.sigma = 0.0;
  const auto st = gradient_stats(toffoli_cost(3), 10, init, 5);
  EXPECT_EQ(st.variance, RealVector::Zero(15));
}

TEST(GradientStats, RejectsTooFewSamples) {
  EXPECT_ANY_THROW(gradient_stats(toffoli_cost(1), 1, InitScheme{}, 1));
}

TEST(Cost, NoisyCostMatchesDensitySimulation) {
  std::mt19937_64 rng(57);
  for (auto placement : {Placement::AfterEachLayer, Placement::AfterEachGate, Placement::FinalOnly}) {
    for (double p : {0.0, 0.01, 0.3}) {
      for (const auto& target : {toffoli(), fredkin()}) {
        const auto c = build_hva(heisenberg_spec(3), 3);
        const auto plan = damping_plan(c, p, placement);
        CostEvaluator e(target, plan);
        for (int trial = 0; trial < 3; ++trial) {
          const RealVector theta = random_theta(15, rng);
          EXPECT_NEAR(e.fidelity(theta), hs_test_probability(c, theta, target, &plan), 1e-12);
        }
      }
    }
  }
}

TEST(Cost, NoisyCostOnPartialTargets) {
  std::mt19937_64 rng(58);
  const auto c = build_hva(heisenberg_spec(3), 2);
  NoisyCircuitPlan plan = damping_plan(c, 0.2);
  plan.target_qubits = {1};
  CostEvaluator e(toffoli(), plan);
  const RealVector theta = random_theta(15, rng);
  EXPECT_NEAR(e.fidelity(theta), hs_test_probability(c, theta, toffoli(), &plan), 1e-12);
}

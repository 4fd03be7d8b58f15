#include <gtest/gtest.h>

#include "compiled.hpp"
#include "test_util.hpp"
#include "vqc/noise.hpp"

using namespace vqc;
using namespace vqc::test;

namespace {

const HamiltonianSpec& spec3() {
  static const HamiltonianSpec s = heisenberg_spec(3);
  return s;
}

CoherentNoise shift(NoiseKind kind, double delta) {
  CoherentNoise n;
  n.kind = kind;
  n.amplitude = delta;
  return n;
}

}  // namespace

TEST(AffectedIndices, ChargeAndNuclear) {
  EXPECT_EQ(affected_indices(spec3(), NoiseKind::Charge), (std::vector<int>{9, 10, 11, 12, 13, 14}));
  EXPECT_EQ(affected_indices(spec3(), NoiseKind::Nuclear),
            (std::vector<int>{spec3().find("Z1"), spec3().find("Z2"), spec3().find("Z3")}));
}

TEST(Perturb, ZeroAmplitudeIsIdentity) {
  std::mt19937_64 rng(71);
  const RealVector theta = random_theta(15, rng);
  for (auto kind : {NoiseKind::Charge, NoiseKind::Nuclear}) {
    for (auto mode : {NoiseMode::DeterministicShift, NoiseMode::UniformSample}) {
      CoherentNoise n = shift(kind, 0.0);
      n.mode = mode;
      EXPECT_EQ(perturb(spec3(), theta, n, 5), theta);
    }
  }
}

TEST(Perturb, ChargeShiftsCouplingsOnly) {
  std::mt19937_64 rng(72);
  const RealVector theta = random_theta(15, rng);
  const RealVector out = perturb(spec3(), theta, shift(NoiseKind::Charge, 0.1), 0);
  for (int j = 0; j < 9; ++j) EXPECT_EQ(out(j), theta(j));
  for (int j = 9; j < 15; ++j) EXPECT_EQ(out(j), theta(j) + 0.1);
}

TEST(Perturb, NuclearShiftsZFieldsOnly) {
  std::mt19937_64 rng(73);
  const RealVector theta = random_theta(15, rng);
  const RealVector out = perturb(spec3(), theta, shift(NoiseKind::Nuclear, 0.1), 0);
  const auto idx = affected_indices(spec3(), NoiseKind::Nuclear);
  for (int j = 0; j < 15; ++j) {
    const bool hit = std::find(idx.begin(), idx.end(), j) != idx.end();
    EXPECT_EQ(out(j), hit ? theta(j) + 0.1 : theta(j)) << j;
  }
}

TEST(Perturb, SampledModeTouchesDeclaredIndicesWithinAmplitude) {
  std::mt19937_64 rng(74);
  const RealVector theta = random_theta(15, rng);
  CoherentNoise n = shift(NoiseKind::Charge, 0.2);
  n.mode = NoiseMode::UniformSample;
  n.seed = 9;
  for (std::uint64_t d = 0; d < 20; ++d) {
    const RealVector out = perturb(spec3(), theta, n, d);
    for (int j = 0; j < 9; ++j) EXPECT_EQ(out(j), theta(j));
    for (int j = 9; j < 15; ++j) EXPECT_LE(std::abs(out(j) - theta(j)), 0.2 + 1e-15);
    EXPECT_EQ(out, perturb(spec3(), theta, n, d));
  }
}

TEST(Perturb, NegativeAmplitudeRejected) {
  EXPECT_THROW(perturb(spec3(), RealVector::Zero(15), shift(NoiseKind::Charge, -0.1), 0),
               NegativeAmplitude);
}

TEST(RobustnessSweep, ZeroDeltaEqualsCompiledFidelity) {
  const RealVector theta = compiled_toffoli_m6();
  const auto c = build_hva(spec3(), 6);
  const double compiled = hs_overlap(circuit_unitary(c, theta), toffoli().matrix);
  ASSERT_GT(compiled, 1 - 1e-4);
  for (auto kind : {NoiseKind::Charge, NoiseKind::Nuclear}) {
    const auto pts = robustness_sweep(spec3(), theta, c, toffoli(), shift(kind, 0.0), {0.0});
    EXPECT_NEAR(pts[0].mean_fidelity, compiled, 1e-12);
  }
}

TEST(RobustnessSweep, ZeroDeltaIndependentOfModeAndSeed) {
  const RealVector theta = compiled_toffoli_m6();
  const auto c = build_hva(spec3(), 6);
  CoherentNoise a = shift(NoiseKind::Charge, 0.0);
  CoherentNoise b = a;
  b.mode = NoiseMode::UniformSample;
  b.samples = 10;
  b.seed = 123;
  const auto pa = robustness_sweep(spec3(), theta, c, toffoli(), a, {0.0});
  const auto pb = robustness_sweep(spec3(), theta, c, toffoli(), b, {0.0});
  EXPECT_EQ(pa[0].mean_fidelity, pb[0].mean_fidelity);
  EXPECT_EQ(pb[0].std_fidelity, 0.0);
}

TEST(RobustnessSweep, CurveIsContinuous) {
  const RealVector theta = compiled_toffoli_m6();
  const auto c = build_hva(spec3(), 6);
  for (auto kind : {NoiseKind::Charge, NoiseKind::Nuclear}) {
    std::vector<double> coarse, fine;
    for (int k = 0; k <= 20; ++k) coarse.push_back(0.025 * k);
    for (int k = 0; k <= 200; ++k) fine.push_back(0.0025 * k);
    const auto pc = robustness_sweep(spec3(), theta, c, toffoli(), shift(kind, 0), coarse);
    const auto pf = robustness_sweep(spec3(), theta, c, toffoli(), shift(kind, 0), fine);
    double coarse_jump = 0.0, fine_jump = 0.0;
    for (std::size_t i = 1; i < pc.size(); ++i)
      coarse_jump = std::max(coarse_jump, std::abs(pc[i].mean_fidelity - pc[i - 1].mean_fidelity));
    for (std::size_t i = 1; i < pf.size(); ++i)
      fine_jump = std::max(fine_jump, std::abs(pf[i].mean_fidelity - pf[i - 1].mean_fidelity));
    // Lipschitz-like behaviour: refining the grid by 10 shrinks the largest jump.
    EXPECT_LT(fine_jump, 0.2 * coarse_jump + 1e-12);
  }
}

TEST(RobustnessSweep, HighFidelityNearZero) {
  const RealVector theta = compiled_toffoli_m6();
  const auto c = build_hva(spec3(), 6);
  for (auto kind : {NoiseKind::Charge, NoiseKind::Nuclear}) {
    const auto pts = robustness_sweep(spec3(), theta, c, toffoli(), shift(kind, 0), {0.0, 0.005, 0.01});
    for (const auto& p : pts) EXPECT_GT(p.mean_fidelity, 0.99);
  }
}

TEST(RobustnessSweep, SampledModeStatisticallyStable) {
  const RealVector theta = compiled_toffoli_m6();
  const auto c = build_hva(spec3(), 6);
  CoherentNoise n = shift(NoiseKind::Nuclear, 0.0);
  n.mode = NoiseMode::UniformSample;
  n.samples = 200;
  n.seed = 1;
  const auto a = robustness_sweep(spec3(), theta, c, toffoli(), n, {0.2});
  n.seed = 2;
  const auto b = robustness_sweep(spec3(), theta, c, toffoli(), n, {0.2});
  const double tol = 3.0 * std::max(a[0].std_fidelity, b[0].std_fidelity) / std::sqrt(200.0);
  EXPECT_LT(std::abs(a[0].mean_fidelity - b[0].mean_fidelity), tol);
  EXPECT_NE(a[0].mean_fidelity, b[0].mean_fidelity);
}

TEST(RobustnessSweep, RejectsBadGrid) {
  const auto c = build_hva(spec3(), 1);
  EXPECT_THROW(robustness_sweep(spec3(), RealVector::Zero(15), c, toffoli(),
                                shift(NoiseKind::Charge, 0), {0.1, 0.0}),
               OutOfRange);
  EXPECT_THROW(robustness_sweep(spec3(), RealVector::Zero(15), c, toffoli(),
                                shift(NoiseKind::Charge, 0), {-0.1}),
               OutOfRange);
}

TEST(RobustnessSweep, DefaultGridAndCsv) {
  const auto grid = default_delta_grid();
  ASSERT_EQ(grid.size(), 21u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_NEAR(grid.back(), 0.5, 1e-15);
  const auto c = build_hva(spec3(), 1);
  const auto pts = robustness_sweep(spec3(), RealVector::Zero(15), c, toffoli(),
                                    shift(NoiseKind::Charge, 0), {0.0, 0.1});
  const std::string rows = sweep_csv_rows(shift(NoiseKind::Charge, 0), pts);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 2);
  EXPECT_EQ(sweep_csv_header(), "noise_kind,mode,delta,mean_fidelity,std_fidelity,samples\n");
}

TEST(NoiseNames, RoundTrip) {
  for (auto k : {NoiseKind::Charge, NoiseKind::Nuclear}) EXPECT_EQ(parse_noise_kind(noise_kind_name(k)), k);
  for (auto m : {NoiseMode::DeterministicShift, NoiseMode::UniformSample})
    EXPECT_EQ(parse_noise_mode(noise_mode_name(m)), m);
  EXPECT_ANY_THROW(parse_noise_kind("thermal"));
}

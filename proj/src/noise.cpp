#include "vqc/noise.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "vqc/optimizer.hpp"
#include "vqc/random.hpp"

namespace vqc {

const char* noise_kind_name(NoiseKind k) { return k == NoiseKind::Charge ? "charge" : "nuclear"; }

const char* noise_mode_name(NoiseMode m) {
  return m == NoiseMode::DeterministicShift ? "deterministic-shift" : "uniform-sample";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "charge") return NoiseKind::Charge;
  if (s == "nuclear") return NoiseKind::Nuclear;
  throw ConfigError("unknown noise kind '" + s + "'");
}

NoiseMode parse_noise_mode(const std::string& s) {
  if (s == "deterministic-shift") return NoiseMode::DeterministicShift;
  if (s == "uniform-sample") return NoiseMode::UniformSample;
  throw ConfigError("unknown noise mode '" + s + "'");
}

std::vector<int> affected_indices(const HamiltonianSpec& spec, NoiseKind kind) {
  std::vector<int> out;
  for (const auto& term : spec.terms) {
    const auto& p = term.pauli;
    if (kind == NoiseKind::Charge && p.weight() == 2) out.push_back(term.param_index);
    if (kind == NoiseKind::Nuclear && p.weight() == 1 && p.x_mask() == 0) {
      out.push_back(term.param_index);
    }
  }
  return out;
}

RealVector perturb(const HamiltonianSpec& spec, const RealVector& theta_star,
                   const CoherentNoise& noise, std::uint64_t draw_index) {
  if (noise.amplitude < 0.0 || std::isnan(noise.amplitude)) {
    throw NegativeAmplitude("perturb: noise amplitude must be non-negative");
  }
  if (theta_star.size() != spec.num_params()) throw LengthMismatch("perturb: parameter length");
  double shift = noise.amplitude;
  if (noise.mode == NoiseMode::UniformSample) {
    std::mt19937_64 rng(derive_seed(noise.seed, 0xc0e7, draw_index));
    shift = noise.amplitude * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  RealVector out = theta_star;
  for (int j : affected_indices(spec, noise.kind)) out(j) += shift;
  return out;
}

std::vector<SweepPoint> robustness_sweep(const HamiltonianSpec& spec, const RealVector& theta_star,
                                         const AnsatzCircuit& circuit, const TargetGate& target,
                                         const CoherentNoise& noise,
                                         const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1])) {
      throw OutOfRange("robustness_sweep: grid must be non-negative and ascending");
    }
  }
  const int samples = noise.mode == NoiseMode::UniformSample ? std::max(1, noise.samples) : 1;
  std::vector<SweepPoint> out;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CoherentNoise at = noise;
    at.amplitude = grid[g];
    std::vector<double> fids;
    for (int k = 0; k < samples; ++k) {
      const RealVector theta =
          perturb(spec, theta_star, at, static_cast<std::uint64_t>(g) * samples + k);
      fids.push_back(hs_overlap(circuit_unitary(circuit, theta), target.matrix));
    }
    const auto [mean, sd] = mean_std(fids);
    out.push_back({grid[g], mean, sd, samples});
  }
  return out;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.025 * i);
  return grid;
}

std::string sweep_csv_header() {
  return "noise_kind,mode,delta,mean_fidelity,std_fidelity,samples\n";
}

std::string sweep_csv_rows(const CoherentNoise& noise, const std::vector<SweepPoint>& points) {
  std::string out;
  char buf[200];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%d\n", noise_kind_name(noise.kind),
                  noise_mode_name(noise.mode), p.delta, p.mean_fidelity, p.std_fidelity, p.samples);
    out += buf;
  }
  return out;
}

}  // namespace vqc

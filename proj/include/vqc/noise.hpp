#pragma once

// Coherent noise applied to compiled parameters: charge noise shifts every
// exchange coupling, nuclear noise shifts every longitudinal (Z) field.

#include <cstdint>
#include <string>
#include <vector>

#include "vqc/ansatz.hpp"
#include "vqc/gates.hpp"
#include "vqc/pauli.hpp"

namespace vqc {

enum class NoiseKind { Charge, Nuclear };
enum class NoiseMode { DeterministicShift, UniformSample };

const char* noise_kind_name(NoiseKind k);
const char* noise_mode_name(NoiseMode m);
NoiseKind parse_noise_kind(const std::string& s);
NoiseMode parse_noise_mode(const std::string& s);

struct CoherentNoise {
  NoiseKind kind = NoiseKind::Charge;
  double amplitude = 0.0;  // delta, units of h_0
  NoiseMode mode = NoiseMode::DeterministicShift;
  int samples = 1;  // realizations per point in sampled mode
  std::uint64_t seed = 0;
};

/// Parameter indices touched by `kind`: all weight-2 terms (charge) or all
/// single-qubit Z terms (nuclear).
std::vector<int> affected_indices(const HamiltonianSpec& spec, NoiseKind kind);

/// Adds +delta (deterministic) or one shared u ~ U[0, delta] (sampled) to every
/// affected index. No re-wrapping.
RealVector perturb(const HamiltonianSpec& spec, const RealVector& theta_star,
                   const CoherentNoise& noise, std::uint64_t draw_index);

struct SweepPoint {
  double delta = 0.0;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  int samples = 1;
};

/// Fidelity of the perturbed circuit at every delta in `grid` (ascending, >= 0).
std::vector<SweepPoint> robustness_sweep(const HamiltonianSpec& spec, const RealVector& theta_star,
                                         const AnsatzCircuit& circuit, const TargetGate& target,
                                         const CoherentNoise& noise,
                                         const std::vector<double>& grid);

/// 0 to 0.5 in steps of 0.025.
std::vector<double> default_delta_grid();

/// Header: noise_kind,mode,delta,mean_fidelity,std_fidelity,samples
std::string sweep_csv_header();
std::string sweep_csv_rows(const CoherentNoise& noise, const std::vector<SweepPoint>& points);

}  // namespace vqc

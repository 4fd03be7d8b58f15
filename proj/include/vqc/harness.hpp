#pragma once

// Config-driven experiments with run-scoped CSV + JSON output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vqc/noise.hpp"
#include "vqc/optimizer.hpp"
#include "vqc/random.hpp"
#include "vqc/simulator.hpp"

namespace vqc {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kRecordSchemaVersion = 1;

enum class Experiment { Compile, TrotterSweep, CoherentNoiseSweep, DampingSweep, GradStats };

const char* experiment_name(Experiment e);
/// Accepts the config names and the CLI aliases ("noise-sweep").
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Compile;
  std::string target = "toffoli";
  std::vector<int> depths{6};
  double t0 = 1.0;
  std::uint64_t master_seed = 1;
  std::string output_dir = "runs";

  OptimizerConfig optimizer;
  InitScheme init;

  // coherent-noise-sweep
  std::vector<NoiseKind> noise_kinds{NoiseKind::Charge, NoiseKind::Nuclear};
  NoiseMode noise_mode = NoiseMode::DeterministicShift;
  int noise_samples = 1;
  std::vector<double> delta_grid = default_delta_grid();
  std::string theta_file;  // compiled parameters; compiled on the fly when empty

  // damping-sweep
  std::vector<double> damping_grid{0.0, 0.005, 0.01, 0.015, 0.02};
  Placement placement = Placement::AfterEachLayer;

  // grad-stats
  int grad_samples = 100;

  /// Config text the run was built from, embedded verbatim in the record.
  std::string source_text;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Defaults for one experiment kind (depth list, optimizer family, restarts).
ExperimentConfig default_config(Experiment e);

/// Parses INI-style text ("key = value" under [sections], ';' or '#' comments).
/// Unknown sections or keys are rejected with ConfigError. When `forced` is
/// set it selects the experiment and must agree with any `type` in the file.
ExperimentConfig parse_config(std::string_view text, std::optional<Experiment> forced = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Experiment> forced = {});

/// "6", "1,2,4" or "1-8".
std::vector<int> parse_int_list(std::string_view text);
/// "0,0.01,0.02" or "start:stop:step".
std::vector<double> parse_real_list(std::string_view text);

struct RunRecord {
  nlohmann::json json;
  std::filesystem::path dir;
};

RunRecord run_compile(const ExperimentConfig& cfg);
RunRecord run_trotter_sweep(const ExperimentConfig& cfg);
RunRecord run_coherent_noise_sweep(const ExperimentConfig& cfg);
RunRecord run_damping_sweep(const ExperimentConfig& cfg);
RunRecord run_grad_stats(const ExperimentConfig& cfg);
RunRecord run_experiment(const ExperimentConfig& cfg);

/// Restart-population seed for depth `m` (compile and trotter sweep share it).
std::uint64_t depth_seed(std::uint64_t master, int m);

}  // namespace vqc

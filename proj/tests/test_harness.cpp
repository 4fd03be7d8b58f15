#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "vqc/harness.hpp"

using namespace vqc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vqc_harness_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the wall-clock column so two runs can be compared byte for byte.
std::string without_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string out;
  for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_compile(const fs::path& out) {
  ExperimentConfig cfg = default_config(Experiment::Compile);
  cfg.depths = {2};
  cfg.optimizer.restarts = 3;
  cfg.optimizer.max_iters = 30;
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST(Config, DefaultsPerExperiment) {
  EXPECT_EQ(default_config(Experiment::Compile).depths, std::vector<int>{6});
  EXPECT_EQ(default_config(Experiment::TrotterSweep).depths, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
  const auto damping = default_config(Experiment::DampingSweep);
  EXPECT_EQ(damping.optimizer.algorithm, Algorithm::NelderMead);
  EXPECT_EQ(damping.optimizer.restarts, 100);
  EXPECT_EQ(damping.damping_grid, (std::vector<double>{0.0, 0.005, 0.01, 0.015, 0.02}));
  EXPECT_EQ(damping.placement, Placement::AfterEachLayer);
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.experiment, Experiment::Compile);
  EXPECT_EQ(cfg.optimizer.restarts, 10);
  EXPECT_EQ(cfg.init.sigma, 0.5);
}

TEST(Config, ParsesAllSections) {
  const auto cfg = parse_config(R"(
# sweep over noise
[experiment]
type = coherent-noise-sweep
target = fredkin
m = 5
t0 = 1.0
master_seed = 42
output_dir = out
threads = 3
[optimizer]
algorithm = lbfgs
max_iters = 150
restarts = 4
[init]
sigma = 0.25
clip = 0.8
; both kinds
[noise]
kinds = nuclear
mode = uniform-sample
samples = 20
grid = 0:0.1:0.05
)");
  EXPECT_EQ(cfg.experiment, Experiment::CoherentNoiseSweep);
  EXPECT_EQ(cfg.target, "fredkin");
  EXPECT_EQ(cfg.depths, std::vector<int>{5});
  EXPECT_EQ(cfg.master_seed, 42u);
  EXPECT_EQ(cfg.optimizer.threads, 3);
  EXPECT_EQ(cfg.optimizer.max_iters, 150);
  EXPECT_EQ(cfg.optimizer.restarts, 4);
  EXPECT_EQ(cfg.init.sigma, 0.25);
  EXPECT_EQ(cfg.init.clip_lo, -0.8);
  EXPECT_EQ(cfg.noise_kinds, std::vector<NoiseKind>{NoiseKind::Nuclear});
  EXPECT_EQ(cfg.noise_mode, NoiseMode::UniformSample);
  EXPECT_EQ(cfg.delta_grid.size(), 3u);
  EXPECT_NE(cfg.source_text.find("sweep over noise"), std::string::npos);
}

TEST(Config, RejectsUnknownOrDuplicateKeys) {
  EXPECT_THROW(parse_config("[experiment]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("[extras]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nm = 3\nm = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("loose = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[optimizer]\nmax_iters = lots\n"), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config("[experiment]\nm = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\ntarget = peres\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\ntype = teleport\n"), ConfigError);
  EXPECT_THROW(parse_config("[optimizer]\nrestarts = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[grad_stats]\nsamples = 1\n", Experiment::GradStats), ConfigError);
  EXPECT_THROW(parse_config("[damping]\ngrid = 0, 1.5\n", Experiment::DampingSweep), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\ntype = compile\n", Experiment::GradStats), ConfigError);
}

TEST(Config, ForcedExperimentSelectsDefaults) {
  const auto cfg = parse_config("[damping]\nplacement = final-only\n", Experiment::DampingSweep);
  EXPECT_EQ(cfg.optimizer.algorithm, Algorithm::NelderMead);
  EXPECT_EQ(cfg.placement, Placement::FinalOnly);
  EXPECT_EQ(parse_config("[experiment]\ntype = noise-sweep\n").experiment, Experiment::CoherentNoiseSweep);
}

TEST(Config, Lists) {
  EXPECT_EQ(parse_int_list("6"), std::vector<int>{6});
  EXPECT_EQ(parse_int_list("1,2,4"), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(parse_int_list("1-4, 7"), (std::vector<int>{1, 2, 3, 4, 7}));
  EXPECT_THROW(parse_int_list("4-1"), ConfigError);
  EXPECT_EQ(parse_real_list("0,0.5"), (std::vector<double>{0.0, 0.5}));
  const auto r = parse_real_list("0:0.02:0.005");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_NEAR(r.back(), 0.02, 1e-15);
  EXPECT_THROW(parse_real_list("0:1"), ConfigError);
}

TEST(Config, JsonSnapshotHasEveryField) {
  const auto j = default_config(Experiment::Compile).to_json();
  for (auto key : {"experiment", "target", "m", "t0", "master_seed", "output_dir", "optimizer", "init",
                   "noise", "damping", "grad_stats"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(RunCompile, WritesRecordAndCsvs) {
  const auto out = scratch("compile");
  const auto rec = run_compile(small_compile(out));
  for (auto f : {"record.json", "training.csv", "trajectory.csv", "parameters.csv", "parameters.txt"}) {
    EXPECT_TRUE(fs::exists(rec.dir / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(rec.dir / "record.json"));
  EXPECT_EQ(j["schema_version"], kRecordSchemaVersion);
  EXPECT_EQ(j["artifact_version"], kArtifactVersion);
  EXPECT_EQ(j["results"]["restarts"].size(), 3u);
  EXPECT_TRUE(j["summary"]["best_params"].contains("Z2Z3"));
  const std::string traj = slurp(rec.dir / "trajectory.csv");
  EXPECT_EQ(traj.substr(0, traj.find('\n')),
            "iteration,cost,X1,Y1,Z1,X2,Y2,Z2,X3,Y3,Z3,X1X2,Y1Y2,Z1Z2,X2X3,Y2Y3,Z2Z3");
  EXPECT_EQ(slurp(rec.dir / "parameters.csv").substr(0, 26), "label,index,value,magnitud");
}

TEST(RunCompile, NeverOverwritesPreviousRun) {
  const auto out = scratch("overwrite");
  const auto a = run_compile(small_compile(out));
  const auto b = run_compile(small_compile(out));
  EXPECT_NE(a.dir, b.dir);
  EXPECT_TRUE(fs::exists(a.dir / "record.json"));
}

TEST(RunCompile, ReproducibleAcrossRunsAndThreads) {
  const auto out = scratch("determinism");
  auto cfg = small_compile(out);
  const auto a = run_compile(cfg);
  cfg.optimizer.threads = 3;
  const auto b = run_compile(cfg);
  EXPECT_EQ(a.json["summary"], b.json["summary"]);
  EXPECT_EQ(a.json["results"], b.json["results"]);
  for (auto f : {"trajectory.csv", "parameters.csv", "parameters.txt"}) {
    EXPECT_EQ(slurp(a.dir / f), slurp(b.dir / f)) << f;
  }
  EXPECT_EQ(without_elapsed(slurp(a.dir / "training.csv")),
            without_elapsed(slurp(b.dir / "training.csv")));
}

TEST(RunTrotterSweep, OneRowPerDepth) {
  const auto out = scratch("trotter");
  auto cfg = default_config(Experiment::TrotterSweep);
  cfg.depths = {1, 2};
  cfg.optimizer.restarts = 2;
  cfg.optimizer.max_iters = 20;
  cfg.output_dir = out.string();
  const auto rec = run_trotter_sweep(cfg);
  const std::string csv = slurp(rec.dir / "trotter.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(rec.json["summary"]["per_m"].size(), 2u);
}

TEST(RunCoherentNoiseSweep, UsesParameterFile) {
  const auto out = scratch("noise");
  const auto spec = heisenberg_spec(3);
  const auto theta_file = out / "theta.txt";
  {
    std::ofstream f(theta_file);
    f << format_parameters(spec, RealVector::Constant(15, 0.1));
  }
  auto cfg = default_config(Experiment::CoherentNoiseSweep);
  cfg.depths = {2};
  cfg.theta_file = theta_file.string();
  cfg.delta_grid = {0.0, 0.1};
  cfg.output_dir = out.string();
  const auto rec = run_coherent_noise_sweep(cfg);
  const std::string csv = slurp(rec.dir / "noise.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(rec.json["summary"]["curves"].size(), 2u);
}

TEST(RunDampingSweep, SmallGrid) {
  const auto out = scratch("damping");
  auto cfg = default_config(Experiment::DampingSweep);
  cfg.depths = {1};
  cfg.damping_grid = {0.0, 0.05};
  cfg.optimizer.restarts = 2;
  cfg.optimizer.max_iters = 40;
  cfg.output_dir = out.string();
  const auto rec = run_damping_sweep(cfg);
  const auto& rows = rec.json["summary"]["per_p"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["final_fidelities"].size(), 2u);
  EXPECT_TRUE(fs::exists(rec.dir / "damping.csv"));
}

TEST(RunGradStats, VariancesPerDepth) {
  const auto out = scratch("grad");
  auto cfg = default_config(Experiment::GradStats);
  cfg.depths = {1, 2};
  cfg.grad_samples = 10;
  cfg.output_dir = out.string();
  const auto a = run_grad_stats(cfg);
  const auto b = run_grad_stats(cfg);
  EXPECT_EQ(a.json["summary"], b.json["summary"]);
  const std::string csv = slurp(a.dir / "grad_stats.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 16);
}

TEST(Cli, ExitCodes) {
  const auto out = scratch("cli");
  const std::string cli = VQC_CLI_PATH;
  EXPECT_EQ(exit_code(cli + " compile --m 1 --restarts 1 --out " + out.string()), 0);
  EXPECT_EQ(exit_code(cli + " compile --m 0 --out " + out.string()), 2);
  EXPECT_EQ(exit_code(cli + " compile --target nosuchgate --out " + out.string()), 2);
  EXPECT_EQ(exit_code(cli + " compile --config " + (out / "missing.ini").string()), 2);
  EXPECT_EQ(exit_code(cli + " frobnicate"), 2);
  const auto bad = out / "bad.ini";
  {
    std::ofstream f(bad);
    f << "[experiment]\nunknown = 1\n";
  }
  EXPECT_EQ(exit_code(cli + " grad-stats --config " + bad.string()), 2);
}

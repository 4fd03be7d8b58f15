// Command-line front end for the experiment harness.
//
//   vqc compile --target toffoli --m 6 --restarts 10 --seed 1 --out runs
//   vqc trotter-sweep --config sweep.ini
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vqc/harness.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> target;
  std::optional<std::string> m;
  std::optional<int> restarts;
  std::optional<int> threads;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI config file");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--target", o.target, "toffoli, fredkin or a matrix file");
  cmd->add_option("--m", o.m, "Trotter depth or list (6, 1,2,4, 1-8)");
  cmd->add_option("--restarts", o.restarts, "optimizer restarts");
  cmd->add_option("--threads", o.threads, "worker threads for restarts");
}

vqc::ExperimentConfig resolve(vqc::Experiment kind, const Overrides& o) {
  vqc::ExperimentConfig cfg =
      o.config.empty() ? vqc::default_config(kind) : vqc::load_config(o.config, kind);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.target) cfg.target = *o.target;
  if (o.m) cfg.depths = vqc::parse_int_list(*o.m);
  if (o.restarts) cfg.optimizer.restarts = *o.restarts;
  if (o.threads) cfg.optimizer.threads = *o.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational gate compilation experiments"};
  app.require_subcommand(1);
  Overrides o;
  std::optional<vqc::Experiment> chosen;
  for (auto kind : {vqc::Experiment::Compile, vqc::Experiment::TrotterSweep,
                    vqc::Experiment::CoherentNoiseSweep, vqc::Experiment::DampingSweep,
                    vqc::Experiment::GradStats}) {
    const std::string name =
        kind == vqc::Experiment::CoherentNoiseSweep ? "noise-sweep" : vqc::experiment_name(kind);
    auto* cmd = app.add_subcommand(name, std::string("run ") + vqc::experiment_name(kind));
    add_flags(cmd, o);
    cmd->callback([&chosen, kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  vqc::ExperimentConfig cfg;
  try {
    cfg = resolve(*chosen, o);
  } catch (const vqc::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto record = vqc::run_experiment(cfg);
    std::cout << record.dir.string() << "\n" << record.json["summary"].dump(2) << "\n";
  } catch (const vqc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

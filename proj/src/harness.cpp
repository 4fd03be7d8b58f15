#include "vqc/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vqc/pauli.hpp"

namespace vqc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

// Never reuses an existing directory: <out>/<name>, then <name>-1, <name>-2, ...
fs::path make_run_dir(const ExperimentConfig& cfg) {
  const std::string base = std::string(experiment_name(cfg.experiment)) + "_" +
                           fs::path(cfg.target).stem().string() + "_seed" +
                           std::to_string(cfg.master_seed);
  fs::create_directories(cfg.output_dir);
  fs::path dir = fs::path(cfg.output_dir) / base;
  for (int k = 1; !fs::create_directory(dir); ++k) {
    dir = fs::path(cfg.output_dir) / (base + "-" + std::to_string(k));
  }
  return dir;
}

json params_json(const HamiltonianSpec& spec, const RealVector& theta) {
  json out = json::object();
  for (const auto& term : spec.terms) out[term.pauli.label()] = theta(term.param_index);
  return out;
}

json nullable(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

json restart_json(const HamiltonianSpec& spec, const OptimizationTrace& t) {
  return {{"restart", t.restart},
          {"final_cost", nullable(t.final_cost)},
          {"final_fidelity", nullable(1.0 - t.final_cost)},
          {"iterations", t.rows.empty() ? 0 : t.rows.back().iteration},
          {"converged", t.converged},
          {"status", t.status},
          {"evaluations", t.evaluations},
          {"final_params", t.final_params.size() ? params_json(spec, t.final_params) : json()}};
}

// Fidelity statistics of a restart population. Convergence in the reported
// sense means reaching the cost threshold, independent of the stop rule.
json population_json(const RestartSummary& s, double threshold) {
  std::vector<double> converged;
  for (const auto& t : s.traces) {
    if (t.final_cost <= threshold) converged.push_back(1.0 - t.final_cost);
  }
  const auto [cmean, cstd] = mean_std(converged);
  return {{"restarts", s.traces.size()},
          {"best_restart", s.best_index},
          {"best_infidelity", nullable(s.best().final_cost)},
          {"best_fidelity", nullable(1.0 - s.best().final_cost)},
          {"mean_fidelity", nullable(1.0 - s.mean_cost)},
          {"std_fidelity", nullable(s.std_cost)},
          {"threshold_count", converged.size()},
          {"threshold_mean_fidelity", nullable(cmean)},
          {"threshold_std_fidelity", nullable(cstd)},
          {"stop_converged_count", s.converged_count}};
}

json base_record(const ExperimentConfig& cfg) {
  return {{"schema_version", kRecordSchemaVersion},
          {"artifact_version", kArtifactVersion},
          {"experiment", experiment_name(cfg.experiment)},
          {"master_seed", cfg.master_seed},
          {"config", cfg.to_json()},
          {"config_text", cfg.source_text},
          {"started_at", iso_now()}};
}

RunRecord finish(json record, const fs::path& dir) {
  record["finished_at"] = iso_now();
  write_file(dir / "record.json", record.dump(2) + "\n");
  return {std::move(record), dir};
}

struct Compiled {
  HamiltonianSpec spec;
  AnsatzCircuit circuit;
  TargetGate target;
  RestartSummary summary;
};

Compiled compile_at(const ExperimentConfig& cfg, int m) {
  Compiled c{heisenberg_spec(3), {}, target_by_name(cfg.target), {}};
  c.circuit = build_hva(c.spec, m, cfg.t0);
  if (c.target.n != c.circuit.n) throw ConfigError("target must act on 3 qubits");
  CostEvaluator e(c.circuit, c.target);
  InitScheme init = cfg.init;
  init.seed = depth_seed(cfg.master_seed, m);
  OptimizerConfig opt = cfg.optimizer;
  if (opt.algorithm != Algorithm::Lbfgs && opt.algorithm != Algorithm::NelderMead) {
    throw ConfigError("unsupported optimizer");
  }
  c.summary = multi_restart(e, init, opt);
  return c;
}

std::string trajectory_csv(const HamiltonianSpec& spec, const OptimizationTrace& t) {
  std::string out = "iteration,cost";
  for (const auto& label : spec.labels()) out += "," + label;
  out += "\n";
  for (std::size_t i = 0; i < t.params.size() && i < t.rows.size(); ++i) {
    out += std::to_string(t.rows[i].iteration) + "," + fmt(t.rows[i].cost);
    for (Eigen::Index j = 0; j < t.params[i].size(); ++j) out += "," + fmt(t.params[i](j));
    out += "\n";
  }
  return out;
}

std::string parameter_table_csv(const HamiltonianSpec& spec, const RealVector& theta) {
  std::string out = "label,index,value,magnitude\n";
  for (const auto& term : spec.terms) {
    const double v = theta(term.param_index);
    out += term.pauli.label() + "," + std::to_string(term.param_index) + "," + fmt(v) + "," +
           fmt(std::abs(v)) + "\n";
  }
  return out;
}

// Section -> allowed keys.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"type", "target", "m", "t0", "master_seed", "output_dir", "threads"}},
      {"optimizer",
       {"algorithm", "max_iters", "cost_tolerance", "gradient_tolerance", "history_size",
        "armijo_c1", "simplex_init_step", "simplex_tolerance", "restarts", "record_params"}},
      {"init", {"mean", "sigma", "clip"}},
      {"noise", {"kinds", "mode", "samples", "grid", "theta_file"}},
      {"damping", {"grid", "placement"}},
      {"grad_stats", {"samples"}},
  };
  return s;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Compile: return "compile";
    case Experiment::TrotterSweep: return "trotter-sweep";
    case Experiment::CoherentNoiseSweep: return "coherent-noise-sweep";
    case Experiment::DampingSweep: return "damping-sweep";
    case Experiment::GradStats: return "grad-stats";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  if (name == "compile") return Experiment::Compile;
  if (name == "trotter-sweep") return Experiment::TrotterSweep;
  if (name == "coherent-noise-sweep" || name == "noise-sweep") return Experiment::CoherentNoiseSweep;
  if (name == "damping-sweep") return Experiment::DampingSweep;
  if (name == "grad-stats") return Experiment::GradStats;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::uint64_t depth_seed(std::uint64_t master, int m) {
  return derive_seed(master, 1, static_cast<std::uint64_t>(m));
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      const int lo = parse_number<int>("m", item.substr(0, dash));
      const int hi = parse_number<int>("m", item.substr(dash + 1));
      if (hi < lo) throw ConfigError("empty integer range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<int>("m", item));
    }
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + t + "'");
    const double start = parse_number<double>("grid", parts[0]);
    const double stop = parse_number<double>("grid", parts[1]);
    const double step = parse_number<double>("grid", parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("invalid range '" + t + "'");
    std::vector<double> out;
    const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= count; ++i) out.push_back(start + step * i);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(t, ',')) out.push_back(parse_number<double>("grid", item));
  return out;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::Compile:
    case Experiment::CoherentNoiseSweep:
      cfg.depths = {6};
      break;
    case Experiment::TrotterSweep:
      cfg.depths = {1, 2, 3, 4, 5, 6, 7, 8};
      break;
    case Experiment::DampingSweep:
      cfg.depths = {6};
      cfg.optimizer = OptimizerConfig::nelder_mead();
      break;
    case Experiment::GradStats:
      cfg.depths = {1, 2, 3, 4, 5, 6};
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  optimizer.validate();
  if (depths.empty()) throw ConfigError("m: at least one Trotter depth is required");
  for (int m : depths) {
    if (m < 1) throw ConfigError("m: Trotter depth must be >= 1");
  }
  if (!(t0 > 0.0)) throw ConfigError("t0 must be positive");
  if (init.sigma < 0.0) throw ConfigError("init.sigma must be non-negative");
  if (init.clip_hi < init.clip_lo) throw ConfigError("init.clip must be non-negative");
  if (target.empty()) throw ConfigError("target must not be empty");
  try {
    if (target_by_name(target).n != 3) throw ConfigError("target must act on 3 qubits");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& ex) {
    throw ConfigError(std::string("target: ") + ex.what());
  }
  if (experiment == Experiment::CoherentNoiseSweep) {
    if (noise_kinds.empty()) throw ConfigError("noise.kinds must not be empty");
    if (noise_samples < 1) throw ConfigError("noise.samples must be >= 1");
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
      if (delta_grid[i] < 0.0 || (i && delta_grid[i] < delta_grid[i - 1])) {
        throw ConfigError("noise.grid must be non-negative and ascending");
      }
    }
  }
  if (experiment == Experiment::DampingSweep) {
    if (optimizer.algorithm != Algorithm::NelderMead) {
      throw ConfigError("damping-sweep requires the nelder-mead optimizer");
    }
    for (double p : damping_grid) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("damping.grid values must lie in [0, 1]");
    }
  }
  if (experiment == Experiment::GradStats && grad_samples < 2) {
    throw ConfigError("grad_stats.samples must be >= 2");
  }
}

json ExperimentConfig::to_json() const {
  json kinds = json::array();
  for (auto k : noise_kinds) kinds.push_back(noise_kind_name(k));
  return {{"experiment", experiment_name(experiment)},
          {"target", target},
          {"m", depths},
          {"t0", t0},
          {"master_seed", master_seed},
          {"output_dir", output_dir},
          {"threads", optimizer.threads},
          {"optimizer",
           {{"algorithm", algorithm_name(optimizer.algorithm)},
            {"max_iters", optimizer.max_iters},
            {"cost_tolerance", optimizer.cost_tolerance},
            {"gradient_tolerance", optimizer.gradient_tolerance},
            {"history_size", optimizer.history_size},
            {"armijo_c1", optimizer.armijo_c1},
            {"simplex_init_step", optimizer.simplex_init_step},
            {"simplex_tolerance", optimizer.simplex_tolerance},
            {"restarts", optimizer.restarts}}},
          {"init", {{"kind", "gaussian-clipped"}, {"mean", init.mean}, {"sigma", init.sigma},
                    {"clip", {init.clip_lo, init.clip_hi}}}},
          {"noise", {{"kinds", kinds}, {"mode", noise_mode_name(noise_mode)},
                     {"samples", noise_samples}, {"grid", delta_grid}, {"theta_file", theta_file}}},
          {"damping", {{"grid", damping_grid}, {"placement", placement_name(placement)}}},
          {"grad_stats", {{"samples", grad_samples}}}};
}

ExperimentConfig parse_config(std::string_view text, std::optional<Experiment> forced) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }

  std::optional<Experiment> declared;
  if (auto t = tree.get_optional<std::string>("experiment.type")) declared = parse_experiment(*t);
  if (forced && declared && *forced != *declared) {
    throw ConfigError(std::string("config declares experiment '") + experiment_name(*declared) +
                      "' but '" + experiment_name(*forced) + "' was requested");
  }
  const Experiment kind = forced ? *forced : declared.value_or(Experiment::Compile);
  ExperimentConfig cfg = default_config(kind);
  cfg.source_text = std::string(text);

  for (const auto& [section, body] : tree) {
    const auto allowed = schema().find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must be inside a [section]");
    }
    if (allowed == schema().end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!allowed->second.count(key)) {
        throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
      }
      const std::string value = trim(node.data());
      const std::string name = section + "." + key;
      if (section == "experiment") {
        if (key == "target") cfg.target = value;
        else if (key == "m") cfg.depths = parse_int_list(value);
        else if (key == "t0") cfg.t0 = parse_number<double>(name, value);
        else if (key == "master_seed") cfg.master_seed = parse_number<std::uint64_t>(name, value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "threads") cfg.optimizer.threads = parse_number<int>(name, value);
      } else if (section == "optimizer") {
        auto& o = cfg.optimizer;
        if (key == "algorithm") {
          const Algorithm a = parse_algorithm(value);
          if (a != o.algorithm) {
            const int threads = o.threads;
            o = a == Algorithm::NelderMead ? OptimizerConfig::nelder_mead() : OptimizerConfig{};
            o.threads = threads;
          }
        }
        else if (key == "max_iters") o.max_iters = parse_number<int>(name, value);
        else if (key == "cost_tolerance") o.cost_tolerance = parse_number<double>(name, value);
        else if (key == "gradient_tolerance") o.gradient_tolerance = parse_number<double>(name, value);
        else if (key == "history_size") o.history_size = parse_number<int>(name, value);
        else if (key == "armijo_c1") o.armijo_c1 = parse_number<double>(name, value);
        else if (key == "simplex_init_step") o.simplex_init_step = parse_number<double>(name, value);
        else if (key == "simplex_tolerance") o.simplex_tolerance = parse_number<double>(name, value);
        else if (key == "restarts") o.restarts = parse_number<int>(name, value);
        else if (key == "record_params") o.record_params = parse_bool(name, value);
      } else if (section == "init") {
        if (key == "mean") cfg.init.mean = parse_number<double>(name, value);
        else if (key == "sigma") cfg.init.sigma = parse_number<double>(name, value);
        else if (key == "clip") {
          const double c = parse_number<double>(name, value);
          cfg.init.clip_lo = -c;
          cfg.init.clip_hi = c;
        }
      } else if (section == "noise") {
        if (key == "kinds") {
          cfg.noise_kinds.clear();
          for (const auto& k : split(value, ',')) cfg.noise_kinds.push_back(parse_noise_kind(k));
        }
        else if (key == "mode") cfg.noise_mode = parse_noise_mode(value);
        else if (key == "samples") cfg.noise_samples = parse_number<int>(name, value);
        else if (key == "grid") cfg.delta_grid = parse_real_list(value);
        else if (key == "theta_file") cfg.theta_file = value;
      } else if (section == "damping") {
        if (key == "grid") cfg.damping_grid = parse_real_list(value);
        else if (key == "placement") cfg.placement = parse_placement(value);
      } else if (section == "grad_stats") {
        if (key == "samples") cfg.grad_samples = parse_number<int>(name, value);
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, std::optional<Experiment> forced) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), forced);
}

RunRecord run_compile(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.depths.size() != 1) throw ConfigError("compile takes a single Trotter depth");
  const int m = cfg.depths.front();
  const Compiled c = compile_at(cfg, m);
  const auto& best = c.summary.best();

  const fs::path dir = make_run_dir(cfg);
  write_file(dir / "training.csv", trace_csv(c.summary.traces));
  write_file(dir / "trajectory.csv", trajectory_csv(c.spec, best));
  write_file(dir / "parameters.csv", parameter_table_csv(c.spec, best.final_params));
  write_file(dir / "parameters.txt", format_parameters(c.spec, best.final_params));

  // Spread of each parameter across restarts that reached the threshold.
  json dispersion = json::object();
  std::vector<const OptimizationTrace*> good;
  for (const auto& t : c.summary.traces) {
    if (t.final_cost <= cfg.optimizer.cost_tolerance) good.push_back(&t);
  }
  for (const auto& term : c.spec.terms) {
    std::vector<double> xs;
    for (const auto* t : good) xs.push_back(t->final_params(term.param_index));
    dispersion[term.pauli.label()] = nullable(mean_std(xs).second);
  }

  json record = base_record(cfg);
  json restarts = json::array();
  for (const auto& t : c.summary.traces) restarts.push_back(restart_json(c.spec, t));
  record["results"] = {{"m", m}, {"target", c.target.name}, {"restarts", restarts}};
  json summary = population_json(c.summary, cfg.optimizer.cost_tolerance);
  summary["m"] = m;
  summary["best_params"] = params_json(c.spec, best.final_params);
  summary["param_dispersion"] = dispersion;
  record["summary"] = summary;
  return finish(std::move(record), dir);
}

RunRecord run_trotter_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir = make_run_dir(cfg);
  std::string csv =
      "m,mean_fidelity,std_fidelity,best_fidelity,threshold_count,threshold_mean_fidelity,"
      "restarts\n";
  json rows = json::array();
  std::vector<OptimizationTrace> all;
  for (int m : cfg.depths) {
    const Compiled c = compile_at(cfg, m);
    json pop = population_json(c.summary, cfg.optimizer.cost_tolerance);
    pop["m"] = m;
    pop["best_params"] = params_json(c.spec, c.summary.best().final_params);
    rows.push_back(pop);
    const double tmean = pop["threshold_mean_fidelity"].is_null()
                             ? std::nan("")
                             : pop["threshold_mean_fidelity"].get<double>();
    csv += std::to_string(m) + "," + fmt(1.0 - c.summary.mean_cost) + "," +
           fmt(c.summary.std_cost) + "," + fmt(1.0 - c.summary.best().final_cost) + "," +
           std::to_string(pop["threshold_count"].get<int>()) + "," + fmt(tmean) + "," +
           std::to_string(c.summary.traces.size()) + "\n";
    write_file(dir / ("training_m" + std::to_string(m) + ".csv"), trace_csv(c.summary.traces));
  }
  write_file(dir / "trotter.csv", csv);
  json record = base_record(cfg);
  record["results"] = {{"target", cfg.target}};
  record["summary"] = {{"per_m", rows}};
  return finish(std::move(record), dir);
}

RunRecord run_coherent_noise_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.depths.size() != 1) throw ConfigError("coherent-noise-sweep takes a single Trotter depth");
  const int m = cfg.depths.front();
  const HamiltonianSpec spec = heisenberg_spec(3);
  const AnsatzCircuit circuit = build_hva(spec, m, cfg.t0);
  const TargetGate target = target_by_name(cfg.target);

  RealVector theta_star;
  json compile_summary;
  if (!cfg.theta_file.empty()) {
    std::ifstream in(cfg.theta_file);
    if (!in) throw ConfigError("cannot open theta_file '" + cfg.theta_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    theta_star = parse_parameters(spec, ss.str());
    compile_summary = {{"source", cfg.theta_file}};
  } else {
    const Compiled c = compile_at(cfg, m);
    theta_star = c.summary.best().final_params;
    compile_summary = population_json(c.summary, cfg.optimizer.cost_tolerance);
    compile_summary["source"] = "compiled";
  }

  const fs::path dir = make_run_dir(cfg);
  write_file(dir / "parameters.txt", format_parameters(spec, theta_star));
  std::string csv = sweep_csv_header();
  json curves = json::array();
  for (NoiseKind kind : cfg.noise_kinds) {
    CoherentNoise noise;
    noise.kind = kind;
    noise.mode = cfg.noise_mode;
    noise.samples = cfg.noise_samples;
    noise.seed = derive_seed(cfg.master_seed, 4, static_cast<std::uint64_t>(kind));
    const auto points = robustness_sweep(spec, theta_star, circuit, target, noise, cfg.delta_grid);
    csv += sweep_csv_rows(noise, points);
    json pts = json::array();
    for (const auto& p : points) {
      pts.push_back({{"delta", p.delta}, {"mean_fidelity", p.mean_fidelity},
                     {"std_fidelity", p.std_fidelity}, {"samples", p.samples}});
    }
    curves.push_back({{"noise_kind", noise_kind_name(kind)}, {"points", pts}});
  }
  write_file(dir / "noise.csv", csv);

  json record = base_record(cfg);
  record["results"] = {{"m", m}, {"target", target.name},
                       {"theta_star", params_json(spec, theta_star)}};
  record["summary"] = {{"compile", compile_summary},
                       {"compiled_fidelity", hs_overlap(circuit_unitary(circuit, theta_star),
                                                        target.matrix)},
                       {"curves", curves}};
  return finish(std::move(record), dir);
}

RunRecord run_damping_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.depths.size() != 1) throw ConfigError("damping-sweep takes a single Trotter depth");
  const int m = cfg.depths.front();
  const HamiltonianSpec spec = heisenberg_spec(3);
  const AnsatzCircuit circuit = build_hva(spec, m, cfg.t0);
  const TargetGate target = target_by_name(cfg.target);

  const fs::path dir = make_run_dir(cfg);
  std::string csv = "p,mean_fidelity,std_fidelity,best_fidelity,restarts\n";
  json rows = json::array();
  for (std::size_t g = 0; g < cfg.damping_grid.size(); ++g) {
    const double p = cfg.damping_grid[g];
    CostEvaluator e(target, damping_plan(circuit, p, cfg.placement));
    InitScheme init = cfg.init;
    init.seed = derive_seed(cfg.master_seed, 2, g);
    OptimizerConfig opt = cfg.optimizer;
    opt.record_params = false;
    const RestartSummary s = multi_restart(e, init, opt);
    csv += fmt(p) + "," + fmt(1.0 - s.mean_cost) + "," + fmt(s.std_cost) + "," +
           fmt(1.0 - s.best().final_cost) + "," + std::to_string(s.traces.size()) + "\n";
    json finals = json::array();
    for (const auto& t : s.traces) finals.push_back(nullable(1.0 - t.final_cost));
    rows.push_back({{"p", p},
                    {"mean_fidelity", nullable(1.0 - s.mean_cost)},
                    {"std_fidelity", nullable(s.std_cost)},
                    {"best_fidelity", nullable(1.0 - s.best().final_cost)},
                    {"restarts", s.traces.size()},
                    {"final_fidelities", finals}});
  }
  write_file(dir / "damping.csv", csv);
  json record = base_record(cfg);
  record["results"] = {{"m", m}, {"target", target.name},
                       {"placement", placement_name(cfg.placement)}};
  record["summary"] = {{"per_p", rows}};
  return finish(std::move(record), dir);
}

RunRecord run_grad_stats(const ExperimentConfig& cfg) {
  cfg.validate();
  const HamiltonianSpec spec = heisenberg_spec(3);
  const TargetGate target = target_by_name(cfg.target);
  const fs::path dir = make_run_dir(cfg);
  std::string csv = "m,index,label,mean,variance\n";
  json rows = json::array();
  for (int m : cfg.depths) {
    CostEvaluator e(build_hva(spec, m, cfg.t0), target);
    const GradientStats st =
        gradient_stats(e, cfg.grad_samples, cfg.init, derive_seed(cfg.master_seed, 3, m));
    json per = json::object();
    for (const auto& term : spec.terms) {
      const int j = term.param_index;
      csv += std::to_string(m) + "," + std::to_string(j) + "," + term.pauli.label() + "," +
             fmt(st.mean(j)) + "," + fmt(st.variance(j)) + "\n";
      per[term.pauli.label()] = {{"mean", st.mean(j)}, {"variance", st.variance(j)}};
    }
    csv += std::to_string(m) + ",-1,ALL,," + fmt(st.overall_variance) + "\n";
    rows.push_back({{"m", m},
                    {"samples", st.samples},
                    {"overall_variance", st.overall_variance},
                    {"min_variance", st.variance.minCoeff()},
                    {"per_coordinate", per}});
  }
  write_file(dir / "grad_stats.csv", csv);
  json record = base_record(cfg);
  record["results"] = {{"target", target.name}};
  record["summary"] = {{"per_m", rows}};
  return finish(std::move(record), dir);
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Compile: return run_compile(cfg);
    case Experiment::TrotterSweep: return run_trotter_sweep(cfg);
    case Experiment::CoherentNoiseSweep: return run_coherent_noise_sweep(cfg);
    case Experiment::DampingSweep: return run_damping_sweep(cfg);
    case Experiment::GradStats: return run_grad_stats(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace vqc

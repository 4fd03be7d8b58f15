#include "vqc/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <thread>

#include "vqc/pauli.hpp"

namespace vqc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

RealVector canonical(const Objective& f, const RealVector& x) {
  return f.periodic ? wrap(x) : x;
}

struct CurvaturePair {
  RealVector s;
  RealVector y;
  double rho;
};

RealVector two_loop(const std::deque<CurvaturePair>& history, const RealVector& grad) {
  RealVector q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  const auto& last = history.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return -q;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  return a == Algorithm::Lbfgs ? "lbfgs" : "nelder-mead";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "lbfgs") return Algorithm::Lbfgs;
  if (name == "nelder-mead") return Algorithm::NelderMead;
  throw ConfigError("unknown optimizer algorithm '" + name + "'");
}

OptimizerConfig OptimizerConfig::nelder_mead() {
  OptimizerConfig cfg;
  cfg.algorithm = Algorithm::NelderMead;
  cfg.max_iters = 2000;
  cfg.restarts = 100;
  return cfg;
}

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw ConfigError("optimizer: max_iters must be >= 1");
  if (!(cost_tolerance > 0.0) || !(gradient_tolerance > 0.0) || !(simplex_tolerance > 0.0)) {
    throw ConfigError("optimizer: tolerances must be positive");
  }
  if (history_size < 1) throw ConfigError("optimizer: history_size must be >= 1");
  if (!(simplex_init_step > 0.0)) throw ConfigError("optimizer: simplex_init_step must be positive");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ConfigError("optimizer: armijo_c1 must be in (0, 1)");
  if (restarts < 1) throw ConfigError("optimizer: restarts must be >= 1");
  if (threads < 1) throw ConfigError("optimizer: threads must be >= 1");
}

Objective make_objective(const CostEvaluator& e) {
  Objective f;
  f.value = [&e](const RealVector& x) { return e.cost(x); };
  if (!e.noisy()) {
    f.gradient = [&e](const RealVector& x) { return e.gradient(x, GradientMethod::Adjoint); };
  }
  f.periodic = true;
  return f;
}

OptimizationTrace lbfgs_minimize(const Objective& f, const RealVector& init,
                                 const OptimizerConfig& cfg) {
  if (!f.gradient) throw NoisyModeUnsupported("lbfgs_minimize: objective has no gradient");
  const auto start = Clock::now();
  OptimizationTrace trace;
  std::uint64_t evals = 0;

  RealVector x = canonical(f, init);
  double fx = f.value(x);
  RealVector g = f.gradient(x);
  evals += 2;
  std::deque<CurvaturePair> history;

  auto record = [&](int it) {
    trace.rows.push_back({it, fx, g.lpNorm<Eigen::Infinity>(), ms_since(start)});
    if (cfg.record_params) trace.params.push_back(x);
  };

  int it = 0;
  record(it);
  while (true) {
    if (fx <= cfg.cost_tolerance) {
      trace.converged = true;
      trace.status = "cost-tolerance";
      break;
    }
    if (g.lpNorm<Eigen::Infinity>() <= cfg.gradient_tolerance) {
      trace.converged = true;
      trace.status = "gradient-tolerance";
      break;
    }
    if (it >= cfg.max_iters) {
      trace.status = "max-iters";
      break;
    }

    bool accepted = false;
    RealVector step, x_new, g_new;
    double f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      RealVector dir;
      double alpha = 1.0;
      if (history.empty()) {
        dir = -g;
        alpha = std::min(1.0, 1.0 / g.norm());
      } else {
        dir = two_loop(history, g);
        if (dir.dot(g) >= 0.0) {
          history.clear();
          dir = -g;
          alpha = std::min(1.0, 1.0 / g.norm());
        }
      }
      const double slope = dir.dot(g);
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        step = alpha * dir;
        x_new = x + step;
        f_new = f.value(x_new);
        ++evals;
        if (f_new <= fx + cfg.armijo_c1 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) history.clear();
    }
    if (!accepted) {
      trace.status = "line-search-failure";
      break;
    }

    g_new = f.gradient(x_new);
    ++evals;
    const RealVector y = g_new - g;
    const double sy = step.dot(y);
    if (sy > std::numeric_limits<double>::epsilon() * step.norm() * y.norm()) {
      history.push_back({step, y, 1.0 / sy});
      if (static_cast<int>(history.size()) > cfg.history_size) history.pop_front();
    }
    // Wrapping only relabels the iterate; the curvature pair uses the raw step.
    x = canonical(f, x_new);
    fx = f_new;
    g = std::move(g_new);
    record(++it);
  }

  trace.final_params = x;
  trace.final_cost = fx;
  trace.evaluations = evals;
  return trace;
}

OptimizationTrace lbfgs_minimize(const CostEvaluator& e, const RealVector& init,
                                 const OptimizerConfig& cfg) {
  if (e.noisy()) throw NoisyModeUnsupported("lbfgs_minimize: cost mode is noisy");
  return lbfgs_minimize(make_objective(e), init, cfg);
}

OptimizationTrace nelder_mead_minimize(const Objective& f, const RealVector& init,
                                       const OptimizerConfig& cfg) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const auto start = Clock::now();
  OptimizationTrace trace;
  std::uint64_t evals = 0;
  const Eigen::Index dim = init.size();

  auto eval = [&](const RealVector& x) {
    ++evals;
    return f.value(canonical(f, x));
  };

  std::vector<RealVector> simplex;
  std::vector<double> values;
  simplex.push_back(init);
  for (Eigen::Index j = 0; j < dim; ++j) {
    RealVector v = init;
    v(j) += cfg.simplex_init_step;
    simplex.push_back(v);
  }
  for (const auto& v : simplex) values.push_back(eval(v));

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<RealVector> s2;
    std::vector<double> v2;
    for (std::size_t i : order) {
      s2.push_back(std::move(simplex[i]));
      v2.push_back(values[i]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };

  int it = 0;
  while (true) {
    sort_simplex();
    const double spread = values.back() - values.front();
    trace.rows.push_back({it, values.front(), spread, ms_since(start)});
    if (cfg.record_params) trace.params.push_back(canonical(f, simplex.front()));
    if (spread < cfg.simplex_tolerance) {
      trace.converged = true;
      trace.status = "simplex-tolerance";
      break;
    }
    if (it >= cfg.max_iters) {
      trace.status = "max-iters";
      break;
    }
    ++it;

    const std::size_t worst = simplex.size() - 1;
    RealVector centroid = RealVector::Zero(dim);
    for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(worst);

    const RealVector xr = centroid + kReflect * (centroid - simplex[worst]);
    const double fr = eval(xr);
    if (fr < values.front()) {
      const RealVector xe = centroid + kExpand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[worst - 1]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    bool shrink = false;
    if (fr < values[worst]) {
      const RealVector xc = centroid + kContract * (xr - centroid);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        values[worst] = fc;
      } else {
        shrink = true;
      }
    } else {
      const RealVector xc = centroid + kContract * (simplex[worst] - centroid);
      const double fc = eval(xc);
      if (fc < values[worst]) {
        simplex[worst] = xc;
        values[worst] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        simplex[i] = simplex[0] + kShrink * (simplex[i] - simplex[0]);
        values[i] = eval(simplex[i]);
      }
    }
  }

  trace.final_params = canonical(f, simplex.front());
  trace.final_cost = values.front();
  trace.evaluations = evals;
  return trace;
}

OptimizationTrace nelder_mead_minimize(const CostEvaluator& e, const RealVector& init,
                                       const OptimizerConfig& cfg) {
  return nelder_mead_minimize(make_objective(e), init, cfg);
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {std::nan(""), std::nan("")};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var)};
}

RestartSummary multi_restart(const CostEvaluator& e, const InitScheme& init,
                             const OptimizerConfig& cfg) {
  cfg.validate();
  RestartSummary out;
  out.traces.resize(cfg.restarts);

  auto run_one = [&](int r) {
    const RealVector x0 = init.draw(e.num_params(), static_cast<std::uint64_t>(r));
    OptimizationTrace t;
    try {
      t = cfg.algorithm == Algorithm::Lbfgs ? lbfgs_minimize(e, x0, cfg)
                                            : nelder_mead_minimize(e, x0, cfg);
    } catch (const std::exception& ex) {
      t.final_params = x0;
      t.final_cost = std::nan("");
      t.status = std::string("error: ") + ex.what();
    }
    t.restart = r;
    out.traces[r] = std::move(t);
  };

  const int workers = std::min(cfg.threads, cfg.restarts);
  if (workers <= 1) {
    for (int r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) run_one(r);
      });
    }
  }

  std::vector<double> finals, converged;
  out.best_index = -1;
  for (const auto& t : out.traces) {
    if (std::isnan(t.final_cost)) continue;
    finals.push_back(t.final_cost);
    if (t.converged) converged.push_back(t.final_cost);
    if (out.best_index < 0 || t.final_cost < out.traces[out.best_index].final_cost) {
      out.best_index = t.restart;
    }
  }
  if (out.best_index < 0) out.best_index = 0;
  std::tie(out.mean_cost, out.std_cost) = mean_std(finals);
  out.converged_count = static_cast<int>(converged.size());
  std::tie(out.converged_mean_cost, out.converged_std_cost) = mean_std(converged);
  return out;
}

std::string trace_csv(const std::vector<OptimizationTrace>& traces) {
  std::string out = "restart,iteration,cost,grad_norm_or_spread,elapsed_ms\n";
  char buf[160];
  for (const auto& t : traces) {
    for (const auto& row : t.rows) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.3f\n", t.restart, row.iteration,
                    row.cost, row.metric, row.elapsed_ms);
      out += buf;
    }
  }
  return out;
}

}  // namespace vqc

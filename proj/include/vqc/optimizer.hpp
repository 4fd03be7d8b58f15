#pragma once

// Classical outer loop: L-BFGS for noiseless costs, Nelder-Mead for noisy ones.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vqc/cost.hpp"
#include "vqc/random.hpp"

namespace vqc {

enum class Algorithm { Lbfgs, NelderMead };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::Lbfgs;
  int max_iters = 200;
  double cost_tolerance = 1e-4;
  double gradient_tolerance = 1e-8;  // lbfgs
  int history_size = 10;             // lbfgs
  double armijo_c1 = 1e-4;           // lbfgs
  double simplex_init_step = 0.1;    // nelder-mead
  double simplex_tolerance = 1e-8;   // nelder-mead
  int restarts = 10;
  int threads = 1;
  bool record_params = true;

  /// Defaults for derivative-free runs on the 15-parameter problem.
  static OptimizerConfig nelder_mead();
  void validate() const;
};

struct TraceRow {
  int iteration = 0;
  double cost = 0.0;
  double metric = 0.0;  // gradient infinity-norm (lbfgs) or simplex cost spread
  double elapsed_ms = 0.0;
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;
  std::vector<RealVector> params;  // iterate after each row, when recorded
  RealVector final_params;
  double final_cost = 1.0;
  bool converged = false;
  std::string status;
  int restart = 0;
  std::uint64_t evaluations = 0;
};

/// Minimization target. `periodic` wraps parameters into [-pi, pi].
struct Objective {
  std::function<double(const RealVector&)> value;
  std::function<RealVector(const RealVector&)> gradient;
  bool periodic = false;
};

Objective make_objective(const CostEvaluator& e);

/// Two-loop-recursion L-BFGS with Armijo backtracking. Stops when the cost is
/// at or below cost_tolerance, when the gradient infinity-norm is at or below
/// gradient_tolerance, or after max_iters iterations.
OptimizationTrace lbfgs_minimize(const Objective& f, const RealVector& init,
                                 const OptimizerConfig& cfg);
OptimizationTrace lbfgs_minimize(const CostEvaluator& e, const RealVector& init,
                                 const OptimizerConfig& cfg);

/// Nelder-Mead with reflection/expansion/contraction/shrink = (1, 2, 0.5, 0.5).
OptimizationTrace nelder_mead_minimize(const Objective& f, const RealVector& init,
                                       const OptimizerConfig& cfg);
OptimizationTrace nelder_mead_minimize(const CostEvaluator& e, const RealVector& init,
                                       const OptimizerConfig& cfg);

struct RestartSummary {
  std::vector<OptimizationTrace> traces;  // ordered by restart index
  int best_index = 0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  int converged_count = 0;
  double converged_mean_cost = 0.0;  // NaN when nothing converged
  double converged_std_cost = 0.0;

  const OptimizationTrace& best() const { return traces.at(best_index); }
};

/// Restart r starts from init.draw(Q, r); runs may execute on cfg.threads
/// workers without changing any result.
RestartSummary multi_restart(const CostEvaluator& e, const InitScheme& init,
                             const OptimizerConfig& cfg);

/// Population mean and standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& xs);

/// CSV with columns restart,iteration,cost,grad_norm_or_spread,elapsed_ms.
std::string trace_csv(const std::vector<OptimizationTrace>& traces);

}  // namespace vqc

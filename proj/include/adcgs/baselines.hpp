#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "adcgs/core.hpp"
#include "adcgs/feasible_set.hpp"
#include "adcgs/harness.hpp"
#include "adcgs/objective.hpp"

namespace adcgs {

enum class BaselineAlgorithm { cg_open, cg_ls, cgs, pg, acfgm };

BaselineAlgorithm parse_baseline(std::string_view name);
std::string to_string(BaselineAlgorithm a);

struct BaselineConfig {
  BaselineAlgorithm algorithm = BaselineAlgorithm::cg_open;
  std::optional<double> L_override;
  std::int64_t max_iter = 1000;
  double stop_gap = 1e-10;
  double alpha = 0.5;  // acfgm
  std::int64_t max_inner = 50;  // cgs
};

/// Curvature estimate from secants between x0 and points towards the LMO
/// vertex of -grad f(x0). Used when the objective has no global constant.
double sampled_smoothness(const Objective& obj, const FeasibleSet& set,
                          const DenseVector& x0, OracleCounters& counters);

/// Frank-Wolfe with the open-loop step 2/(k+2).
RunResult run_cg_open(const Objective& obj, const FeasibleSet& set,
                      const BaselineConfig& cfg, const DenseVector& x0,
                      const RunOptions& options = {});

/// Frank-Wolfe with an exact step for least squares and Armijo backtracking
/// otherwise.
RunResult run_cg_ls(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                    const DenseVector& x0, const RunOptions& options = {});

/// Conditional gradient sliding with known L and a fixed horizon N = max_iter.
RunResult run_cgs(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                  const DenseVector& x0, const RunOptions& options = {});

/// Projected gradient with step 1/L.
RunResult run_pg(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                 const DenseVector& x0, const RunOptions& options = {});

/// The AdCGS outer loop with the subproblem solved exactly by projection.
RunResult run_acfgm(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                    const DenseVector& x0, const RunOptions& options = {});

RunResult run_baseline(const Objective& obj, const FeasibleSet& set,
                       const BaselineConfig& cfg, const DenseVector& x0,
                       const RunOptions& options = {});

struct ReferenceSolution {
  DenseVector x;
  double f_value = 0.0;
  double fw_gap = 0.0;
  bool converged = false;
};

/// High-accuracy minimizer used to measure primal gaps: the projection-based
/// accelerated method when the set supports projection, a long AdCGS run
/// otherwise. Returns the best point seen.
ReferenceSolution reference_solution(const Objective& obj, const FeasibleSet& set,
                                     double tol = 1e-13,
                                     std::int64_t max_iter = 100000);

}  // namespace adcgs

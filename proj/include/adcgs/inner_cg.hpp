#pragma once

#include <cstdint>

#include "adcgs/core.hpp"
#include "adcgs/feasible_set.hpp"

namespace adcgs {

/// One instance of the inner problem
///
///   min_{z in P}  <g, z> + ||z - u||^2 / (2 eta)
///
/// solved by conditional gradient steps until its Frank-Wolfe gap is at most
/// `delta`. `g` and `u` are referenced, not copied: the outer solver hands in
/// its cached gradient so that every LMO call of one outer iteration reuses the
/// same gradient.
struct SubproblemSpec {
  const DenseVector& g;
  const DenseVector& u;
  double eta;
  double delta;
  std::int64_t max_inner = 50;
};

struct InnerResult {
  DenseVector z;
  std::int64_t iters = 0;
  double final_gap = 0.0;
  bool hit_cap = false;
};

/// Runs the inner conditional gradient loop starting from u. Each iteration
/// makes exactly one LMO call; the step length is the exact minimizer of the
/// subproblem along the segment [u_t, v_t]. When the cap is reached the last
/// iterate whose gap was measured is returned with hit_cap = true.
InnerResult solve_subproblem(const FeasibleSet& set, const SubproblemSpec& spec,
                             OracleCounters& counters);

/// Worst-case iteration count ceil(6 D^2 / (eta delta)) for reaching a gap of
/// at most delta.
std::int64_t inner_iteration_cap(double diameter, double eta, double delta);

/// Subproblem objective <g, z> + ||z - u||^2 / (2 eta).
double subproblem_value(const DenseVector& g, const DenseVector& u, double eta,
                        const DenseVector& z);

}  // namespace adcgs

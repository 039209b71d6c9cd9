#include "adcgs/inner_cg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adcgs/errors.hpp"

namespace adcgs {

InnerResult solve_subproblem(const FeasibleSet& set, const SubproblemSpec& spec,
                             OracleCounters& counters) {
  const std::size_t n = set.dimension();
  if (spec.g.size() != n || spec.u.size() != n) {
    throw ContractViolation("solve_subproblem: dimension mismatch");
  }
  if (!(spec.eta > 0.0) || !(spec.delta > 0.0) || spec.max_inner < 1) {
    throw ContractViolation("solve_subproblem: need eta > 0, delta > 0, max_inner >= 1");
  }
  if (!set.contains(spec.u)) {
    throw ContractViolation("solve_subproblem: center is not feasible");
  }

  const double inv_eta = 1.0 / spec.eta;
  DenseVector ut = spec.u;
  DenseVector direction(n);
  InnerResult result;
  for (std::int64_t t = 1;; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      direction[i] = spec.g[i] + (ut[i] - spec.u[i]) * inv_eta;
    }
    const DenseVector vt = set.lmo(direction, counters);
    double gap = 0.0;
    double step_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ut[i] - vt[i];
      gap += direction[i] * d;
      step_sq += d * d;
    }
    if (gap <= spec.delta || t == spec.max_inner) {
      result.iters = t;
      result.final_gap = std::max(gap, 0.0);
      result.hit_cap = gap > spec.delta;
      break;
    }
    double gamma = 1.0;
    if (step_sq > 1e-16 * spec.eta) {
      gamma = std::min(1.0, gap / (step_sq * inv_eta));
    } else if (step_sq == 0.0) {
      throw NumericalError("solve_subproblem: positive gap with zero displacement");
    }
    for (std::size_t i = 0; i < n; ++i) ut[i] = (1.0 - gamma) * ut[i] + gamma * vt[i];
    require_finite(ut, "inner iterate");
  }
  result.z = std::move(ut);
  return result;
}

std::int64_t inner_iteration_cap(double diameter, double eta, double delta) {
  if (!(diameter > 0.0) || !(eta > 0.0) || !(delta > 0.0)) {
    throw ContractViolation("inner_iteration_cap: arguments must be positive");
  }
  const double raw = 6.0 * diameter * diameter / (eta * delta);
  // Absorb roundoff such as sqrt(2)^2 = 2.0000000000000004 before the ceiling.
  const double bound = std::ceil(raw * (1.0 - 1e-12));
  if (bound >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(bound));
}

double subproblem_value(const DenseVector& g, const DenseVector& u, double eta,
                        const DenseVector& z) {
  return dot(g, z) + squared_distance(z, u) / (2.0 * eta);
}

}  // namespace adcgs

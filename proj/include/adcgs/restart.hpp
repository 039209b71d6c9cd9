#pragma once

#include <cstdint>
#include <vector>

#include "adcgs/core.hpp"
#include "adcgs/feasible_set.hpp"
#include "adcgs/objective.hpp"
#include "adcgs/schedule.hpp"

namespace adcgs {

/// Inputs of the restarted scheme for mu-strongly convex, L-smooth objectives.
struct RestartConfig {
  double mu = 0.0;
  double L = 0.0;
  double phi0 = 0.0;  // upper estimate of f(w0) - f*
  double eta1 = 0.0;  // cap on the first stepsize of every stage
  double gamma = 2.0;
  double beta = kMaxBeta;
  int stages = 1;
  std::int64_t max_inner = 50;

  void validate() const;
};

/// Per-stage length ceil(sqrt((15 gamma L / mu) (1/(beta(1-beta)) + 1.5 eta1))).
std::int64_t restart_horizon(double mu, double L, double beta, double eta1, double gamma);

struct StageRecord {
  int stage = 0;
  double f_value = 0.0;  // f(w_s)
  std::int64_t foo_calls = 0;
  std::int64_t lmo_calls = 0;
  int line_search_trials = 0;
  std::int64_t hit_cap_count = 0;
};

struct RestartResult {
  std::int64_t horizon = 0;
  std::vector<StageRecord> stages;
  DenseVector w;
  OracleCounters counters;
};

/// Runs `stages` rounds of AdCGS with the cor1 stepsize rules, the
/// first-iteration line search and delta_k = 2 phi0 / (2^s mu N k), each for
/// exactly N outer iterations, warm-started at the previous output.
RestartResult run_restarted(const Objective& obj, const FeasibleSet& set,
                            const RestartConfig& rcfg, const DenseVector& w0);

}  // namespace adcgs

#include "adcgs/restart.hpp"

#include <cmath>

#include "adcgs/errors.hpp"
#include "adcgs/solver.hpp"

namespace adcgs {

void RestartConfig::validate() const {
  if (!(mu > 0.0) || !(L > 0.0) || !(phi0 > 0.0) || !(eta1 > 0.0)) {
    throw ConfigError("restart: mu, L, phi0 and eta1 must be positive");
  }
  if (!(gamma > 1.0)) throw ConfigError("restart: gamma must exceed 1");
  if (!(beta > 0.0) || beta > kMaxBeta + 1e-15) {
    throw ConfigError("restart: beta must lie in (0, 1 - sqrt(6)/3]");
  }
  if (stages < 1) throw ConfigError("restart: need at least one stage");
  if (max_inner < 1) throw ConfigError("restart: max_inner must be >= 1");
}

std::int64_t restart_horizon(double mu, double L, double beta, double eta1, double gamma) {
  const double inner = 1.0 / (beta * (1.0 - beta)) + 1.5 * eta1;
  const double n = std::ceil(std::sqrt(15.0 * gamma * L / mu * inner));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

RestartResult run_restarted(const Objective& obj, const FeasibleSet& set,
                            const RestartConfig& rcfg, const DenseVector& w0) {
  rcfg.validate();
  RestartResult out;
  out.horizon = restart_horizon(rcfg.mu, rcfg.L, rcfg.beta, rcfg.eta1, rcfg.gamma);
  out.w = w0;

  ScheduleConfig cfg;
  cfg.variant = ScheduleVariant::cor2_fixed_N;
  cfg.beta = rcfg.beta;
  cfg.eta1_mode = Eta1Mode::line_search;
  cfg.eta1_cap = rcfg.eta1;
  cfg.gamma = rcfg.gamma;
  cfg.N = out.horizon;
  cfg.max_inner = rcfg.max_inner;
  cfg.max_outer = out.horizon;
  cfg.outer_stop_gap = 0.0;

  double scale = 1.0;
  for (int s = 1; s <= rcfg.stages; ++s) {
    scale *= 0.5;
    cfg.cor2_numerator = 2.0 * rcfg.phi0 * scale / rcfg.mu;
    AdcgsSolver solver(obj, set, cfg, out.w);
    solver.initial_record();
    for (std::int64_t k = 0; k < out.horizon; ++k) solver.step();

    const OracleCounters& c = solver.counters();
    out.counters.foo_calls += c.foo_calls;
    out.counters.lmo_calls += c.lmo_calls;
    out.counters.projection_calls += c.projection_calls;
    out.w = solver.current();
    out.stages.push_back({s, solver.state().eval.value, c.foo_calls, c.lmo_calls,
                          solver.line_search_trials(), solver.flags().hit_cap_count});
  }
  return out;
}

}  // namespace adcgs

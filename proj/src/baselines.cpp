#include "adcgs/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "adcgs/errors.hpp"
#include "adcgs/inner_cg.hpp"
#include "adcgs/solver.hpp"

namespace adcgs {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

// <g, x - v> with roundoff-level negatives clamped.
double gap_from_vertex(const DenseVector& g, const DenseVector& x, const DenseVector& v) {
  const double gx = dot(g, x);
  const double gv = dot(g, v);
  const double gap = gx - gv;
  const double slack = 1e-12 * std::max({1.0, std::abs(gx), std::abs(gv)});
  if (gap < -slack) throw NumericalError("negative Frank-Wolfe gap");
  return std::max(gap, 0.0);
}

void check_start(const Objective& obj, const FeasibleSet& set, const DenseVector& x0) {
  if (obj.dimension() != set.dimension() || x0.size() != set.dimension()) {
    throw ContractViolation("baseline: dimension mismatch between objective, set and x0");
  }
  if (!set.contains(x0)) throw ContractViolation("baseline: x0 is not feasible");
}

void require_projection(const FeasibleSet& set) {
  if (!set.supports_projection()) {
    throw UnsupportedOperation("projection unsupported for set " + set.describe());
  }
}

// Smoothness constant for methods that need one; flags a sampled surrogate.
double resolve_smoothness(const Objective& obj, const FeasibleSet& set,
                          const BaselineConfig& cfg, const DenseVector& x0,
                          OracleCounters& counters, RunFlags& flags) {
  if (cfg.L_override) {
    if (!(*cfg.L_override > 0.0)) throw ConfigError("L override must be positive");
    return *cfg.L_override;
  }
  if (auto lip = obj.global_smoothness()) {
    return *lip > 0.0 ? *lip : 1.0;
  }
  flags.no_global_L = true;
  flags.warnings.push_back("no global smoothness constant; using a sampled surrogate");
  return sampled_smoothness(obj, set, x0, counters);
}

// Frank-Wolfe iterations; the LMO at x_k serves both as the step vertex and
// as the gap probe, so each iteration costs one FOO and one LMO call.
class FrankWolfe : public IterativeMethod {
 public:
  FrankWolfe(const Objective& obj, const FeasibleSet& set, DenseVector x0, bool line_search)
      : obj_(obj), set_(set), x_(std::move(x0)), line_search_(line_search) {}

  TraceRecord initial_record() override {
    eval_ = obj_.evaluate(x_, counters_);
    return record();
  }

  TraceRecord step() override {
    const DenseVector d = axpy_combine(1.0, vertex_, -1.0, x_);
    const double gamma = line_search_ ? search(d) : 2.0 / (static_cast<double>(k_) + 2.0);
    if (gamma > 0.0) x_ = axpy_combine(1.0 - gamma, x_, gamma, vertex_);
    require_finite(x_, "Frank-Wolfe iterate");
    ++k_;
    eval_ = obj_.evaluate(x_, counters_);
    step_ = gamma;
    return record();
  }

  bool halted() const override { return flags_.stalled; }
  const DenseVector& current() const override { return x_; }
  const OracleCounters& counters() const override { return counters_; }
  const RunFlags& flags() const override { return flags_; }

 private:
  double search(const DenseVector& d) {
    const double slope = dot(eval_.gradient, d);
    if (slope >= 0.0) return 0.0;
    if (obj_.kind() == ObjectiveKind::least_squares) {
      const double curv = norm2(obj_.matrix().multiply(d));
      if (curv == 0.0) return 1.0;
      return std::clamp(-slope / (curv * curv), 0.0, 1.0);
    }
    double gamma = 1.0;
    for (int i = 0; i <= kMaxHalvings; ++i, gamma *= 0.5) {
      const double trial = obj_.value(axpy_combine(1.0, x_, gamma, d));
      if (trial <= eval_.value + kArmijo * gamma * slope) return gamma;
    }
    flags_.stalled = true;
    flags_.warnings.push_back("backtracking exhausted at k = " + std::to_string(k_));
    return 0.0;
  }

  TraceRecord record() {
    vertex_ = set_.lmo(eval_.gradient, counters_);
    TraceRecord r;
    r.k = k_;
    r.f_value = eval_.value;
    r.fw_gap = gap_from_vertex(eval_.gradient, x_, vertex_);
    r.eta_k = step_;
    r.foo_calls = counters_.foo_calls;
    r.lmo_calls = counters_.lmo_calls;
    return r;
  }

  const Objective& obj_;
  const FeasibleSet& set_;
  DenseVector x_;
  bool line_search_;
  Evaluation eval_;
  DenseVector vertex_;
  std::int64_t k_ = 0;
  double step_ = 0.0;
  OracleCounters counters_;
  RunFlags flags_;
};

// Conditional gradient sliding (Lan and Zhou, 2016), fixed-horizon variant:
//   w_k = (1 - gamma_k) y_{k-1} + gamma_k x_{k-1}
//   x_k = CndG(f'(w_k), x_{k-1}, beta_k, eta_k)
//   y_k = (1 - gamma_k) y_{k-1} + gamma_k x_k
// with beta_k = 2L/k, gamma_k = 2/(k+1), eta_k = 2 L D^2 / (N k).
// The reported point is y_k; its gradient is a diagnostic that is not
// charged to the oracle counters.
class Cgs : public IterativeMethod {
 public:
  Cgs(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg, DenseVector x0)
      : obj_(obj), set_(set), cfg_(cfg), x_(x0), y_(std::move(x0)) {}

  TraceRecord initial_record() override {
    lip_ = resolve_smoothness(obj_, set_, cfg_, x_, counters_, flags_);
    const double d = set_.diameter();
    d2_ = d * d;
    OracleCounters diagnostic;
    y_eval_ = obj_.evaluate(y_, diagnostic);
    return record(0, 0.0, 0.0, 0, false);
  }

  TraceRecord step() override {
    const std::int64_t k = k_ + 1;
    const double kd = static_cast<double>(k);
    const double gamma = 2.0 / (kd + 1.0);
    const double beta = 2.0 * lip_ / kd;
    const double tol = 2.0 * lip_ * d2_ / (static_cast<double>(cfg_.max_iter) * kd);
    const DenseVector w = axpy_combine(1.0 - gamma, y_, gamma, x_);
    const DenseVector g = obj_.gradient(w, counters_);
    InnerResult inner =
        solve_subproblem(set_, {g, x_, 1.0 / beta, tol, cfg_.max_inner}, counters_);
    x_ = std::move(inner.z);
    y_ = axpy_combine(1.0 - gamma, y_, gamma, x_);
    require_finite(y_, "CGS iterate");
    if (inner.hit_cap) ++flags_.hit_cap_count;
    k_ = k;
    OracleCounters diagnostic;
    y_eval_ = obj_.evaluate(y_, diagnostic);
    return record(k, 1.0 / beta, tol, inner.iters, inner.hit_cap);
  }

  const DenseVector& current() const override { return y_; }
  const OracleCounters& counters() const override { return counters_; }
  const RunFlags& flags() const override { return flags_; }

 private:
  TraceRecord record(std::int64_t k, double eta, double tol, std::int64_t inner,
                     bool hit_cap) {
    TraceRecord r;
    r.k = k;
    r.f_value = y_eval_.value;
    r.fw_gap = set_.fw_gap(y_eval_.gradient, y_, counters_);
    r.eta_k = eta;
    r.delta_k = tol;
    r.L_k = lip_;
    r.L_hat_k = lip_;
    r.inner_iters_used = inner;
    r.hit_cap = hit_cap;
    r.foo_calls = counters_.foo_calls;
    r.lmo_calls = counters_.lmo_calls;
    return r;
  }

  const Objective& obj_;
  const FeasibleSet& set_;
  BaselineConfig cfg_;
  DenseVector x_, y_;
  Evaluation y_eval_;
  double lip_ = 0.0;
  double d2_ = 0.0;
  std::int64_t k_ = 0;
  OracleCounters counters_;
  RunFlags flags_;
};

class ProjectedGradient : public IterativeMethod {
 public:
  ProjectedGradient(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                    DenseVector x0)
      : obj_(obj), set_(set), cfg_(cfg), x_(std::move(x0)) {}

  TraceRecord initial_record() override {
    eval_ = obj_.evaluate(x_, counters_);
    lip_ = resolve_smoothness(obj_, set_, cfg_, x_, counters_, flags_);
    return record();
  }

  TraceRecord step() override {
    const double before = eval_.value;
    x_ = set_.project(axpy_combine(1.0, x_, -1.0 / lip_, eval_.gradient), counters_);
    require_finite(x_, "projected gradient iterate");
    ++k_;
    eval_ = obj_.evaluate(x_, counters_);
    if (eval_.value > before + 1e-12 * std::max(1.0, std::abs(before))) {
      flags_.diverged = true;
      flags_.warnings.push_back("objective increased at k = " + std::to_string(k_));
    }
    return record();
  }

  bool halted() const override { return flags_.diverged; }
  const DenseVector& current() const override { return x_; }
  const OracleCounters& counters() const override { return counters_; }
  const RunFlags& flags() const override { return flags_; }

 private:
  TraceRecord record() {
    TraceRecord r;
    r.k = k_;
    r.f_value = eval_.value;
    r.fw_gap = set_.fw_gap(eval_.gradient, x_, counters_);
    r.eta_k = 1.0 / lip_;
    r.L_k = lip_;
    r.L_hat_k = lip_;
    r.foo_calls = counters_.foo_calls;
    r.lmo_calls = counters_.lmo_calls;
    return r;
  }

  const Objective& obj_;
  const FeasibleSet& set_;
  BaselineConfig cfg_;
  DenseVector x_;
  Evaluation eval_;
  double lip_ = 0.0;
  std::int64_t k_ = 0;
  OracleCounters counters_;
  RunFlags flags_;
};

ScheduleConfig acfgm_schedule(const BaselineConfig& cfg) {
  ScheduleConfig s;
  s.variant = ScheduleVariant::cor3_alpha;
  s.alpha = cfg.alpha;
  s.max_outer = cfg.max_iter;
  s.outer_stop_gap = cfg.stop_gap;
  return s;
}

}  // namespace

BaselineAlgorithm parse_baseline(std::string_view name) {
  if (name == "cg-open" || name == "cg_open") return BaselineAlgorithm::cg_open;
  if (name == "cg-ls" || name == "cg_ls") return BaselineAlgorithm::cg_ls;
  if (name == "cgs") return BaselineAlgorithm::cgs;
  if (name == "pg") return BaselineAlgorithm::pg;
  if (name == "acfgm") return BaselineAlgorithm::acfgm;
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

std::string to_string(BaselineAlgorithm a) {
  switch (a) {
    case BaselineAlgorithm::cg_open:
      return "cg-open";
    case BaselineAlgorithm::cg_ls:
      return "cg-ls";
    case BaselineAlgorithm::cgs:
      return "cgs";
    case BaselineAlgorithm::pg:
      return "pg";
    case BaselineAlgorithm::acfgm:
      return "acfgm";
  }
  return "?";
}

double sampled_smoothness(const Objective& obj, const FeasibleSet& set,
                          const DenseVector& x0, OracleCounters& counters) {
  const Evaluation base = obj.evaluate(x0, counters);
  const DenseVector v = set.lmo(base.gradient, counters);
  double best = 0.0;
  for (double t : {1.0, 0.1, 0.01}) {
    const DenseVector p = axpy_combine(1.0 - t, x0, t, v);
    const double dx = distance(p, x0);
    if (dx == 0.0) continue;
    const DenseVector g = obj.gradient(p, counters);
    best = std::max(best, distance(g, base.gradient) / dx);
  }
  require_finite(best, "sampled smoothness");
  return best > 0.0 ? best : 1.0;
}

RunResult run_cg_open(const Objective& obj, const FeasibleSet& set,
                      const BaselineConfig& cfg, const DenseVector& x0,
                      const RunOptions& options) {
  check_start(obj, set, x0);
  FrankWolfe method(obj, set, x0, false);
  return run_method(method, cfg.stop_gap, cfg.max_iter, options);
}

RunResult run_cg_ls(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                    const DenseVector& x0, const RunOptions& options) {
  check_start(obj, set, x0);
  FrankWolfe method(obj, set, x0, true);
  return run_method(method, cfg.stop_gap, cfg.max_iter, options);
}

RunResult run_cgs(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                  const DenseVector& x0, const RunOptions& options) {
  check_start(obj, set, x0);
  if (cfg.max_iter < 1) throw ConfigError("cgs: max_iter must be >= 1");
  if (cfg.max_inner < 1) throw ConfigError("cgs: max_inner must be >= 1");
  Cgs method(obj, set, cfg, x0);
  return run_method(method, cfg.stop_gap, cfg.max_iter, options);
}

RunResult run_pg(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                 const DenseVector& x0, const RunOptions& options) {
  require_projection(set);
  check_start(obj, set, x0);
  ProjectedGradient method(obj, set, cfg, x0);
  return run_method(method, cfg.stop_gap, cfg.max_iter, options);
}

RunResult run_acfgm(const Objective& obj, const FeasibleSet& set, const BaselineConfig& cfg,
                    const DenseVector& x0, const RunOptions& options) {
  require_projection(set);
  return run_adcgs(obj, set, acfgm_schedule(cfg), x0, options,
                   SubproblemMode::exact_projection);
}

RunResult run_baseline(const Objective& obj, const FeasibleSet& set,
                       const BaselineConfig& cfg, const DenseVector& x0,
                       const RunOptions& options) {
  switch (cfg.algorithm) {
    case BaselineAlgorithm::cg_open:
      return run_cg_open(obj, set, cfg, x0, options);
    case BaselineAlgorithm::cg_ls:
      return run_cg_ls(obj, set, cfg, x0, options);
    case BaselineAlgorithm::cgs:
      return run_cgs(obj, set, cfg, x0, options);
    case BaselineAlgorithm::pg:
      return run_pg(obj, set, cfg, x0, options);
    case BaselineAlgorithm::acfgm:
      return run_acfgm(obj, set, cfg, x0, options);
  }
  throw ConfigError("unknown baseline");
}

ReferenceSolution reference_solution(const Objective& obj, const FeasibleSet& set,
                                     double tol, std::int64_t max_iter) {
  ScheduleConfig cfg;
  SubproblemMode mode = SubproblemMode::exact_projection;
  if (set.supports_projection()) {
    cfg.variant = ScheduleVariant::cor3_alpha;
    cfg.alpha = 0.5;
  } else {
    cfg.variant = ScheduleVariant::cor1;
    cfg.max_inner = 1000;
    mode = SubproblemMode::inner_cg;
  }
  cfg.max_outer = max_iter;
  cfg.outer_stop_gap = tol;

  AdcgsSolver solver(obj, set, cfg, set.default_start(), mode);
  TraceRecord r = solver.initial_record();
  ReferenceSolution best{solver.current(), r.f_value, r.fw_gap, r.fw_gap <= tol};
  while (!best.converged && r.k < max_iter) {
    r = solver.step();
    if (r.f_value < best.f_value) {
      best.x = solver.current();
      best.f_value = r.f_value;
      best.fw_gap = r.fw_gap;
    }
    best.converged = r.fw_gap <= tol;
  }
  return best;
}

}  // namespace adcgs

#include "adcgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adcgs/errors.hpp"

namespace adcgs {

namespace {

constexpr double kPerturbation = 1e-6;
constexpr int kMaxDirectionDraws = 64;
constexpr int kMaxLineSearchTrials = 200;
constexpr double kAuditSlack = 1e-12;

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Ratio ||dg|| / ||dx|| with 0/0 = 0.
double secant_ratio(const Evaluation& a, const Evaluation& b) {
  const double dx = distance(a.x, b.x);
  const double dg = distance(a.gradient, b.gradient);
  if (dx == 0.0) {
    if (dg == 0.0) return 0.0;
    throw NumericalError("gradient changed between identical points");
  }
  const double r = dg / dx;
  require_finite(r, "secant curvature");
  return r;
}

bool exceeds(double value, double limit) {
  return value > limit + kAuditSlack * std::max(1.0, std::abs(limit));
}

}  // namespace

Eta1Init init_eta1(const Objective& obj, const FeasibleSet& set, const Evaluation& z0,
                   double c, double beta, OracleCounters& counters) {
  if (!(c > 0.0)) throw ContractViolation("init_eta1: c must be positive");
  if (!set.contains(z0.x)) throw ContractViolation("init_eta1: z0 is not feasible");

  const std::size_t n = z0.x.size();
  std::mt19937_64 rng(0xada5eedULL);
  Eta1Init out;
  std::optional<DenseVector> vertex;
  for (int draw = 0; draw < kMaxDirectionDraws && !vertex; ++draw) {
    DenseVector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = 2.0 * uniform_unit(rng) - 1.0;
    DenseVector v = set.lmo(d, counters);
    if (!(v == z0.x)) vertex = std::move(v);
  }

  if (vertex) {
    out.z_minus1 = axpy_combine(1.0 - kPerturbation, z0.x, kPerturbation, *vertex);
    const Evaluation zm1 = obj.evaluate(out.z_minus1, counters);
    out.L0 = distance(out.z_minus1, z0.x) > 0.0 ? secant_ratio(zm1, z0) : 0.0;
  } else {
    out.z_minus1 = z0.x;
  }
  if (!(out.L0 > 0.0)) {
    out.L0 = 1.0;
    out.fallback = true;
  }
  out.eta1 = c / (4.0 * (1.0 - beta) * out.L0);
  return out;
}

LineSearchResult first_iteration_line_search(const Objective& obj, const FeasibleSet& set,
                                             const Evaluation& z0, double beta,
                                             double delta1, double L0, double gamma,
                                             std::int64_t max_inner,
                                             OracleCounters& counters) {
  if (!(L0 > 0.0)) throw ContractViolation("line search: L0 must be positive");
  if (!(gamma > 1.0)) throw ContractViolation("line search: gamma must exceed 1");

  LineSearchResult out;
  double eta = 1.0 / (4.0 * (1.0 - beta) * L0);
  for (int j = 0; j < kMaxLineSearchTrials; ++j, eta /= gamma) {
    const InnerResult inner =
        solve_subproblem(set, {z0.gradient, z0.x, eta, delta1, max_inner}, counters);
    out.inner_iters += inner.iters;
    out.hit_cap = out.hit_cap || inner.hit_cap;
    Evaluation z1 = obj.evaluate(inner.z, counters);
    const double lip = secant_ratio(z1, z0);
    if (lip == 0.0 || eta <= 2.0 / (5.0 * lip)) {
      out.z1 = std::move(z1);
      out.eta1 = eta;
      out.L1 = lip;
      out.trials = j + 1;
      return out;
    }
  }
  throw LineSearchFailure("first-iteration line search did not terminate within " +
                          std::to_string(kMaxLineSearchTrials) +
                          " trials; the objective may not be locally smooth");
}

double certified_bound(const BoundTracker& bound, double tau_k, double eta_next) {
  const double denom = (tau_k + 1.0) * eta_next;
  if (!(denom > 0.0)) throw ContractViolation("certified_bound: nonpositive denominator");
  return std::max(0.0, (bound.E_term + bound.S) / denom);
}

AdcgsSolver::AdcgsSolver(const Objective& obj, const FeasibleSet& set, ScheduleConfig cfg,
                         DenseVector x0, SubproblemMode mode)
    : obj_(obj), set_(set), cfg_(std::move(cfg)), mode_(mode), diameter_(set.diameter()) {
  cfg_.validate();
  if (obj.dimension() != set.dimension() || x0.size() != set.dimension()) {
    throw ContractViolation("solver: dimension mismatch between objective, set and x0");
  }
  if (!set.contains(x0)) throw ContractViolation("solver: x0 is not feasible");
  if (mode_ == SubproblemMode::exact_projection && !set.supports_projection()) {
    throw UnsupportedOperation("projection unsupported for set " + set.describe());
  }
  if (mode_ == SubproblemMode::exact_projection && cfg_.eta1_mode == Eta1Mode::line_search) {
    throw ConfigError("the first-iteration line search requires the inner CG subproblem");
  }
  state_.x = x0;
  state_.y = x0;
  state_.z = x0;
  z0_ = std::move(x0);
}

TraceRecord AdcgsSolver::initial_record() {
  if (initialized_) throw ContractViolation("solver: initial_record called twice");
  initialized_ = true;
  state_.eval = obj_.evaluate(state_.x, counters_);
  require_finite(state_.eval.value, "f(x0)");

  const Eta1Init init = init_eta1(obj_, set_, state_.eval, cfg_.resolved_eta1_scale(),
                                  cfg_.beta, counters_);
  state_.L0 = init.L0;
  if (init.fallback) {
    flags_.warnings.push_back("initial curvature vanished; using L0 = 1");
  }
  if (cfg_.eta1_mode == Eta1Mode::from_L0) {
    state_.eta1 = init.eta1;
    hist_.eta.push_back(init.eta1);
  } else if (cfg_.eta1_cap) {
    state_.L0 = std::max(state_.L0, 1.0 / (4.0 * (1.0 - cfg_.beta) * *cfg_.eta1_cap));
  }
  weighted_sum_ = DenseVector(state_.x.size());
  return make_record();
}

DenseVector AdcgsSolver::solve_z(const DenseVector& g, const DenseVector& center,
                                 double eta, double delta) {
  if (mode_ == SubproblemMode::exact_projection) {
    state_.inner_iters = 0;
    state_.hit_cap = false;
    return set_.project(axpy_combine(1.0, center, -eta, g), counters_);
  }
  const SubproblemSpec spec{g, center, eta, delta, cfg_.max_inner};
  if (observer_) observer_(spec);
  InnerResult inner = solve_subproblem(set_, spec, counters_);
  if (!inner.hit_cap && inner.final_gap > delta) {
    throw ContractViolation("inner solve returned a gap above its tolerance");
  }
  state_.inner_iters = inner.iters;
  state_.hit_cap = inner.hit_cap;
  return std::move(inner.z);
}

Evaluation AdcgsSolver::solve_first_iteration(const Evaluation& prev) {
  if (cfg_.eta1_mode == Eta1Mode::line_search) {
    LineSearchResult ls =
        first_iteration_line_search(obj_, set_, prev, cfg_.beta, state_.delta, state_.L0,
                                    cfg_.gamma, cfg_.max_inner, counters_);
    ls_trials_ = ls.trials;
    state_.eta1 = ls.eta1;
    hist_.eta.push_back(ls.eta1);
    state_.inner_iters = ls.inner_iters;
    state_.hit_cap = ls.hit_cap;
    state_.lip.L = ls.L1;
    state_.z = ls.z1.x;
    return std::move(ls.z1);
  }
  state_.z = solve_z(prev.gradient, state_.y, state_.eta1, state_.delta);
  Evaluation cur = obj_.evaluate(state_.z, counters_);
  state_.lip.L = secant_ratio(cur, prev);
  return cur;
}

TraceRecord AdcgsSolver::step() {
  if (!initialized_) initial_record();
  const std::int64_t k = state_.k + 1;
  const Evaluation prev = std::move(state_.eval);
  x_prev_ = state_.x;

  state_.delta = mode_ == SubproblemMode::exact_projection
                     ? 0.0
                     : schedule_delta(cfg_.variant, k, diameter_, cfg_.theta, cfg_.N,
                                      cfg_.cor2_numerator);
  Evaluation cur;
  if (k == 1) {
    state_.tau = 0.0;
    state_.beta = 0.0;
    cur = solve_first_iteration(prev);
    state_.eta = state_.eta1;
    state_.x = state_.z;  // tau_1 = 0; y_1 = y_0 since beta_1 = 0
  } else {
    state_.eta = hist_.eta[static_cast<std::size_t>(k)];
    state_.tau = schedule_tau(cfg_.variant, k, hist_.tau.back(), cfg_.alpha, state_.eta,
                              hist_.lip.back());
    state_.beta = cfg_.beta;
    state_.z = solve_z(prev.gradient, state_.y, state_.eta, state_.delta);
    state_.y = axpy_combine(1.0 - state_.beta, state_.y, state_.beta, state_.z);
    const double w = 1.0 / (1.0 + state_.tau);
    state_.x = axpy_combine(state_.tau * w, state_.x, w, state_.z);
    cur = obj_.evaluate(state_.x, counters_);
    state_.lip.L = local_lipschitz(obj_, prev, cur, false);
  }
  require_finite(state_.x, "outer iterate x");
  require_finite(cur.value, "f(x_k)");
  check_feasible(state_.z, "z_k");
  check_feasible(state_.y, "y_k");
  check_feasible(state_.x, "x_k");
  state_.k = k;
  state_.eval = std::move(cur);

  hist_.lip.push_back(state_.lip.L);
  hist_.tau.push_back(state_.tau);
  hist_.delta.push_back(state_.delta);
  if (k == 1) state_.lip.L_hat = 1.0 / (4.0 * (1.0 - cfg_.beta) * state_.eta1);
  state_.lip.L_hat = std::max(state_.lip.L_hat, state_.lip.L);
  state_.lip.L_lower = std::min(state_.lip.L_lower, state_.lip.L);

  state_.eta_next =
      schedule_next_eta(cfg_.variant, k + 1, hist_.eta, hist_.tau, hist_.lip, cfg_.beta);
  require_finite(state_.eta_next, "eta_{k+1}");
  hist_.eta.push_back(state_.eta_next);
  audit_schedule(k);

  BoundTracker& b = state_.bound;
  if (k == 1) {
    const double d2 = diameter_ * diameter_;
    const double ls_term = 0.5 * state_.eta_next * (2.5 * state_.lip.L - 1.0 / state_.eta1) *
                           squared_distance(state_.z, z0_);
    b.E_term = d2 / (2.0 * cfg_.beta) + ls_term;
    b.R1_surrogate = 2.0 * b.E_term + (1.0 - cfg_.beta) * (2.0 + cfg_.theta) * state_.eta1 *
                                          d2 / (2.0 * cfg_.theta);
  }
  const double delta_next =
      mode_ == SubproblemMode::exact_projection
          ? 0.0
          : schedule_delta(cfg_.variant, k + 1, diameter_, cfg_.theta, cfg_.N,
                           cfg_.cor2_numerator);
  b.S += state_.eta_next * (delta_next + state_.delta);
  b.sum_eta += state_.eta_next;

  if (k >= 2) {
    const auto km1 = static_cast<std::size_t>(k - 1);
    const double w = (hist_.tau[km1] + 1.0) * state_.eta - state_.tau * state_.eta_next;
    const double scale = (hist_.tau[km1] + 1.0) * state_.eta;
    if (w < -kAuditSlack * scale) {
      throw NumericalError("schedule violation: negative averaging weight at k = " +
                           std::to_string(k - 1));
    }
    weighted_sum_ = axpy_combine(1.0, weighted_sum_, std::max(w, 0.0), x_prev_);
  }

  if (state_.hit_cap) ++flags_.hit_cap_count;
  return make_record();
}

void AdcgsSolver::audit_schedule(std::int64_t k) const {
  // Checks eta_{k+1} and tau_k against the guarantees of the schedule.
  const std::int64_t next = k + 1;
  const double eta_next = state_.eta_next;
  const double floor = eta_floor(cfg_.variant, next, cfg_.alpha, state_.lip.L_hat);
  if (eta_next < floor * (1.0 - kAuditSlack)) {
    throw NumericalError("schedule violation: eta_" + std::to_string(next) +
                         " below its lower bound");
  }
  if (next >= 3) {
    const auto i = static_cast<std::size_t>(k);
    const double eta_k = hist_.eta[i];
    const double tau_k = hist_.tau[i];
    const double tau_km1 = hist_.tau[i - 1];
    const double lip_k = hist_.lip[i];
    const double growth = 2.0 * (1.0 - cfg_.beta) * (1.0 - cfg_.beta);
    bool ok = !exceeds(eta_next, growth * eta_k) &&
              !exceeds(eta_next, (tau_km1 + 1.0) / tau_k * eta_k);
    if (lip_k > 0.0) ok = ok && !exceeds(eta_next, tau_k / (4.0 * lip_k));
    if (!ok) {
      throw NumericalError("schedule violation: eta_" + std::to_string(next) +
                           " exceeds a stepsize condition");
    }
  }
  if (cfg_.variant == ScheduleVariant::cor3_alpha && k >= 2) {
    const double kd = static_cast<double>(k);
    const double lo = 1.0 + cfg_.alpha * (kd - 2.0) / 2.0;
    if (exceeds(state_.tau, kd / 2.0) || exceeds(lo, state_.tau)) {
      throw NumericalError("schedule violation: tau_" + std::to_string(k) +
                           " outside its bounds");
    }
  }
}

void AdcgsSolver::check_feasible(const DenseVector& v, const char* what) const {
  if (!set_.contains(v)) {
    throw ContractViolation(std::string("infeasible ") + what + " at k = " +
                            std::to_string(state_.k + 1));
  }
}

TraceRecord AdcgsSolver::make_record() {
  TraceRecord r;
  r.k = state_.k;
  r.f_value = state_.eval.value;
  r.fw_gap = set_.fw_gap(state_.eval.gradient, state_.x, counters_);
  r.foo_calls = counters_.foo_calls;
  r.lmo_calls = counters_.lmo_calls;
  if (state_.k >= 1) {
    r.eta_k = state_.eta;
    r.tau_k = state_.tau;
    r.delta_k = state_.delta;
    r.L_k = state_.lip.L;
    r.L_hat_k = state_.lip.L_hat;
    r.L_lower_k = state_.lip.L_lower;
    r.inner_iters_used = state_.inner_iters;
    r.hit_cap = state_.hit_cap;
    r.certified_bound = certified_bound(state_.bound, state_.tau, state_.eta_next);
  }
  return r;
}

std::optional<DenseVector> AdcgsSolver::average() const {
  if (state_.k == 0) return state_.x;
  const double last = (state_.tau + 1.0) * state_.eta_next;
  DenseVector avg = axpy_combine(1.0, weighted_sum_, last, state_.x);
  const double inv = 1.0 / state_.bound.sum_eta;
  for (double& v : avg) v *= inv;
  return avg;
}

RunResult run_adcgs(const Objective& obj, const FeasibleSet& set, const ScheduleConfig& cfg,
                    const DenseVector& x0, const RunOptions& options, SubproblemMode mode) {
  AdcgsSolver solver(obj, set, cfg, x0, mode);
  std::int64_t max_iter = cfg.max_outer;
  if (cfg.variant == ScheduleVariant::cor2_fixed_N) max_iter = std::min(max_iter, cfg.N);
  return run_method(solver, cfg.outer_stop_gap, max_iter, options);
}

}  // namespace adcgs

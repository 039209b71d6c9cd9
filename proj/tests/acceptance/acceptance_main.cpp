// Acceptance checks for the solver library. Prints one PASS/FAIL line per
// criterion and exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adcgs/baselines.hpp"
#include "adcgs/data_io.hpp"
#include "adcgs/errors.hpp"
#include "adcgs/inner_cg.hpp"
#include "adcgs/restart.hpp"
#include "adcgs/solver.hpp"
#include "support.hpp"

namespace {

using namespace adcgs;
using adcgs::testing::TestRng;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

Objective lsq_of(const SyntheticInstance& inst) {
  return Objective::least_squares(inst.data.A, inst.data.b);
}

// Oracle calls spent before the trace first reaches `target`, or +inf.
double foo_to_reach(const std::vector<TraceRecord>& trace, double f_ref, double target) {
  for (const auto& r : trace) {
    if (r.f_value - f_ref <= target) return static_cast<double>(r.foo_calls);
  }
  return kInf;
}

Outcome inner_cg_complexity() {
  Stopwatch clock;
  TestRng rng(1001);
  const std::vector<FeasibleSet> sets = {FeasibleSet::simplex(20), FeasibleSet::l2_ball(20, 1.0),
                                         FeasibleSet::ksparse(20, 3, 1.0)};
  int total = 0;
  int ok = 0;
  std::int64_t worst_iters = 0;
  for (const auto& set : sets) {
    for (int t = 0; t < 100; ++t) {
      const DenseVector g = rng.gaussian(20);
      const DenseVector u = rng.feasible_point(set);
      const double eta = rng.log_uniform(0.01, 10.0);
      const double delta = rng.log_uniform(1e-6, 1e-1);
      const std::int64_t cap = inner_iteration_cap(set.diameter(), eta, delta);
      OracleCounters c;
      const InnerResult r = solve_subproblem(set, {g, u, eta, delta, cap}, c);
      ++total;
      if (!r.hit_cap && r.final_gap <= delta && r.iters <= cap) ++ok;
      worst_iters = std::max(worst_iters, r.iters);
    }
  }
  const double secs = clock.seconds();
  return {ok == total && secs < 60.0,
          fmt("%.0f/%.0f subproblems within the iteration bound; max inner iters %.0f; %.1f s", ok,
              total, static_cast<double>(worst_iters), secs)};
}

Outcome cor1_stepsize_floor() {
  Stopwatch clock;
  const Objective obj = lsq_of(generate_synthetic({50, 10, 1, SyntheticKind::simplex_lsq}));
  const FeasibleSet set = FeasibleSet::simplex(10);
  ScheduleConfig cfg;
  cfg.variant = ScheduleVariant::cor1;
  cfg.outer_stop_gap = 0.0;
  cfg.max_outer = 500;
  const RunResult r = run_adcgs(obj, set, cfg, set.default_start());
  int violations = 0;
  double worst = kInf;
  for (std::size_t k = 2; k < r.trace.size(); ++k) {
    const double floor = static_cast<double>(k) / (12.0 * r.trace[k - 1].L_hat_k);
    worst = std::min(worst, r.trace[k].eta_k / floor);
    if (r.trace[k].eta_k < floor - 1e-12) ++violations;
  }
  const double secs = clock.seconds();
  const bool complete = r.trace.size() == 501;
  return {complete && violations == 0 && secs < 10.0,
          fmt("%.0f iterations, %.0f violations, min eta_k/floor = %.4f, %.2f s",
              static_cast<double>(r.trace.size() - 1), violations, worst, secs)};
}

Outcome certified_bound_dominance() {
  int runs_checked = 0;
  int violations = 0;
  int rows = 0;
  double tightest = kInf;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Objective obj = lsq_of(generate_synthetic({50, 10, seed, SyntheticKind::simplex_lsq}));
    const FeasibleSet set = FeasibleSet::simplex(10);
    ScheduleConfig cfg;
    cfg.variant = ScheduleVariant::cor1;
    cfg.outer_stop_gap = 0.0;
    cfg.max_outer = 500;
    // The inner loop is given room to certify every tolerance.
    cfg.max_inner = 10000000;
    const RunResult r = run_adcgs(obj, set, cfg, set.default_start());
    if (r.flags.hit_cap_count > 0) continue;
    ++runs_checked;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const double gap = std::max(0.0, r.trace[k].f_value);  // f* = 0 by construction
      const double bound = *r.trace[k].certified_bound;
      ++rows;
      if (gap > bound) ++violations;
      if (gap > 0.0) tightest = std::min(tightest, bound / gap);
    }
  }
  return {runs_checked == 3 && violations == 0,
          fmt("%.0f cap-free runs, %.0f rows, %.0f violations, min bound/gap = %.3g",
              runs_checked, rows, violations, tightest)};
}

Outcome cor3_schedule_bounds() {
  const Objective obj = lsq_of(generate_synthetic({50, 10, 1, SyntheticKind::simplex_lsq}));
  const FeasibleSet set = FeasibleSet::simplex(10);
  auto run = [&](ScheduleVariant v, double alpha) {
    ScheduleConfig cfg;
    cfg.variant = v;
    cfg.alpha = alpha;
    cfg.outer_stop_gap = 0.0;
    cfg.max_outer = 500;
    return run_adcgs(obj, set, cfg, set.default_start());
  };
  int violations = 0;
  int rows = 0;
  for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
    const RunResult r = run(ScheduleVariant::cor3_alpha, alpha);
    if (r.trace.size() != 501) ++violations;
    for (std::size_t k = 2; k < r.trace.size(); ++k) {
      const double kd = static_cast<double>(k);
      const double tau = r.trace[k].tau_k;
      const double floor = (3.0 + alpha * (kd - 3.0)) / (12.0 * r.trace[k - 1].L_hat_k);
      ++rows;
      if (tau > kd / 2.0 + 1e-12) ++violations;
      if (tau < 1.0 + alpha * (kd - 2.0) / 2.0 - 1e-12) ++violations;
      if (r.trace[k].eta_k < floor - 1e-12) ++violations;
    }
  }
  const RunResult a1 = run(ScheduleVariant::cor3_alpha, 1.0);
  const RunResult c1 = run(ScheduleVariant::cor1, 1.0);
  bool identical = a1.trace.size() == c1.trace.size();
  for (std::size_t k = 1; identical && k < a1.trace.size(); ++k) {
    identical = a1.trace[k].tau_k == c1.trace[k].tau_k;
  }
  return {violations == 0 && identical,
          fmt("%.0f rows over 4 alphas, %.0f violations, alpha=1 tau equals cor1 tau: %.0f", rows,
              violations, identical ? 1.0 : 0.0)};
}

struct RestartRun {
  RestartResult result;
  double phi0 = 0.0;
};

std::vector<RestartRun>& restart_runs() {
  static std::vector<RestartRun> runs;
  return runs;
}

Outcome restart_halving() {
  Stopwatch clock;
  int violations = 0;
  double worst_ratio = 0.0;
  double horizon = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Objective obj =
        lsq_of(generate_synthetic({30, 10, seed, SyntheticKind::ball_lsq_strongly_convex}));
    const FeasibleSet set = FeasibleSet::l2_ball(10, 1.0);
    const DenseVector w0 = set.default_start();
    RestartConfig rcfg;
    rcfg.mu = obj.strong_convexity();
    rcfg.L = *obj.global_smoothness();
    rcfg.phi0 = obj.value(w0);
    rcfg.eta1 = 1.0 / rcfg.L;
    rcfg.stages = 8;
    const RestartResult r = run_restarted(obj, set, rcfg, w0);
    horizon = static_cast<double>(r.horizon);
    for (const StageRecord& s : r.stages) {
      const double target = rcfg.phi0 / std::ldexp(1.0, s.stage);
      worst_ratio = std::max(worst_ratio, s.f_value / target);
      if (s.f_value > target) ++violations;
    }
    restart_runs().push_back({r, rcfg.phi0});
  }
  const double secs = clock.seconds();
  return {violations == 0 && secs < 120.0,
          fmt("3 seeds x 8 stages (N = %.0f), %.0f violations, max f(w_s)/(phi0/2^s) = %.3g, %.1f s",
              horizon, violations, worst_ratio, secs)};
}

Outcome oracle_accounting() {
  int bad = 0;
  int iterations = 0;
  const std::vector<std::pair<SyntheticKind, FeasibleSet>> cases = {
      {SyntheticKind::simplex_lsq, FeasibleSet::simplex(10)},
      {SyntheticKind::simplex_lsq, FeasibleSet::ksparse(10, 3, 1.0)},
      {SyntheticKind::ball_lsq_strongly_convex, FeasibleSet::l2_ball(10, 1.0)}};
  for (const auto& [kind, set] : cases) {
    const Objective obj = lsq_of(generate_synthetic({50, 10, 1, kind}));
    for (auto mode : {Eta1Mode::from_L0, Eta1Mode::line_search}) {
      ScheduleConfig cfg;
      cfg.eta1_mode = mode;
      cfg.outer_stop_gap = 0.0;
      cfg.max_outer = 300;
      AdcgsSolver solver(obj, set, cfg, set.default_start());
      TraceRecord prev = solver.initial_record();
      for (int k = 1; k <= 300; ++k) {
        const TraceRecord r = solver.step();
        // Rejected line-search trials at k = 1 each cost one more FOO call.
        const std::int64_t extra = k == 1 && mode == Eta1Mode::line_search
                                       ? solver.line_search_trials() - 1
                                       : 0;
        if (r.foo_calls - prev.foo_calls != 1 + extra) ++bad;
        if (r.lmo_calls - prev.lmo_calls != r.inner_iters_used + 1) ++bad;
        ++iterations;
        prev = r;
      }
    }
  }
  // Restarted scheme: N S iterations plus per-stage setup and line-search extras.
  int restart_bad = 0;
  double worst_extras = 0.0;
  if (restart_runs().empty()) restart_halving();
  for (const auto& run : restart_runs()) {
    std::int64_t total = 0;
    std::int64_t extras = 0;
    for (const StageRecord& s : run.result.stages) {
      const std::int64_t e = s.foo_calls - run.result.horizon;
      if (e != 1 + s.line_search_trials) ++restart_bad;
      if (e > 200) ++restart_bad;
      worst_extras = std::max(worst_extras, static_cast<double>(e));
      extras += e;
      total += s.foo_calls;
    }
    const std::int64_t stages = static_cast<std::int64_t>(run.result.stages.size());
    if (run.result.counters.foo_calls != run.result.horizon * stages + extras) ++restart_bad;
    if (total != run.result.counters.foo_calls) ++restart_bad;
  }
  return {bad == 0 && restart_bad == 0,
          fmt("%.0f outer iterations checked, %.0f mismatches; restart totals %.0f mismatches, "
              "max extras per stage %.0f",
              iterations, bad, restart_bad, worst_extras)};
}

std::vector<DenseVector> vertices(const FeasibleSet& set) {
  const std::size_t n = set.dimension();
  std::vector<DenseVector> out;
  if (set.kind() == SetKind::simplex) {
    out.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(DenseVector::unit(n, i));
    return out;
  }
  const std::size_t k = set.sparsity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    for (unsigned signs = 0; signs < (1u << k); ++signs) {
      DenseVector v(n);
      unsigned bit = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) v[i] = ((signs >> bit++) & 1u) ? -set.kappa() : set.kappa();
      }
      out.push_back(v);
    }
  }
  return out;
}

Outcome lmo_exactness() {
  TestRng rng(1007);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet::simplex(3),        FeasibleSet::simplex(6),        FeasibleSet::ksparse(4, 2, 1.0),
      FeasibleSet::ksparse(6, 3, 0.7), FeasibleSet::ksparse(6, 1, 2.0), FeasibleSet::ksparse(6, 6, 1.0)};
  int checked = 0;
  int mismatches = 0;
  for (const auto& set : sets) {
    const auto vs = vertices(set);
    for (int t = 0; t < 200; ++t) {
      const DenseVector c = rng.gaussian(set.dimension());
      double best = kInf;
      for (const auto& v : vs) best = std::min(best, dot(c, v));
      OracleCounters counters;
      if (dot(c, set.lmo(c, counters)) != best) ++mismatches;
      ++checked;
    }
  }
  return {mismatches == 0, fmt("%.0f directions over 6 sets, %.0f mismatches", checked, mismatches)};
}

Outcome gradient_correctness() {
  TestRng rng(1008);
  const std::size_t m = 25;
  const std::size_t n = 8;
  const Matrix a = rng.gaussian_matrix(m, n);
  const DenseVector y = rng.gaussian(m);
  DenseVector labels(m);
  for (double& v : labels) v = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const std::vector<Objective> objs = {Objective::least_squares(a, y), Objective::logistic(a, labels),
                                       Objective::lp_loss(a, y, 1.5), Objective::lp_loss(a, y, 3.0)};
  double worst = 0.0;
  int points = 0;
  for (const auto& obj : objs) {
    int done = 0;
    while (done < 20) {
      const DenseVector x = rng.gaussian(n);
      if (obj.kind() == ObjectiveKind::lp_loss) {
        const DenseVector r = axpy_combine(1.0, a.multiply(x), -1.0, y);
        if (std::any_of(r.begin(), r.end(), [](double v) { return std::abs(v) < 0.1; })) continue;
      }
      OracleCounters c;
      const DenseVector g = obj.gradient(x, c);
      DenseVector fd(n);
      for (std::size_t i = 0; i < n; ++i) {
        DenseVector hi = x;
        DenseVector lo = x;
        hi[i] += 1e-6;
        lo[i] -= 1e-6;
        fd[i] = (obj.value(hi) - obj.value(lo)) / 2e-6;
      }
      worst = std::max(worst, distance(g, fd) / std::max(1e-12, norm2(fd)));
      ++done;
      ++points;
    }
  }
  return {worst <= 1e-5, fmt("%.0f points over 4 objectives, max relative error %.3g", points, worst)};
}

Outcome desk_scale_comparison() {
  Stopwatch clock;
  int wins = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Objective obj = lsq_of(generate_synthetic({1000, 200, seed, SyntheticKind::simplex_lsq}));
    const FeasibleSet set = FeasibleSet::simplex(200);
    ScheduleConfig cfg;
    cfg.variant = ScheduleVariant::cor3_alpha;
    cfg.alpha = 0.5;
    cfg.max_outer = 2000;
    cfg.outer_stop_gap = 0.0;
    const RunResult ad = run_adcgs(obj, set, cfg, set.default_start());
    BaselineConfig bcfg;
    bcfg.algorithm = BaselineAlgorithm::cg_open;
    bcfg.max_iter = 2000;
    bcfg.stop_gap = 0.0;
    const RunResult cg = run_cg_open(obj, set, bcfg, set.default_start());
    // f* = 0 for the planted instance.
    const double ad_foo = foo_to_reach(ad.trace, 0.0, 1e-8);
    const double cg_foo = foo_to_reach(cg.trace, 0.0, 1e-4);
    const bool win = ad_foo < kInf && ad_foo <= cg_foo;
    if (win) ++wins;
    per_seed << " s" << seed << ":" << (ad_foo < kInf ? std::to_string(static_cast<long>(ad_foo)) : "inf")
             << "/" << (cg_foo < kInf ? std::to_string(static_cast<long>(cg_foo)) : "inf");
  }
  const double secs = clock.seconds();
  return {wins == 5 && secs < 600.0,
          fmt("%.0f/5 seeds where AdCGS(alpha=0.5) reaches 1e-8 within cg-open's FOO budget for "
              "1e-4; %.1f s;",
              wins, secs) +
              " FOO adcgs/cg-open" + per_seed.str()};
}

double least_squares_norm(const Dataset& data) {
  const std::vector<double> dense = data.A.to_dense();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      a(dense.data(), static_cast<Eigen::Index>(data.A.rows()),
        static_cast<Eigen::Index>(data.A.cols()));
  const Eigen::Map<const Eigen::VectorXd> b(data.b.data(), static_cast<Eigen::Index>(data.b.size()));
  return a.colPivHouseholderQr().solve(b).norm();
}

Outcome no_global_smoothness() {
  int wins = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SyntheticInstance inst = generate_synthetic({500, 12, seed, SyntheticKind::lp_regression});
    const Objective obj = Objective::lp_loss(inst.data.A, inst.data.b, 1.5);
    // Radius of the unconstrained least-squares solution; the run starts at zero.
    const FeasibleSet set = FeasibleSet::l2_ball(12, least_squares_norm(inst.data));
    ScheduleConfig cfg;
    cfg.variant = ScheduleVariant::cor3_alpha;
    cfg.alpha = 1.0;
    cfg.max_outer = 5000;
    cfg.outer_stop_gap = 0.0;
    const RunResult ad = run_adcgs(obj, set, cfg, set.default_start());
    BaselineConfig bcfg;
    bcfg.algorithm = BaselineAlgorithm::cgs;
    bcfg.max_iter = 5000;
    bcfg.stop_gap = 0.0;
    const RunResult cgs = run_cgs(obj, set, bcfg, set.default_start());
    const ReferenceSolution ref = reference_solution(obj, set);
    double f_ref = ref.f_value;
    for (const auto& r : ad.trace) f_ref = std::min(f_ref, r.f_value);
    for (const auto& r : cgs.trace) f_ref = std::min(f_ref, r.f_value);
    double ad_best = kInf;
    for (const auto& r : ad.trace) ad_best = std::min(ad_best, r.f_value - f_ref);
    double cgs_best = kInf;
    for (const auto& r : cgs.trace) cgs_best = std::min(cgs_best, r.f_value - f_ref);
    const bool win = ad_best <= 1e-6 && cgs_best > 1e-4 && cgs.flags.no_global_L;
    if (win) ++wins;
    char buf[128];
    std::snprintf(buf, sizeof buf, " s%llu: adcgs %.2g, cgs %.2g;",
                  static_cast<unsigned long long>(seed), ad_best, cgs_best);
    per_seed << buf;
  }
  return {wins >= 2, fmt("%.0f/3 seeds directional; best primal gaps:", wins) + per_seed.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"inner CG reaches its tolerance within the iteration bound", inner_cg_complexity},
      {"cor1 stepsize floor", cor1_stepsize_floor},
      {"certified bound dominates the primal gap", certified_bound_dominance},
      {"cor3 tau and stepsize bounds", cor3_schedule_bounds},
      {"restart halves the optimality gap per stage", restart_halving},
      {"oracle accounting", oracle_accounting},
      {"LMO matches vertex enumeration exactly", lmo_exactness},
      {"gradients match central finite differences", gradient_correctness},
      {"desk-scale comparison against open-loop CG", desk_scale_comparison},
      {"behavior without global smoothness", no_global_smoothness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

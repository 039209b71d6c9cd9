#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "adcgs/core.hpp"
#include "adcgs/feasible_set.hpp"
#include "adcgs/harness.hpp"
#include "adcgs/inner_cg.hpp"
#include "adcgs/objective.hpp"
#include "adcgs/schedule.hpp"

namespace adcgs {

/// Running local smoothness estimates: the latest L_k, the running maximum
/// L_hat_k = max{1/(4(1-beta)eta_1), max_i L_i} and the running minimum.
struct LipschitzEstimate {
  double L = 0.0;
  double L_hat = 0.0;
  double L_lower = std::numeric_limits<double>::infinity();
};

/// Accumulators for the a-posteriori bound
///   f(x_k) - f* <= (E + S_k) / ((tau_k + 1) eta_{k+1}),
/// with the unknown initial distance replaced by the set diameter.
struct BoundTracker {
  double E_term = 0.0;
  double S = 0.0;        // sum_{i<=k} eta_{i+1} (delta_{i+1} + delta_i)
  double sum_eta = 0.0;  // sum_{i=2}^{k+1} eta_i
  double R1_surrogate = 0.0;
};

struct SolverState {
  std::int64_t k = 0;
  DenseVector x, y, z;
  Evaluation eval;  // at x_k
  double tau = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double eta_next = 0.0;
  double delta = 0.0;
  LipschitzEstimate lip;
  BoundTracker bound;
  double eta1 = 0.0;
  double L0 = 0.0;
  std::int64_t inner_iters = 0;
  bool hit_cap = false;
};

enum class SubproblemMode {
  inner_cg,          // inexact, LMO-based
  exact_projection,  // z_k = proj(y_{k-1} - eta_k g_{k-1}); delta treated as 0
};

struct Eta1Init {
  double eta1 = 0.0;
  double L0 = 0.0;
  DenseVector z_minus1;
  bool fallback = false;  // L0 vanished and was replaced by 1
};

/// Initial curvature from a feasible perturbation of z0 towards an LMO
/// vertex, and eta_1 = c / (4 (1 - beta) L0). One FOO and at least one LMO
/// call.
Eta1Init init_eta1(const Objective& obj, const FeasibleSet& set, const Evaluation& z0,
                   double c, double beta, OracleCounters& counters);

struct LineSearchResult {
  Evaluation z1;
  double eta1 = 0.0;
  double L1 = 0.0;
  int trials = 0;  // j + 1
  std::int64_t inner_iters = 0;
  bool hit_cap = false;
};

/// Geometric decrease of eta_{1,j} = 1/(4(1-beta) L0 gamma^j) until
/// eta_{1,j} <= 2/(5 L_{1,j}). Throws LineSearchFailure after 200 trials.
LineSearchResult first_iteration_line_search(const Objective& obj, const FeasibleSet& set,
                                             const Evaluation& z0, double beta,
                                             double delta1, double L0, double gamma,
                                             std::int64_t max_inner,
                                             OracleCounters& counters);

/// (E + S_k) / ((tau_k + 1) eta_{k+1}).
double certified_bound(const BoundTracker& bound, double tau_k, double eta_next);

using SubproblemObserver = std::function<void(const SubproblemSpec&)>;

/// The AdCGS outer loop. One instance is one run; state is advanced by step().
class AdcgsSolver : public IterativeMethod {
 public:
  AdcgsSolver(const Objective& obj, const FeasibleSet& set, ScheduleConfig cfg,
              DenseVector x0, SubproblemMode mode = SubproblemMode::inner_cg);

  TraceRecord initial_record() override;
  TraceRecord step() override;
  const DenseVector& current() const override { return state_.x; }
  const OracleCounters& counters() const override { return counters_; }
  const RunFlags& flags() const override { return flags_; }
  std::optional<DenseVector> average() const override;

  const SolverState& state() const { return state_; }
  const ScheduleHistory& history() const { return hist_; }
  const ScheduleConfig& config() const { return cfg_; }
  double diameter() const { return diameter_; }
  /// Line-search trials used at k = 1 (0 when eta_1 came from L0).
  int line_search_trials() const { return ls_trials_; }
  /// Called with every subproblem before it is solved.
  void set_subproblem_observer(SubproblemObserver observer) {
    observer_ = std::move(observer);
  }

 private:
  Evaluation solve_first_iteration(const Evaluation& prev);
  DenseVector solve_z(const DenseVector& g, const DenseVector& center, double eta,
                      double delta);
  void audit_schedule(std::int64_t k) const;
  void check_feasible(const DenseVector& v, const char* what) const;
  TraceRecord make_record();

  const Objective& obj_;
  const FeasibleSet& set_;
  ScheduleConfig cfg_;
  SubproblemMode mode_;
  double diameter_;
  SolverState state_;
  ScheduleHistory hist_;
  OracleCounters counters_;
  RunFlags flags_;
  SubproblemObserver observer_;
  bool initialized_ = false;
  int ls_trials_ = 0;
  DenseVector z0_;
  DenseVector x_prev_;        // x_{k-1}
  DenseVector weighted_sum_;  // sum_{i<=k-1} w_i x_i
};

/// Runs AdCGS to the configured stopping rule (fw_gap <= outer_stop_gap or
/// max_outer iterations; cor2 additionally stops at N).
RunResult run_adcgs(const Objective& obj, const FeasibleSet& set, const ScheduleConfig& cfg,
                    const DenseVector& x0, const RunOptions& options = {},
                    SubproblemMode mode = SubproblemMode::inner_cg);

}  // namespace adcgs

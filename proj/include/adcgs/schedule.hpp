#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adcgs {

/// Largest admissible momentum weight beta, 1 - sqrt(6)/3.
inline const double kMaxBeta = 1.0 - std::sqrt(6.0) / 3.0;

enum class ScheduleVariant {
  cor1,          // tau_k = k/2, growing stepsizes, delta_k = D^2/(k^{1+theta}(k+1))
  cor2_fixed_N,  // cor1 stepsizes, fixed horizon N, delta_k = D^2/(N k)
  cor3_alpha,    // alpha-parameterized tau recursion, larger stepsizes
};

enum class Eta1Mode { from_L0, line_search };

ScheduleVariant parse_schedule_variant(std::string_view name);
std::string to_string(ScheduleVariant v);

struct ScheduleConfig {
  ScheduleVariant variant = ScheduleVariant::cor3_alpha;
  double alpha = 1.0;
  double beta = kMaxBeta;
  double theta = 1e-3;
  Eta1Mode eta1_mode = Eta1Mode::from_L0;
  /// eta_1 = c / (4 (1 - beta) L_0). Unset means c = 8 (1 - beta) / 5,
  /// i.e. eta_1 = 2 / (5 L_0).
  std::optional<double> eta1_scale;
  /// Horizon for cor2_fixed_N.
  std::int64_t N = 100;
  /// Growth factor of the first-iteration line search.
  double gamma = 2.0;
  std::int64_t max_inner = 50;
  double outer_stop_gap = 1e-10;
  std::int64_t max_outer = 10000;
  /// cor2 only: replaces D^2 in delta_k = D^2 / (N k). Used by the restart
  /// scheme, where the tolerance shrinks with the stage index.
  std::optional<double> cor2_numerator;
  /// Upper bound on the first stepsize tried by the line search.
  std::optional<double> eta1_cap;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  double resolved_eta1_scale() const;
};

/// Per-iteration schedule values, indexed by outer iteration k (entry 0 is
/// unused and holds 0).
struct ScheduleHistory {
  std::vector<double> eta{0.0};
  std::vector<double> tau{0.0};
  std::vector<double> lip{0.0};
  std::vector<double> delta{0.0};
};

/// eta_k for k >= 2 from the histories eta_1..eta_{k-1}, tau_1..tau_{k-1},
/// L_1..L_{k-1}. a/0 = +infinity when an estimate L vanishes.
double schedule_next_eta(ScheduleVariant variant, std::int64_t k,
                         const std::vector<double>& eta_hist,
                         const std::vector<double>& tau_hist,
                         const std::vector<double>& lip_hist, double beta);

/// tau_k. tau_1 = 0 for every variant; cor3 has tau_2 = 1 and
/// tau_k = tau_{k-1} + alpha/2 + 2 (1 - alpha) eta_k L_{k-1} / tau_{k-1}.
double schedule_tau(ScheduleVariant variant, std::int64_t k, double tau_prev,
                    double alpha, double eta_k, double lip_prev);

/// delta_k: D^2/(k^{1+theta}(k+1)) for cor1/cor3, numerator/(N k) for cor2.
double schedule_delta(ScheduleVariant variant, std::int64_t k, double diameter,
                      double theta, std::int64_t N,
                      std::optional<double> cor2_numerator = std::nullopt);

/// Lower bound on eta_k implied by the schedule:
/// cor1/cor2: k / (12 L_hat_{k-1}); cor3: (3 + alpha (k - 3)) / (12 L_hat_{k-1}).
double eta_floor(ScheduleVariant variant, std::int64_t k, double alpha,
                 double lhat_prev);

}  // namespace adcgs

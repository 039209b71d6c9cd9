#include "adcgs/schedule.hpp"

#include <algorithm>
#include <limits>

#include "adcgs/errors.hpp"

namespace adcgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a / L with a / 0 = +infinity.
double over_lip(double a, double lip) { return lip > 0.0 ? a / lip : kInf; }

double at(const std::vector<double>& hist, std::int64_t i, const char* name) {
  if (i < 1 || static_cast<std::size_t>(i) >= hist.size()) {
    throw ContractViolation(std::string("schedule: missing history entry for ") + name +
                            "_" + std::to_string(i));
  }
  return hist[static_cast<std::size_t>(i)];
}

}  // namespace

ScheduleVariant parse_schedule_variant(std::string_view name) {
  if (name == "cor1") return ScheduleVariant::cor1;
  if (name == "cor2") return ScheduleVariant::cor2_fixed_N;
  if (name == "cor3") return ScheduleVariant::cor3_alpha;
  throw ConfigError("unknown schedule '" + std::string(name) + "' (cor1|cor2|cor3)");
}

std::string to_string(ScheduleVariant v) {
  switch (v) {
    case ScheduleVariant::cor1:
      return "cor1";
    case ScheduleVariant::cor2_fixed_N:
      return "cor2";
    case ScheduleVariant::cor3_alpha:
      return "cor3";
  }
  return "?";
}

void ScheduleConfig::validate() const {
  if (!(beta > 0.0) || beta > kMaxBeta + 1e-15) {
    throw ConfigError("beta must lie in (0, 1 - sqrt(6)/3]");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  if (eta1_scale && !(*eta1_scale > 0.0)) throw ConfigError("eta1 scale must be positive");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!(gamma > 1.0)) throw ConfigError("line-search growth gamma must exceed 1");
  if (max_inner < 1) throw ConfigError("max_inner must be >= 1");
  if (!(outer_stop_gap >= 0.0)) throw ConfigError("stop gap must be nonnegative");
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (cor2_numerator && !(*cor2_numerator > 0.0)) {
    throw ConfigError("cor2 numerator must be positive");
  }
  if (eta1_cap && !(*eta1_cap > 0.0)) throw ConfigError("eta1 cap must be positive");
}

double ScheduleConfig::resolved_eta1_scale() const {
  return eta1_scale ? *eta1_scale : 8.0 * (1.0 - beta) / 5.0;
}

double schedule_next_eta(ScheduleVariant variant, std::int64_t k,
                         const std::vector<double>& eta_hist,
                         const std::vector<double>& tau_hist,
                         const std::vector<double>& lip_hist, double beta) {
  if (k < 2) throw ContractViolation("schedule_next_eta: k must be >= 2");
  const double eta_prev = at(eta_hist, k - 1, "eta");
  const double lip_prev = at(lip_hist, k - 1, "L");
  if (k == 2) return std::min((1.0 - beta) * eta_prev, over_lip(0.25, lip_prev));

  if (variant == ScheduleVariant::cor3_alpha) {
    const double tau_prev = at(tau_hist, k - 1, "tau");
    const double tau_prev2 = k - 2 >= 1 ? at(tau_hist, k - 2, "tau") : 0.0;
    return std::min({4.0 / 3.0 * eta_prev, (tau_prev2 + 1.0) / tau_prev * eta_prev,
                     over_lip(tau_prev / 4.0, lip_prev)});
  }
  if (k == 3) return std::min(eta_prev, over_lip(0.25, lip_prev));
  const double kd = static_cast<double>(k);
  return std::min(kd / (kd - 1.0) * eta_prev, over_lip((kd - 1.0) / 8.0, lip_prev));
}

double schedule_tau(ScheduleVariant variant, std::int64_t k, double tau_prev,
                    double alpha, double eta_k, double lip_prev) {
  if (k < 1) throw ContractViolation("schedule_tau: k must be >= 1");
  if (k == 1) return 0.0;
  if (variant != ScheduleVariant::cor3_alpha) return static_cast<double>(k) / 2.0;
  if (k == 2) return 1.0;
  const double curvature_term =
      (1.0 - alpha) == 0.0 ? 0.0 : 2.0 * (1.0 - alpha) * eta_k * lip_prev / tau_prev;
  return tau_prev + alpha / 2.0 + curvature_term;
}

double schedule_delta(ScheduleVariant variant, std::int64_t k, double diameter,
                      double theta, std::int64_t N,
                      std::optional<double> cor2_numerator) {
  if (k < 1) throw ContractViolation("schedule_delta: k must be >= 1");
  const double kd = static_cast<double>(k);
  if (variant == ScheduleVariant::cor2_fixed_N) {
    const double num = cor2_numerator ? *cor2_numerator : diameter * diameter;
    return num / (static_cast<double>(N) * kd);
  }
  return diameter * diameter / (std::pow(kd, 1.0 + theta) * (kd + 1.0));
}

double eta_floor(ScheduleVariant variant, std::int64_t k, double alpha,
                 double lhat_prev) {
  const double kd = static_cast<double>(k);
  const double num =
      variant == ScheduleVariant::cor3_alpha ? 3.0 + alpha * (kd - 3.0) : kd;
  return num / (12.0 * lhat_prev);
}

}  // namespace adcgs

#include <cmath>

#include <gtest/gtest.h>

#include "adcgs/errors.hpp"
#include "adcgs/schedule.hpp"

namespace adcgs {
namespace {

TEST(Eta, SecondStepTakesTheSmallerBranch) {
  const double beta = kMaxBeta;
  // 1/(4 L1) = 0.0025 < (1 - beta) eta1.
  EXPECT_DOUBLE_EQ(
      schedule_next_eta(ScheduleVariant::cor1, 2, {0, 1.0}, {0, 0}, {0, 100.0}, beta), 0.0025);
  EXPECT_DOUBLE_EQ(
      schedule_next_eta(ScheduleVariant::cor1, 2, {0, 1.0}, {0, 0}, {0, 0.01}, beta), 1.0 - beta);
}

TEST(Eta, Cor1Examples) {
  // k = 5, eta4 = 0.1, L4 = 2: min{5/4 * 0.1, 4/16} = 0.125.
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor1, 5, {0, 1, 1, 1, 0.1},
                                     {0, 0, 1, 1.5, 2}, {0, 1, 1, 1, 2.0}, kMaxBeta),
                   0.125);
  // k = 3 uses min{eta2, 1/(4 L2)}.
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor1, 3, {0, 1, 0.2}, {0, 0, 1},
                                     {0, 1, 2.0}, kMaxBeta),
                   0.125);
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor2_fixed_N, 3, {0, 1, 0.1}, {0, 0, 1},
                                     {0, 1, 2.0}, kMaxBeta),
                   0.1);
}

TEST(Eta, ZeroCurvatureMeansNoCurvatureCap) {
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor1, 6, {0, 1, 1, 1, 1, 0.3},
                                     {0, 0, 1, 1.5, 2, 2.5}, {0, 1, 1, 1, 1, 0.0}, kMaxBeta),
                   0.3 * 6.0 / 5.0);
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor1, 2, {0, 0.5}, {0, 0}, {0, 0.0},
                                     kMaxBeta),
                   (1.0 - kMaxBeta) * 0.5);
}

TEST(Eta, Cor3ThreeWayMinimum) {
  // tau1 = 0, tau2 = 1; eta3 = min{4/3 eta2, (tau1+1)/tau2 eta2, tau2/(4 L2)}.
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor3_alpha, 3, {0, 1, 0.3}, {0, 0, 1},
                                     {0, 1, 0.5}, kMaxBeta),
                   0.3);
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor3_alpha, 3, {0, 1, 0.3}, {0, 0, 1},
                                     {0, 1, 5.0}, kMaxBeta),
                   0.05);
  // k = 4: (tau2 + 1)/tau3 = 2/1.5 = 4/3 ties with the growth cap.
  EXPECT_DOUBLE_EQ(schedule_next_eta(ScheduleVariant::cor3_alpha, 4, {0, 1, 0.3, 0.3},
                                     {0, 0, 1, 1.5}, {0, 1, 1, 0.0}, kMaxBeta),
                   0.4);
}

TEST(Eta, RejectsShortHistories) {
  EXPECT_THROW(schedule_next_eta(ScheduleVariant::cor1, 1, {0}, {0}, {0}, kMaxBeta),
               ContractViolation);
  EXPECT_THROW(schedule_next_eta(ScheduleVariant::cor1, 4, {0, 1}, {0, 0}, {0, 1}, kMaxBeta),
               ContractViolation);
}

TEST(Tau, Examples) {
  EXPECT_EQ(schedule_tau(ScheduleVariant::cor1, 1, 0, 1, 0.1, 1), 0.0);
  EXPECT_EQ(schedule_tau(ScheduleVariant::cor1, 7, 3.0, 1, 0.1, 1), 3.5);
  EXPECT_EQ(schedule_tau(ScheduleVariant::cor3_alpha, 2, 0.0, 0.3, 0.1, 1), 1.0);
  // alpha = 0 with the binding stepsize eta3 = tau2/(4 L2): tau3 = 1 + 2 * 1/4.
  const double lip = 2.0;
  EXPECT_DOUBLE_EQ(schedule_tau(ScheduleVariant::cor3_alpha, 3, 1.0, 0.0, 1.0 / (4 * lip), lip),
                   1.5);
  // Zero curvature adds only alpha / 2.
  EXPECT_DOUBLE_EQ(schedule_tau(ScheduleVariant::cor3_alpha, 3, 1.0, 0.4, 0.7, 0.0), 1.2);
}

TEST(Tau, AlphaOneReproducesHalfK) {
  double tau = 0.0;
  for (int k = 1; k <= 200; ++k) {
    tau = schedule_tau(ScheduleVariant::cor3_alpha, k, tau, 1.0, 0.37, 12.0);
    EXPECT_EQ(tau, schedule_tau(ScheduleVariant::cor1, k, 0.0, 1.0, 0.0, 0.0));
  }
}

TEST(Delta, Examples) {
  EXPECT_EQ(schedule_delta(ScheduleVariant::cor1, 1, std::sqrt(2.0), 1e-3, 1),
            std::sqrt(2.0) * std::sqrt(2.0) / 2.0);
  EXPECT_DOUBLE_EQ(schedule_delta(ScheduleVariant::cor2_fixed_N, 10, 1.0, 1e-3, 100), 1e-3);
  EXPECT_DOUBLE_EQ(schedule_delta(ScheduleVariant::cor2_fixed_N, 4, 1.0, 1e-3, 10, 8.0), 0.2);
  EXPECT_DOUBLE_EQ(schedule_delta(ScheduleVariant::cor3_alpha, 3, 2.0, 1.0, 1),
                   4.0 / (9.0 * 4.0));
  EXPECT_THROW(schedule_delta(ScheduleVariant::cor1, 0, 1.0, 1e-3, 1), ContractViolation);
}

TEST(Delta, QuartersWhenIterationDoubles) {
  const double k = 1e5;
  const double ratio = schedule_delta(ScheduleVariant::cor1, 2 * k, 1.0, 1e-9, 1) /
                       schedule_delta(ScheduleVariant::cor1, k, 1.0, 1e-9, 1);
  EXPECT_NEAR(ratio, 0.25, 1e-5);
}

TEST(Floor, Formulas) {
  EXPECT_DOUBLE_EQ(eta_floor(ScheduleVariant::cor1, 6, 1.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(eta_floor(ScheduleVariant::cor3_alpha, 5, 0.5, 1.0), 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(eta_floor(ScheduleVariant::cor3_alpha, 2, 0.0, 1.0), 0.25);
}

TEST(Config, DefaultsAndValidation) {
  ScheduleConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.beta, 1.0 - std::sqrt(6.0) / 3.0);
  EXPECT_DOUBLE_EQ(cfg.theta, 1e-3);
  EXPECT_EQ(cfg.max_inner, 50);
  EXPECT_DOUBLE_EQ(cfg.outer_stop_gap, 1e-10);
  // Default scale turns c / (4 (1 - beta) L0) into 2 / (5 L0).
  EXPECT_DOUBLE_EQ(cfg.resolved_eta1_scale() / (4.0 * (1.0 - cfg.beta)), 2.0 / 5.0);

  for (auto mutate : std::vector<void (*)(ScheduleConfig&)>{
           [](ScheduleConfig& c) { c.beta = 0.2; },
           [](ScheduleConfig& c) { c.beta = 0.0; },
           [](ScheduleConfig& c) { c.alpha = 1.5; },
           [](ScheduleConfig& c) { c.theta = 0.0; },
           [](ScheduleConfig& c) { c.gamma = 1.0; },
           [](ScheduleConfig& c) { c.max_inner = 0; },
           [](ScheduleConfig& c) { c.N = 0; },
           [](ScheduleConfig& c) { c.eta1_scale = -1.0; }}) {
    ScheduleConfig bad;
    mutate(bad);
    EXPECT_THROW(bad.validate(), ConfigError);
  }
}

TEST(Variant, ParseAndPrint) {
  for (auto v : {ScheduleVariant::cor1, ScheduleVariant::cor2_fixed_N,
                 ScheduleVariant::cor3_alpha}) {
    EXPECT_EQ(parse_schedule_variant(to_string(v)), v);
  }
  EXPECT_THROW(parse_schedule_variant("cor4"), ConfigError);
}

}  // namespace
}  // namespace adcgs

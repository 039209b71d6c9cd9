#include <cmath>

#include <gtest/gtest.h>

#include "adcgs/errors.hpp"
#include "adcgs/inner_cg.hpp"
#include "support.hpp"

namespace adcgs {
namespace {

using testing::TestRng;

// Frank-Wolfe gap of the subproblem at z, recomputed independently.
double subproblem_gap(const FeasibleSet& set, const DenseVector& g, const DenseVector& u,
                      double eta, const DenseVector& z) {
  DenseVector dir(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) dir[i] = g[i] + (z[i] - u[i]) / eta;
  OracleCounters scratch;
  return dot(dir, z) - dot(dir, set.lmo(dir, scratch));
}

TEST(InnerCg, ZeroGradientReturnsCenter) {
  const FeasibleSet s = FeasibleSet::simplex(4);
  const DenseVector g(4);
  const DenseVector u{0.25, 0.25, 0.25, 0.25};
  OracleCounters c;
  const InnerResult r = solve_subproblem(s, {g, u, 1.0, 1e-6}, c);
  EXPECT_EQ(r.z, u);
  EXPECT_EQ(r.iters, 1);
  EXPECT_EQ(c.lmo_calls, 1);
  EXPECT_FALSE(r.hit_cap);
}

TEST(InnerCg, BallInteriorExample) {
  const FeasibleSet b = FeasibleSet::l2_ball(2, 1.0);
  const DenseVector g{1.0, 0.0};
  const DenseVector u(2);
  OracleCounters c;
  const InnerResult r = solve_subproblem(b, {g, u, 1.0, 1e-6, 1000000}, c);
  EXPECT_LE(r.final_gap, 1e-6);
  EXPECT_LE(distance(r.z, DenseVector{-1.0, 0.0}), 1e-3);
}

TEST(InnerCg, SimplexVertexExample) {
  const FeasibleSet s = FeasibleSet::simplex(2);
  const DenseVector g{-1.0, 0.0};
  const DenseVector u(2);
  OracleCounters c;
  const InnerResult r = solve_subproblem(s, {g, u, 10.0, 1e-8, 1000000}, c);
  EXPECT_LE(distance(r.z, DenseVector{1.0, 0.0}), 1e-4);
}

TEST(InnerCg, ReachesToleranceWithinTheoreticalCap) {
  TestRng rng(31);
  const std::vector<FeasibleSet> sets = {FeasibleSet::simplex(10), FeasibleSet::l2_ball(10, 1.0),
                                         FeasibleSet::ksparse(10, 3, 1.0)};
  for (const auto& set : sets) {
    for (int t = 0; t < 20; ++t) {
      const DenseVector g = rng.gaussian(10);
      const DenseVector u = rng.feasible_point(set);
      const double eta = rng.log_uniform(0.1, 10.0);
      const double delta = rng.log_uniform(1e-3, 1e-1);
      const std::int64_t cap = inner_iteration_cap(set.diameter(), eta, delta);
      OracleCounters c;
      const InnerResult r = solve_subproblem(set, {g, u, eta, delta, cap}, c);
      EXPECT_FALSE(r.hit_cap) << set.describe();
      EXPECT_LE(r.final_gap, delta);
      EXPECT_LE(r.iters, cap);
      EXPECT_EQ(c.lmo_calls, r.iters);
      EXPECT_TRUE(set.contains(r.z));
      EXPECT_LE(subproblem_gap(set, g, u, eta, r.z), delta * (1.0 + 1e-9) + 1e-14);
    }
  }
}

TEST(InnerCg, CapStopsEarlyAndReportsIt) {
  const FeasibleSet s = FeasibleSet::simplex(5);
  const DenseVector g{0.1, -0.2, 0.05, 0.0, 0.3};
  const DenseVector u = s.default_start();
  OracleCounters c;
  const InnerResult r = solve_subproblem(s, {g, u, 1.0, 1e-12, 3}, c);
  EXPECT_TRUE(r.hit_cap);
  EXPECT_EQ(r.iters, 3);
  EXPECT_EQ(c.lmo_calls, 3);
  EXPECT_GT(r.final_gap, 1e-12);
}

TEST(InnerCg, DecreasesSubproblemObjective) {
  TestRng rng(32);
  const FeasibleSet s = FeasibleSet::simplex(8);
  const DenseVector g = rng.gaussian(8);
  const DenseVector u = rng.feasible_point(s);
  OracleCounters c;
  const double delta = 1e-5;
  const InnerResult r =
      solve_subproblem(s, {g, u, 0.5, delta, inner_iteration_cap(s.diameter(), 0.5, delta)}, c);
  ASSERT_FALSE(r.hit_cap);
  EXPECT_LE(subproblem_value(g, u, 0.5, r.z), subproblem_value(g, u, 0.5, u));
  // The subproblem is 1/eta strongly convex, so its value gap bounds the distance
  // to the exact minimizer, here the projection of u - eta g.
  const DenseVector exact = s.project(axpy_combine(1.0, u, -0.5, g), c);
  EXPECT_LE(squared_distance(r.z, exact), 2.0 * 0.5 * delta * 1.0001);
}

TEST(InnerCg, ValidatesInputs) {
  const FeasibleSet s = FeasibleSet::simplex(2);
  const DenseVector g(2);
  const DenseVector u{0.5, 0.5};
  const DenseVector outside{1.0, 1.0};
  OracleCounters c;
  EXPECT_THROW(solve_subproblem(s, {g, u, 0.0, 1e-3}, c), ContractViolation);
  EXPECT_THROW(solve_subproblem(s, {g, u, 1.0, 0.0}, c), ContractViolation);
  EXPECT_THROW(solve_subproblem(s, {g, outside, 1.0, 1e-3}, c), ContractViolation);
  EXPECT_THROW(solve_subproblem(s, {DenseVector(3), u, 1.0, 1e-3}, c), ContractViolation);
}

TEST(InnerCap, Formula) {
  // D = sqrt(2), eta = 1, delta = 1e-4: 6 * 2 / 1e-4 = 120000.
  EXPECT_EQ(inner_iteration_cap(std::sqrt(2.0), 1.0, 1e-4), 120000);
  EXPECT_EQ(inner_iteration_cap(std::sqrt(2.0), 0.5, 5e-4), 48000);
  EXPECT_EQ(inner_iteration_cap(std::sqrt(2.0), 0.25, 1e-3), 48000);
  EXPECT_EQ(inner_iteration_cap(1.0, 1.0, 6.0), 1);
  EXPECT_EQ(inner_iteration_cap(2.0, 0.5, 0.1), 480);
  EXPECT_EQ(inner_iteration_cap(1.0, 7.0, 1.0), 1);
  EXPECT_THROW(inner_iteration_cap(0.0, 1.0, 1.0), ContractViolation);
}

}  // namespace
}  // namespace adcgs

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adcgs/core.hpp"
#include "adcgs/feasible_set.hpp"
#include "adcgs/matrix.hpp"

namespace adcgs::testing {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  DenseVector gaussian(std::size_t n) {
    DenseVector v(n);
    for (double& x : v) x = normal();
    return v;
  }

  Matrix gaussian_matrix(std::size_t m, std::size_t n) {
    std::vector<double> a(m * n);
    for (double& x : a) x = normal();
    return Matrix::dense(m, n, std::move(a));
  }

  /// A uniformly weighted convex combination of a few LMO vertices, which is
  /// feasible for every set kind.
  DenseVector feasible_point(const FeasibleSet& set, int vertices = 4) {
    OracleCounters scratch;
    DenseVector x(set.dimension());
    std::vector<double> w(static_cast<std::size_t>(vertices));
    double total = 0.0;
    for (double& v : w) total += (v = uniform(0.1, 1.0));
    for (int i = 0; i < vertices; ++i) {
      const DenseVector v = set.lmo(gaussian(set.dimension()), scratch);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += w[static_cast<std::size_t>(i)] / total * v[j];
    }
    return x;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adcgs::testing

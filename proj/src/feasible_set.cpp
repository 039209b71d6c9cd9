#include "adcgs/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adcgs/config_parse.hpp"
#include "adcgs/errors.hpp"

namespace adcgs {

FeasibleSet FeasibleSet::simplex(std::size_t n) {
  if (n < 1) throw ContractViolation("simplex: n must be >= 1");
  return FeasibleSet(SetKind::simplex, n);
}

FeasibleSet FeasibleSet::l2_ball(std::size_t n, double radius) {
  if (n < 1) throw ContractViolation("l2_ball: n must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ContractViolation("l2_ball: radius must be positive");
  }
  FeasibleSet s(SetKind::l2_ball, n);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::ksparse(std::size_t n, std::size_t k, double kappa) {
  if (n < 1) throw ContractViolation("ksparse: n must be >= 1");
  if (k < 1 || k > n) throw ContractViolation("ksparse: need 1 <= K <= n");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ContractViolation("ksparse: kappa must be positive");
  }
  FeasibleSet s(SetKind::ksparse_polytope, n);
  s.k_ = k;
  s.kappa_ = kappa;
  return s;
}

FeasibleSet FeasibleSet::parse(std::string_view config, std::size_t n) {
  const auto spec = parse_keyed_spec(config);
  try {
    if (spec.name == "simplex") {
      spec.require_only({});
      return simplex(n);
    }
    if (spec.name == "l2ball") {
      spec.require_only({"r"});
      return l2_ball(n, spec.get_double("r", 1.0));
    }
    if (spec.name == "ksparse") {
      spec.require_only({"K", "kappa"});
      const long k = spec.get_int("K");
      if (k < 1) throw ConfigError("ksparse: K must be >= 1");
      return ksparse(n, static_cast<std::size_t>(k), spec.get_double("kappa", 1.0));
    }
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("invalid set '") + std::string(config) +
                      "': " + e.what());
  }
  throw ConfigError("unknown set '" + std::string(config) + "'");
}

std::string FeasibleSet::describe() const {
  switch (kind_) {
    case SetKind::simplex:
      return "simplex";
    case SetKind::l2_ball:
      return "l2ball:r=" + format_double(radius_);
    case SetKind::ksparse_polytope:
      return "ksparse:K=" + std::to_string(k_) + ",kappa=" + format_double(kappa_);
  }
  return "?";
}

void FeasibleSet::check_dimension(const DenseVector& v, const char* op) const {
  if (v.size() != n_) {
    throw ContractViolation(std::string(op) + ": expected length " +
                            std::to_string(n_) + ", got " +
                            std::to_string(v.size()));
  }
}

DenseVector FeasibleSet::lmo(const DenseVector& c, OracleCounters& counters) const {
  check_dimension(c, "lmo");
  ++counters.lmo_calls;
  DenseVector v(n_);
  switch (kind_) {
    case SetKind::simplex: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n_; ++i) {
        if (c[i] < c[best]) best = i;
      }
      if (c[best] < 0.0) v[best] = 1.0;
      break;
    }
    case SetKind::l2_ball: {
      const double nc = norm2(c);
      if (nc > 0.0) {
        for (std::size_t i = 0; i < n_; ++i) v[i] = -radius_ * c[i] / nc;
      }
      break;
    }
    case SetKind::ksparse_polytope: {
      std::vector<std::size_t> idx(n_);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k_),
                        idx.end(), [&](std::size_t a, std::size_t b) {
                          const double ma = std::abs(c[a]);
                          const double mb = std::abs(c[b]);
                          return ma > mb || (ma == mb && a < b);
                        });
      for (std::size_t j = 0; j < k_; ++j) {
        const std::size_t i = idx[j];
        v[i] = c[i] < 0.0 ? kappa_ : -kappa_;
      }
      break;
    }
  }
  return v;
}

double FeasibleSet::fw_gap(const DenseVector& grad, const DenseVector& x,
                           OracleCounters& counters) const {
  check_dimension(x, "fw_gap");
  const DenseVector v = lmo(grad, counters);
  const double gx = dot(grad, x);
  const double gv = dot(grad, v);
  const double gap = gx - gv;
  if (gap >= 0.0) return gap;
  // Roundoff in the two inner products scales with their magnitude.
  const double slack = 1e-12 * std::max({1.0, std::abs(gx), std::abs(gv)});
  if (gap >= -slack) return 0.0;
  throw NumericalError("fw_gap: negative gap " + format_double(gap) +
                       " (point infeasible?)");
}

DenseVector project_capped_simplex(const DenseVector& x) {
  const std::size_t n = x.size();
  DenseVector clipped(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    clipped[i] = std::max(x[i], 0.0);
    total += clipped[i];
  }
  if (total <= 1.0) return clipped;

  // Projection onto {x >= 0, sum(x) = 1}: find theta with
  // sum(max(x_i - theta, 0)) = 1 from the sorted coordinates.
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += s[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (j + 1 == n || s[j + 1] <= t) {
      theta = t;
      break;
    }
  }
  DenseVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(x[i] - theta, 0.0);
  return out;
}

DenseVector FeasibleSet::project(const DenseVector& x, OracleCounters& counters) const {
  check_dimension(x, "project");
  switch (kind_) {
    case SetKind::simplex:
      ++counters.projection_calls;
      return project_capped_simplex(x);
    case SetKind::l2_ball: {
      ++counters.projection_calls;
      const double nx = norm2(x);
      if (nx <= radius_) return x;
      DenseVector out(n_);
      for (std::size_t i = 0; i < n_; ++i) out[i] = radius_ * x[i] / nx;
      return out;
    }
    case SetKind::ksparse_polytope:
      break;
  }
  throw UnsupportedOperation("projection unsupported for set " + describe());
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case SetKind::simplex:
      return n_ == 1 ? 1.0 : std::sqrt(2.0);
    case SetKind::l2_ball:
      return 2.0 * radius_;
    case SetKind::ksparse_polytope:
      // Centrally symmetric, so the diameter is twice the largest vertex norm.
      return 2.0 * kappa_ * std::sqrt(static_cast<double>(k_));
  }
  return 0.0;
}

bool FeasibleSet::contains(const DenseVector& x, double tol) const {
  if (x.size() != n_ || !x.all_finite()) return false;
  switch (kind_) {
    case SetKind::simplex: {
      double total = 0.0;
      for (double v : x) {
        if (v < -tol) return false;
        total += v;
      }
      return total <= 1.0 + tol;
    }
    case SetKind::l2_ball:
      return norm2(x) <= radius_ + tol;
    case SetKind::ksparse_polytope: {
      double l1 = 0.0;
      for (double v : x) {
        if (std::abs(v) > kappa_ + tol) return false;
        l1 += std::abs(v);
      }
      return l1 <= kappa_ * static_cast<double>(k_) + tol;
    }
  }
  return false;
}

DenseVector FeasibleSet::default_start() const {
  if (kind_ == SetKind::simplex) {
    return DenseVector(n_, 1.0 / static_cast<double>(n_));
  }
  return DenseVector(n_, 0.0);
}

}  // namespace adcgs

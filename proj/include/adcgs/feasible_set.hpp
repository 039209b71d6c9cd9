#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "adcgs/core.hpp"

namespace adcgs {

enum class SetKind { simplex, l2_ball, ksparse_polytope };

/// Compact convex constraint set accessed through its linear minimization
/// oracle. Three kinds are supported:
///
///   simplex           {x >= 0, sum(x) <= 1}; vertices 0, e_1, ..., e_n
///   l2_ball           {||x|| <= r}
///   ksparse_polytope  {||x||_1 <= kappa K, ||x||_inf <= kappa}; vertices are
///                     the K-sparse sign vectors scaled by kappa
///
/// Descriptors are immutable. Oracle calls are counted in caller-owned
/// OracleCounters.
class FeasibleSet {
 public:
  static FeasibleSet simplex(std::size_t n);
  static FeasibleSet l2_ball(std::size_t n, double radius);
  static FeasibleSet ksparse(std::size_t n, std::size_t k, double kappa);

  /// Parses "simplex", "l2ball:r=<float>" or "ksparse:K=<int>,kappa=<float>".
  /// A bare "l2ball" means r = 1. Throws ConfigError.
  static FeasibleSet parse(std::string_view config, std::size_t n);

  SetKind kind() const { return kind_; }
  std::size_t dimension() const { return n_; }
  double radius() const { return radius_; }
  std::size_t sparsity() const { return k_; }
  double kappa() const { return kappa_; }
  std::string describe() const;

  /// A minimizer of <c, v> over the set, deterministic tie-breaking:
  /// simplex returns the origin when min c_i >= 0 and otherwise e_i for the
  /// smallest index attaining the minimum; the ball returns the origin for
  /// c = 0; the K-sparse polytope picks the K largest |c_i| (smallest index
  /// first on ties) with sign(0) = +1.
  DenseVector lmo(const DenseVector& c, OracleCounters& counters) const;

  /// Frank-Wolfe gap <grad, x - lmo(grad)>, clamped at zero when the
  /// negative excess is only roundoff. One LMO call.
  double fw_gap(const DenseVector& grad, const DenseVector& x,
                OracleCounters& counters) const;

  bool supports_projection() const { return kind_ != SetKind::ksparse_polytope; }

  /// Euclidean projection. Throws UnsupportedOperation for the K-sparse
  /// polytope.
  DenseVector project(const DenseVector& x, OracleCounters& counters) const;

  /// Closed-form Euclidean diameter.
  double diameter() const;

  /// Membership test with absolute slack `tol`.
  bool contains(const DenseVector& x, double tol = 1e-9) const;

  /// A canonical starting point: the simplex barycenter (1/n, ..., 1/n) for
  /// the simplex, the origin otherwise.
  DenseVector default_start() const;

 private:
  FeasibleSet(SetKind kind, std::size_t n) : kind_(kind), n_(n) {}

  void check_dimension(const DenseVector& v, const char* op) const;

  SetKind kind_;
  std::size_t n_;
  double radius_ = 0.0;
  std::size_t k_ = 0;
  double kappa_ = 0.0;
};

/// Projection onto {x >= 0, sum(x) <= 1}.
DenseVector project_capped_simplex(const DenseVector& x);

}  // namespace adcgs

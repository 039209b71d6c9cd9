#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "adcgs/core.hpp"
#include "adcgs/matrix.hpp"

namespace adcgs {

enum class ObjectiveKind { least_squares, lp_loss, logistic };

/// Value, gradient and the linear predictor A x at one point. Produced by a
/// single first-order oracle call and reused for Bregman divergences and local
/// Lipschitz estimates without further oracle cost.
struct Evaluation {
  DenseVector x;
  double value = 0.0;
  DenseVector gradient;
  DenseVector linear;  // A x
};

/// First-order oracle for one of three data-fitting losses:
///
///   least_squares  1/2 ||A x - b||^2
///   lp_loss        ||A x - b||_p^p          (p > 1)
///   logistic       sum_i log(1 + exp(-b_i a_i^T x)),  b_i in {-1, +1}
class Objective {
 public:
  static Objective least_squares(Matrix a, DenseVector b);
  static Objective lp_loss(Matrix a, DenseVector b, double p);
  static Objective logistic(Matrix a, DenseVector b);

  ObjectiveKind kind() const { return kind_; }
  std::size_t dimension() const { return a_.cols(); }
  std::size_t samples() const { return a_.rows(); }
  const Matrix& matrix() const { return a_; }
  const DenseVector& target() const { return b_; }
  double exponent() const { return p_; }
  std::string describe() const;

  /// Function value only; not a first-order oracle call.
  double value(const DenseVector& x) const;
  /// Gradient; one first-order oracle call.
  DenseVector gradient(const DenseVector& x, OracleCounters& counters) const;
  /// Value, gradient and A x; one first-order oracle call.
  Evaluation evaluate(const DenseVector& x, OracleCounters& counters) const;

  /// D_f(x, y) = f(x) - f(y) - <grad f(y), x - y> from cached evaluations.
  /// The sum is formed per sample from the cached linear predictors, which
  /// avoids cancellation between two large function values.
  double bregman(const Evaluation& at_x, const Evaluation& at_y) const;
  /// Same, evaluating both points (counts one oracle call for y).
  double bregman(const DenseVector& x, const DenseVector& y,
                 OracleCounters& counters) const;

  /// Global smoothness constant when one exists: lambda_max(A^T A) for least
  /// squares, lambda_max(A^T A)/4 for logistic, 2 lambda_max(A^T A) for
  /// p = 2; absent for any other p.
  std::optional<double> global_smoothness() const;

  /// Strong convexity modulus lambda_min(A^T A) for least squares, 0 otherwise.
  double strong_convexity() const;

 private:
  Objective(ObjectiveKind kind, Matrix a, DenseVector b, double p);
  double value_from_linear(const DenseVector& ax) const;
  DenseVector residual_weights(const DenseVector& ax) const;

  ObjectiveKind kind_;
  Matrix a_;
  DenseVector b_;
  double p_ = 2.0;
};

/// Local Lipschitz estimate between consecutive iterates.
///
/// first_iter: ||g_cur - g_prev|| / ||x_cur - x_prev|| (0/0 = 0).
/// otherwise:  0 if D_f(x_prev, x_cur) = 0, else
///             ||g_cur - g_prev||^2 / (2 D_f(x_prev, x_cur)).
double local_lipschitz(const Objective& obj, const Evaluation& prev,
                       const Evaluation& cur, bool first_iter);

/// Parses "lsq", "lp:p=<float>" or "logistic" into a kind and exponent.
struct ObjectiveChoice {
  ObjectiveKind kind;
  double p = 2.0;
};
ObjectiveChoice parse_objective(std::string_view config);

Objective make_objective(const ObjectiveChoice& choice, Matrix a, DenseVector b);

}  // namespace adcgs

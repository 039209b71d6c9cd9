#include "adcgs/objective.hpp"

#include <algorithm>
#include <cmath>

#include "adcgs/config_parse.hpp"
#include "adcgs/errors.hpp"

namespace adcgs {

namespace {

constexpr double kExpClamp = 500.0;

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  t = std::clamp(t, -kExpClamp, kExpClamp);
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  t = std::clamp(t, -kExpClamp, kExpClamp);
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// softplus(tx) - softplus(ty) - sigmoid(ty) (tx - ty). For small steps this is
// the cumulant series of a Bernoulli(sigmoid(ty)) variable from the second term.
double softplus_bregman(double tx, double ty) {
  const double h = tx - ty;
  if (std::abs(h) > 1e-2) return softplus(tx) - softplus(ty) - sigmoid(ty) * h;
  const double s = sigmoid(ty);
  const double v = s * (1.0 - s);
  const double k3 = v * (1.0 - 2.0 * s);
  const double k4 = v * (1.0 - 6.0 * v);
  const double k5 = k3 * (1.0 - 12.0 * v);
  const double h2 = h * h;
  return h2 * (v / 2.0 + h * (k3 / 6.0 + h * (k4 / 24.0 + h * k5 / 120.0)));
}

// (1 + u)^p - 1 - p u without cancellation for small u.
double power_remainder(double u, double p) {
  if (std::abs(u) > 0.1) return std::pow(1.0 + u, p) - 1.0 - p * u;
  double coef = p * (p - 1.0) / 2.0;
  double upow = u * u;
  double sum = coef * upow;
  for (int j = 3; j < 80; ++j) {
    coef *= (p - j + 1.0) / j;
    upow *= u;
    const double term = coef * upow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// |rx|^p - |ry|^p - p |ry|^(p-1) sign(ry) (rx - ry).
double power_bregman(double rx, double ry, double p) {
  if (ry != 0.0 && sign0(rx) == sign0(ry)) {
    const double a = std::abs(ry);
    return std::pow(a, p) * power_remainder((std::abs(rx) - a) / a, p);
  }
  const double dphi = ry == 0.0 ? 0.0 : p * std::pow(std::abs(ry), p - 1.0) * sign0(ry);
  return std::pow(std::abs(rx), p) - std::pow(std::abs(ry), p) - dphi * (rx - ry);
}

}  // namespace

Objective::Objective(ObjectiveKind kind, Matrix a, DenseVector b, double p)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), p_(p) {
  if (b_.size() != a_.rows()) {
    throw ContractViolation("objective: target length does not match rows of A");
  }
  if (a_.cols() == 0) throw ContractViolation("objective: A has no columns");
}

Objective Objective::least_squares(Matrix a, DenseVector b) {
  return Objective(ObjectiveKind::least_squares, std::move(a), std::move(b), 2.0);
}

Objective Objective::lp_loss(Matrix a, DenseVector b, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ContractViolation("lp_loss: exponent must satisfy p > 1");
  }
  return Objective(ObjectiveKind::lp_loss, std::move(a), std::move(b), p);
}

Objective Objective::logistic(Matrix a, DenseVector b) {
  for (double v : b) {
    if (v != 1.0 && v != -1.0) {
      throw ContractViolation("logistic: labels must be in {-1, +1}");
    }
  }
  return Objective(ObjectiveKind::logistic, std::move(a), std::move(b), 2.0);
}

std::string Objective::describe() const {
  switch (kind_) {
    case ObjectiveKind::least_squares:
      return "lsq";
    case ObjectiveKind::lp_loss:
      return "lp:p=" + format_double(p_);
    case ObjectiveKind::logistic:
      return "logistic";
  }
  return "?";
}

double Objective::value_from_linear(const DenseVector& ax) const {
  double s = 0.0;
  switch (kind_) {
    case ObjectiveKind::least_squares:
      for (std::size_t i = 0; i < ax.size(); ++i) {
        const double r = ax[i] - b_[i];
        s += r * r;
      }
      return 0.5 * s;
    case ObjectiveKind::lp_loss:
      for (std::size_t i = 0; i < ax.size(); ++i) {
        s += std::pow(std::abs(ax[i] - b_[i]), p_);
      }
      return s;
    case ObjectiveKind::logistic:
      for (std::size_t i = 0; i < ax.size(); ++i) s += softplus(-b_[i] * ax[i]);
      return s;
  }
  return s;
}

// Per-sample derivative of the loss with respect to (A x)_i.
DenseVector Objective::residual_weights(const DenseVector& ax) const {
  DenseVector w(ax.size());
  switch (kind_) {
    case ObjectiveKind::least_squares:
      for (std::size_t i = 0; i < ax.size(); ++i) w[i] = ax[i] - b_[i];
      break;
    case ObjectiveKind::lp_loss:
      for (std::size_t i = 0; i < ax.size(); ++i) {
        const double r = ax[i] - b_[i];
        w[i] = r == 0.0 ? 0.0 : p_ * std::pow(std::abs(r), p_ - 1.0) * sign0(r);
      }
      break;
    case ObjectiveKind::logistic:
      for (std::size_t i = 0; i < ax.size(); ++i) {
        w[i] = -b_[i] * sigmoid(-b_[i] * ax[i]);
      }
      break;
  }
  return w;
}

double Objective::value(const DenseVector& x) const {
  return value_from_linear(a_.multiply(x));
}

DenseVector Objective::gradient(const DenseVector& x, OracleCounters& counters) const {
  ++counters.foo_calls;
  return a_.multiply_transpose(residual_weights(a_.multiply(x)));
}

Evaluation Objective::evaluate(const DenseVector& x, OracleCounters& counters) const {
  ++counters.foo_calls;
  Evaluation e;
  e.x = x;
  e.linear = a_.multiply(x);
  e.value = value_from_linear(e.linear);
  e.gradient = a_.multiply_transpose(residual_weights(e.linear));
  return e;
}

double Objective::bregman(const Evaluation& at_x, const Evaluation& at_y) const {
  const DenseVector& lx = at_x.linear;
  const DenseVector& ly = at_y.linear;
  if (lx.size() != ly.size() || lx.size() != a_.rows()) {
    throw ContractViolation("bregman: evaluations do not belong to this objective");
  }
  double d = 0.0;
  switch (kind_) {
    case ObjectiveKind::least_squares:
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const double t = lx[i] - ly[i];
        d += t * t;
      }
      d *= 0.5;
      break;
    case ObjectiveKind::lp_loss:
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const double rx = lx[i] - b_[i];
        const double ry = ly[i] - b_[i];
        if (rx == ry) continue;
        d += power_bregman(rx, ry, p_);
      }
      break;
    case ObjectiveKind::logistic:
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const double tx = -b_[i] * lx[i];
        const double ty = -b_[i] * ly[i];
        if (tx == ty) continue;
        d += softplus_bregman(tx, ty);
      }
      break;
  }
  if (d >= 0.0) return d;
  const double scale = std::max({1.0, std::abs(at_x.value), std::abs(at_y.value)});
  if (d < -1e-9 * scale) {
    throw NumericalError("bregman: negative divergence " + format_double(d) +
                         " (objective not convex?)");
  }
  return 0.0;
}

double Objective::bregman(const DenseVector& x, const DenseVector& y,
                          OracleCounters& counters) const {
  Evaluation ex;
  ex.x = x;
  ex.linear = a_.multiply(x);
  ex.value = value_from_linear(ex.linear);
  return bregman(ex, evaluate(y, counters));
}

std::optional<double> Objective::global_smoothness() const {
  switch (kind_) {
    case ObjectiveKind::least_squares:
      return lambda_max_gram(a_);
    case ObjectiveKind::logistic:
      return lambda_max_gram(a_) / 4.0;
    case ObjectiveKind::lp_loss:
      if (p_ == 2.0) return 2.0 * lambda_max_gram(a_);
      return std::nullopt;
  }
  return std::nullopt;
}

double Objective::strong_convexity() const {
  if (kind_ != ObjectiveKind::least_squares) return 0.0;
  return lambda_min_gram(a_);
}

double local_lipschitz(const Objective& obj, const Evaluation& prev,
                       const Evaluation& cur, bool first_iter) {
  const double dg2 = squared_distance(cur.gradient, prev.gradient);
  if (first_iter) {
    const double dx = distance(cur.x, prev.x);
    if (dx == 0.0) {
      throw ContractViolation("local_lipschitz: first iteration needs distinct points");
    }
    return std::sqrt(dg2) / dx;
  }
  const double d = obj.bregman(prev, cur);
  if (d == 0.0 || dg2 == 0.0) return 0.0;
  const double lk = dg2 / (2.0 * d);
  require_finite(lk, "local Lipschitz estimate");
  return lk;
}

ObjectiveChoice parse_objective(std::string_view config) {
  const auto spec = parse_keyed_spec(config);
  if (spec.name == "lsq") {
    spec.require_only({});
    return {ObjectiveKind::least_squares, 2.0};
  }
  if (spec.name == "lp") {
    spec.require_only({"p"});
    const double p = spec.get_double("p", 1.5);
    if (!(p > 1.0)) throw ConfigError("lp: exponent must satisfy p > 1");
    return {ObjectiveKind::lp_loss, p};
  }
  if (spec.name == "logistic") {
    spec.require_only({});
    return {ObjectiveKind::logistic, 2.0};
  }
  throw ConfigError("unknown objective '" + std::string(config) + "'");
}

Objective make_objective(const ObjectiveChoice& choice, Matrix a, DenseVector b) {
  switch (choice.kind) {
    case ObjectiveKind::least_squares:
      return Objective::least_squares(std::move(a), std::move(b));
    case ObjectiveKind::lp_loss:
      return Objective::lp_loss(std::move(a), std::move(b), choice.p);
    case ObjectiveKind::logistic:
      return Objective::logistic(std::move(a), std::move(b));
  }
  throw ConfigError("unknown objective kind");
}

}  // namespace adcgs

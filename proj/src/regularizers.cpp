#include "asprox/regularizers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace asprox {

std::string_view to_string(regularizer_kind kind) {
  switch (kind) {
    case regularizer_kind::l0: return "l0";
    case regularizer_kind::l_half: return "lhalf";
    case regularizer_kind::l1: return "l1";
  }
  return "?";
}

regularizer_kind parse_regularizer_kind(std::string_view name) {
  if (name == "l0") return regularizer_kind::l0;
  if (name == "lhalf" || name == "l0.5" || name == "l1/2")
    return regularizer_kind::l_half;
  if (name == "l1") return regularizer_kind::l1;
  throw std::invalid_argument("unknown regularizer '" + std::string(name) + "'");
}

regularizer::regularizer(regularizer_kind k, double lam) : kind(k), lambda(lam) {
  if (!(lam >= 0.0) || !std::isfinite(lam))
    throw std::invalid_argument("regularization weight must be finite and >= 0");
}

double penalty(regularizer_kind kind, double t) {
  switch (kind) {
    case regularizer_kind::l0: return t != 0.0 ? 1.0 : 0.0;
    case regularizer_kind::l_half: return std::sqrt(std::abs(t));
    case regularizer_kind::l1: return std::abs(t);
  }
  return 0.0;
}

double prox_objective(regularizer_kind kind, double tau, double y, double v) {
  const double d = y - v;
  return 0.5 * d * d + tau * penalty(kind, y);
}

double reg_value(const regularizer &r, const Eigen::VectorXd &x) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) s += penalty(r.kind, x[j]);
  return r.lambda * s;
}

double prox_scalar(regularizer_kind kind, double tau, double v) {
  if (tau == 0.0) return v;
  const double a = std::abs(v);
  switch (kind) {
    case regularizer_kind::l0:
      return a > std::sqrt(2.0 * tau) ? v : 0.0;
    case regularizer_kind::l1:
      return a > tau ? std::copysign(a - tau, v) : 0.0;
    case regularizer_kind::l_half: {
      const double threshold = 1.5 * std::cbrt(tau * tau);
      if (a <= threshold) return 0.0;
      const double phi = std::acos(0.25 * tau * std::pow(a / 3.0, -1.5));
      const double y = (2.0 / 3.0) * a *
                       (1.0 + std::cos(2.0 * std::numbers::pi / 3.0 -
                                       (2.0 / 3.0) * phi));
      return std::copysign(y, v);
    }
  }
  return v;
}

Eigen::VectorXd prox(const regularizer &r, const Eigen::VectorXd &v,
                     double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox step size must be > 0");
  // lambda = 0 stays the identity even for an infinite step.
  const double tau = r.lambda == 0.0 ? 0.0 : eta * r.lambda;
  Eigen::VectorXd y(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    y[j] = prox_scalar(r.kind, tau, v[j]);
  return y;
}

}  // namespace asprox

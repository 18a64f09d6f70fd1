#ifndef ASPROX_REGULARIZERS_HPP
#define ASPROX_REGULARIZERS_HPP

#include <string_view>

#include <Eigen/Dense>

namespace asprox {

enum class regularizer_kind { l0, l_half, l1 };

std::string_view to_string(regularizer_kind kind);
/// Accepts "l0", "lhalf" / "l0.5" / "l1/2", "l1". Throws std::invalid_argument.
regularizer_kind parse_regularizer_kind(std::string_view name);

/// r(x) = lambda * sum_j rho(x_j), rho in {|t|^0, |t|^(1/2), |t|}.
struct regularizer {
  regularizer_kind kind = regularizer_kind::l0;
  double lambda = 0.0;

  /// Throws std::invalid_argument on negative or non-finite lambda.
  regularizer(regularizer_kind k, double lam);
};

/// rho(t) for a single coordinate, with rho(0) = 0.
double penalty(regularizer_kind kind, double t);

/// (1/2)(y - v)^2 + tau * rho(y), the scaled 1-D proximal objective.
double prox_objective(regularizer_kind kind, double tau, double y, double v);

double reg_value(const regularizer &r, const Eigen::VectorXd &x);

/// Closed-form global minimizer of (1/2)(y - v)^2 + tau * rho(y).
///
/// l0: hard threshold at sqrt(2 tau), ties go to 0.
/// l1: soft threshold at tau.
/// l_half: half threshold at (3/2) tau^(2/3); above it the nonzero root of
///   the depressed cubic in sqrt(|y|), taken in trigonometric form. Ties go
///   to 0.
double prox_scalar(regularizer_kind kind, double tau, double v);

/// prox_{eta r}(v), applied coordinatewise. Throws std::invalid_argument if
/// eta <= 0.
Eigen::VectorXd prox(const regularizer &r, const Eigen::VectorXd &v,
                     double eta);

/// Brute-force minimizer of (1/2)(y - v)^2 + tau * rho(y) over a uniform grid
/// of `grid_points` on [-2|v| - 1, 2|v| + 1] plus the candidates {0, v}.
/// Independent of prox_scalar; used as a test oracle.
double prox_oracle_1d(regularizer_kind kind, double tau, double v,
                      long grid_points = 1'000'001);

}  // namespace asprox

#endif  // ASPROX_REGULARIZERS_HPP

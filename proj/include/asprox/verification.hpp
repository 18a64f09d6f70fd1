#ifndef ASPROX_VERIFICATION_HPP
#define ASPROX_VERIFICATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "asprox/sampling.hpp"

// Independent oracles. None of these call the closed-form code they are used
// to check.

namespace asprox {

inline constexpr double default_fd_step = 1e-6;
inline constexpr double default_fd_rel_tol = 1e-6;
inline constexpr int monte_carlo_batches = 20;

/// Central differences (f(x + h e_j) - f(x - h e_j)) / (2h), coordinatewise.
Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd &)> &fn,
    const Eigen::VectorXd &x, double h = default_fd_step);

struct monte_carlo_stats {
  std::size_t draws = 0;
  Eigen::VectorXd mean_estimate;
  /// Standard error of each component of mean_estimate.
  Eigen::VectorXd mean_std_error;
  /// Empirical E || estimate - xi_bar ||^2.
  double deviation_second_moment = 0.0;
  double std_error = 0.0;  ///< standard error of deviation_second_moment
};

/// Empirical statistics of weighted_estimate over `draws` batches drawn from
/// `scheme`. Standard errors use batch means over 20 batches. Throws
/// std::invalid_argument if draws < 1000.
monte_carlo_stats monte_carlo_estimator(const sampling_scheme &scheme,
                                        const Eigen::MatrixXd &xi,
                                        std::size_t draws, std::uint64_t seed);

/// Pairwise inclusion probabilities by full enumeration: every b-subset for
/// uniform sampling, every subset weighted by its product probability for
/// independent sampling. Throws std::domain_error for n > 12.
Eigen::MatrixXd enumerate_pairwise(const sampling_scheme &scheme);

}  // namespace asprox

#endif  // ASPROX_VERIFICATION_HPP

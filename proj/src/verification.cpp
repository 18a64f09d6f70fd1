#include "asprox/verification.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace asprox {

Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd &)> &fn,
    const Eigen::VectorXd &x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double up = fn(probe);
    probe[j] = x[j] - h;
    const double down = fn(probe);
    probe[j] = x[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

monte_carlo_stats monte_carlo_estimator(const sampling_scheme &scheme,
                                        const Eigen::MatrixXd &xi,
                                        std::size_t draws, std::uint64_t seed) {
  if (draws < 1000) throw std::invalid_argument("need at least 1000 draws");
  if (static_cast<std::size_t>(xi.cols()) != scheme.n)
    throw std::invalid_argument("xi must have n columns");

  const Eigen::Index d = xi.rows();
  const double nd = static_cast<double>(scheme.n);
  // Same summation order and scaling as the estimator, so a full batch with
  // p = 1 reproduces xi_bar exactly.
  Eigen::VectorXd xi_bar = Eigen::VectorXd::Zero(xi.rows());
  for (Eigen::Index i = 0; i < xi.cols(); ++i) xi_bar += xi.col(i) * (1.0 / nd);

  // Estimator evaluated here directly rather than through weighted_estimate.
  rng_type rng(seed);
  Eigen::MatrixXd batch_mean = Eigen::MatrixXd::Zero(d, monte_carlo_batches);
  Eigen::VectorXd batch_moment = Eigen::VectorXd::Zero(monte_carlo_batches);
  Eigen::VectorXd batch_count = Eigen::VectorXd::Zero(monte_carlo_batches);
  Eigen::VectorXd est(d);
  for (std::size_t r = 0; r < draws; ++r) {
    const auto batch = draw(scheme, rng);
    est.setZero();
    for (std::size_t i : batch) est += xi.col(i) * (1.0 / (nd * scheme.p[i]));
    const std::size_t slot = r * monte_carlo_batches / draws;
    batch_mean.col(slot) += est;
    batch_moment[slot] += (est - xi_bar).squaredNorm();
    batch_count[slot] += 1.0;
  }
  for (int k = 0; k < monte_carlo_batches; ++k) {
    batch_mean.col(k) /= batch_count[k];
    batch_moment[k] /= batch_count[k];
  }

  monte_carlo_stats s;
  s.draws = draws;
  // Batches differ in size by at most one; weight by count for the overall
  // mean.
  s.mean_estimate = (batch_mean * batch_count) / static_cast<double>(draws);
  s.deviation_second_moment = batch_moment.dot(batch_count) / static_cast<double>(draws);

  const double B = monte_carlo_batches;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  double var_m = 0.0;
  for (int k = 0; k < monte_carlo_batches; ++k) {
    var += (batch_mean.col(k) - s.mean_estimate).array().square().matrix();
    const double dm = batch_moment[k] - s.deviation_second_moment;
    var_m += dm * dm;
  }
  s.mean_std_error = (var / (B - 1.0) / B).cwiseSqrt();
  s.std_error = std::sqrt(var_m / (B - 1.0) / B);
  return s;
}

Eigen::MatrixXd enumerate_pairwise(const sampling_scheme &scheme) {
  const std::size_t n = scheme.n;
  if (n > 12) throw std::domain_error("enumeration only supported for n <= 12");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  const std::uint32_t subsets = 1u << n;

  if (scheme.kind == sampling_kind::uniform) {
    const auto b = static_cast<int>(scheme.b);
    double count = 0.0;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      if (std::popcount(mask) != b) continue;
      count += 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1u)) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (mask >> j & 1u) P(i, j) += 1.0;
      }
    }
    P /= count;
  } else {
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      double prob = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        prob *= (mask >> i & 1u) ? scheme.p[i] : 1.0 - scheme.p[i];
      if (prob == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1u)) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (mask >> j & 1u) P(i, j) += prob;
      }
    }
  }
  return P;
}

}  // namespace asprox

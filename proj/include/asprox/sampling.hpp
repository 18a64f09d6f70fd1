#ifndef ASPROX_SAMPLING_HPP
#define ASPROX_SAMPLING_HPP

#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace asprox {

using rng_type = std::mt19937_64;

enum class sampling_kind { uniform, independent };

std::string_view to_string(sampling_kind kind);

/// A proper mini-batch sampling over [n].
///
/// p[i] is the inclusion probability of index i and v[i] a vector satisfying
/// P - p p^T <= Diag(p o v), where P is the pairwise inclusion matrix.
/// For uniform sampling (without replacement, fixed size b) p = b/n and
/// v = (n-b)/(n-1); for independent sampling v = 1 - p and E|S| = b.
struct sampling_scheme {
  sampling_kind kind = sampling_kind::uniform;
  std::size_t n = 0;
  double b = 0.0;
  std::vector<double> p;
  std::vector<double> v;
  /// Number of indices with p_i < 1 (the KKT split point).
  std::size_t k = 0;
};

/// Throws std::invalid_argument unless n >= 2 and 1 <= b <= n.
sampling_scheme make_uniform(std::size_t n, std::size_t b);

/// Independent sampling with caller-supplied probabilities, each in (0, 1].
sampling_scheme make_independent(std::vector<double> p);

/// Independent sampling minimizing sum_i w_i^2 / p_i subject to
/// sum_i p_i = b and 0 < p_i <= 1.
///
/// Indices are ordered by ascending weight (ties by index). k is the largest
/// value with 0 < b + k - n <= W_k / w_(k), W_k being the sum of the k
/// smallest weights; those k indices get p = (b + k - n) w / W_k and the rest
/// p = 1. Results are returned in the caller's index order and clamped to
/// [1e-12, 1].
///
/// Throws std::invalid_argument on bad input, std::domain_error if no
/// feasible k exists (too few positive weights for the requested b).
sampling_scheme make_independent_optimal(std::span<const double> weights,
                                         double b);

/// Exact pairwise inclusion probabilities P_ij. Throws std::domain_error for
/// n > 64.
Eigen::MatrixXd pairwise_matrix(const sampling_scheme &scheme);

/// Smallest eigenvalue of Diag(p o v) - (P - p p^T). n <= 64.
double pv_min_eigenvalue(const sampling_scheme &scheme);

/// True iff pv_min_eigenvalue >= -1e-10.
bool check_pv_inequality(const sampling_scheme &scheme);

/// Draws a batch. Uniform: b distinct indices by partial Fisher-Yates,
/// returned in ascending order.
/// Independent: each i kept with probability p_i; may return an empty batch.
std::vector<std::size_t> draw(const sampling_scheme &scheme, rng_type &rng);

/// sum_{i in S} xi_i / (n p_i), xi_i being column i of `xi` (d x n).
Eigen::VectorXd weighted_estimate(std::span<const std::size_t> batch,
                                  const sampling_scheme &scheme,
                                  const Eigen::MatrixXd &xi);

/// (1/n^2) sum_i v_i ||xi_i||^2 / p_i
double variance_bound(const sampling_scheme &scheme,
                      std::span<const double> sq_norms);

/// n sum w_i^2 / (sum w_i)^2 >= 1, with equality iff all weights are equal.
double cauchy_ratio(std::span<const double> weights);

}  // namespace asprox

#endif  // ASPROX_SAMPLING_HPP

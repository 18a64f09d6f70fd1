#include "asprox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace asprox {

namespace {

constexpr double min_probability = 1e-12;
constexpr std::size_t max_matrix_n = 64;

}  // namespace

std::string_view to_string(sampling_kind kind) {
  return kind == sampling_kind::uniform ? "U" : "I";
}

sampling_scheme make_uniform(std::size_t n, std::size_t b) {
  if (n < 2) throw std::invalid_argument("uniform sampling needs n >= 2");
  if (b < 1 || b > n)
    throw std::invalid_argument("uniform batch size " + std::to_string(b) +
                                " outside [1, " + std::to_string(n) + "]");
  sampling_scheme s;
  s.kind = sampling_kind::uniform;
  s.n = n;
  s.b = static_cast<double>(b);
  s.p.assign(n, static_cast<double>(b) / static_cast<double>(n));
  s.v.assign(n, static_cast<double>(n - b) / static_cast<double>(n - 1));
  s.k = b == n ? 0 : n;
  return s;
}

sampling_scheme make_independent(std::vector<double> p) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  sampling_scheme s;
  s.kind = sampling_kind::independent;
  s.n = p.size();
  for (double pi : p)
    if (!(pi > 0.0 && pi <= 1.0))
      throw std::invalid_argument("inclusion probabilities must lie in (0, 1]");
  s.b = std::accumulate(p.begin(), p.end(), 0.0);
  s.v.resize(p.size());
  std::transform(p.begin(), p.end(), s.v.begin(),
                 [](double pi) { return 1.0 - pi; });
  s.k = static_cast<std::size_t>(
      std::count_if(p.begin(), p.end(), [](double pi) { return pi < 1.0; }));
  s.p = std::move(p);
  return s;
}

sampling_scheme make_independent_optimal(std::span<const double> weights,
                                         double b) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("empty weight vector");
  if (!(b > 0.0) || b > static_cast<double>(n))
    throw std::invalid_argument("expected batch size must lie in (0, n]");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and >= 0");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return weights[a] < weights[c];
  });

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + weights[order[j]];

  const double nd = static_cast<double>(n);
  std::size_t k = 0;
  for (std::size_t kk = n; kk >= 1; --kk) {
    const double slack = b + static_cast<double>(kk) - nd;
    if (!(slack > 0.0)) break;  // decreases with kk
    const double wk = weights[order[kk - 1]];
    if (wk > 0.0 && slack <= prefix[kk] / wk) {
      k = kk;
      break;
    }
  }
  if (k == 0)
    throw std::domain_error(
        "no feasible split for optimal independent probabilities: too few "
        "positive weights for the requested batch size");

  const double scale = (b + static_cast<double>(k) - nd) / prefix[k];
  std::vector<double> p(n, 1.0);
  for (std::size_t j = 0; j < k; ++j)
    p[order[j]] = std::clamp(scale * weights[order[j]], min_probability, 1.0);

  sampling_scheme s = make_independent(std::move(p));
  s.b = b;
  return s;
}

Eigen::MatrixXd pairwise_matrix(const sampling_scheme &scheme) {
  const std::size_t n = scheme.n;
  if (n > max_matrix_n)
    throw std::domain_error("pairwise matrix only supported for n <= 64");
  Eigen::MatrixXd P(n, n);
  if (scheme.kind == sampling_kind::uniform) {
    const double b = scheme.b, nd = static_cast<double>(n);
    const double off = b * (b - 1.0) / (nd * (nd - 1.0));
    P.setConstant(off);
    for (std::size_t i = 0; i < n; ++i) P(i, i) = scheme.p[i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        P(i, j) = i == j ? scheme.p[i] : scheme.p[i] * scheme.p[j];
  }
  return P;
}

double pv_min_eigenvalue(const sampling_scheme &scheme) {
  const Eigen::MatrixXd P = pairwise_matrix(scheme);
  const Eigen::Map<const Eigen::VectorXd> p(scheme.p.data(), scheme.n);
  const Eigen::Map<const Eigen::VectorXd> v(scheme.v.data(), scheme.n);
  Eigen::MatrixXd M = -(P - p * p.transpose());
  M.diagonal() += p.cwiseProduct(v);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

bool check_pv_inequality(const sampling_scheme &scheme) {
  return pv_min_eigenvalue(scheme) >= -1e-10;
}

std::vector<std::size_t> draw(const sampling_scheme &scheme, rng_type &rng) {
  std::vector<std::size_t> batch;
  if (scheme.kind == sampling_kind::uniform) {
    const auto b = static_cast<std::size_t>(scheme.b);
    std::vector<std::size_t> pool(scheme.n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t j = 0; j < b; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, scheme.n - 1);
      std::swap(pool[j], pool[pick(rng)]);
    }
    pool.resize(b);
    std::sort(pool.begin(), pool.end());
    batch = std::move(pool);
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    batch.reserve(static_cast<std::size_t>(std::ceil(scheme.b)) + 8);
    for (std::size_t i = 0; i < scheme.n; ++i)
      if (unit(rng) < scheme.p[i]) batch.push_back(i);
  }
  return batch;
}

Eigen::VectorXd weighted_estimate(std::span<const std::size_t> batch,
                                  const sampling_scheme &scheme,
                                  const Eigen::MatrixXd &xi) {
  Eigen::VectorXd est = Eigen::VectorXd::Zero(xi.rows());
  const double nd = static_cast<double>(scheme.n);
  for (std::size_t i : batch) est += xi.col(i) / (nd * scheme.p[i]);
  return est;
}

double variance_bound(const sampling_scheme &scheme,
                      std::span<const double> sq_norms) {
  if (sq_norms.size() != scheme.n)
    throw std::invalid_argument("sq_norms length must equal n");
  double s = 0.0;
  for (std::size_t i = 0; i < scheme.n; ++i)
    s += scheme.v[i] * sq_norms[i] / scheme.p[i];
  const double nd = static_cast<double>(scheme.n);
  return s / (nd * nd);
}

double cauchy_ratio(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("empty weight vector");
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return static_cast<double>(weights.size()) * s2 / (s * s);
}

}  // namespace asprox

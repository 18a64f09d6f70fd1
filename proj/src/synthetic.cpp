#include "asprox/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace asprox {

dataset gen_synthetic(const synthetic_spec &spec) {
  if (spec.n == 0 || spec.d == 0)
    throw std::invalid_argument("synthetic data needs n, d >= 1");
  if (!(spec.sparsity >= 0.0 && spec.sparsity <= 1.0))
    throw std::invalid_argument("sparsity must lie in [0, 1]");
  if (!(spec.label_noise >= 0.0 && spec.label_noise <= 1.0))
    throw std::invalid_argument("label noise must lie in [0, 1]");
  if (!(spec.heterogeneity >= 1.0) || !std::isfinite(spec.heterogeneity))
    throw std::invalid_argument("heterogeneity must be >= 1");
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
    throw std::invalid_argument("scale must be > 0");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Planted model.
  const std::size_t support =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.1 * spec.d)));
  std::vector<std::size_t> features(spec.d);
  std::iota(features.begin(), features.end(), std::size_t{0});
  std::shuffle(features.begin(), features.end(), rng);
  std::vector<double> w(spec.d, 0.0);
  for (std::size_t k = 0; k < support; ++k) w[features[k]] = gauss(rng);

  // Stratified norm exponents, randomly assigned to rows.
  std::vector<double> norms(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double u = (static_cast<double>(i) + unit(rng)) / static_cast<double>(spec.n);
    norms[i] = spec.scale * std::pow(spec.heterogeneity, u * u);
  }
  std::shuffle(norms.begin(), norms.end(), rng);

  const std::size_t nnz = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround((1.0 - spec.sparsity) * spec.d)), 1, spec.d);

  std::vector<sparse_row> rows(spec.n);
  std::vector<int> labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    // Partial shuffle picks the row's support.
    for (std::size_t k = 0; k < nnz; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, spec.d - 1);
      std::swap(features[k], features[pick(rng)]);
    }
    sparse_row row(nnz);
    double sq = 0.0;
    for (std::size_t k = 0; k < nnz; ++k) {
      double v = gauss(rng);
      if (v == 0.0) v = 1.0;
      row[k] = {static_cast<std::uint32_t>(features[k]), v};
      sq += v * v;
    }
    const double scale = norms[i] / std::sqrt(sq);
    double margin = 0.0;
    for (auto &e : row) {
      e.value *= scale;
      margin += e.value * w[e.index];
    }
    std::sort(row.begin(), row.end(),
              [](const sparse_entry &a, const sparse_entry &b) { return a.index < b.index; });
    int y = margin >= 0.0 ? 1 : -1;
    if (unit(rng) < spec.label_noise) y = -y;
    rows[i] = std::move(row);
    labels[i] = y;
  }
  return dataset(std::move(rows), std::move(labels), spec.d);
}

}  // namespace asprox

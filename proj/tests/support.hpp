#ifndef ASPROX_TESTS_SUPPORT_HPP
#define ASPROX_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "asprox/problem.hpp"

namespace asprox::testing {

// Dense-ish random data with labels independent of the features.
inline dataset random_dataset(std::size_t n, std::size_t d, double density,
                              std::uint64_t seed, double value_scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, value_scale);
  std::bernoulli_distribution keep(density);
  std::bernoulli_distribution coin(0.5);
  std::vector<sparse_row> rows(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      if (keep(rng)) rows[i].push_back({static_cast<std::uint32_t>(j), gauss(rng)});
    labels[i] = coin(rng) ? 1 : -1;
  }
  return dataset(std::move(rows), std::move(labels), d);
}

inline Eigen::VectorXd random_vector(std::size_t d, std::mt19937_64 &rng,
                                     double sigma = 1.0) {
  std::normal_distribution<double> gauss(0.0, sigma);
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (auto &v : x) v = gauss(rng);
  return x;
}

// Forwards to another finite_sum and tallies IFO entry-point calls. The
// per-index log lets tests reconstruct batch sizes step by step.
class counting_sum final : public finite_sum {
 public:
  explicit counting_sum(const finite_sum &inner) : inner_(inner) {}

  std::size_t size() const override { return inner_.size(); }
  std::size_t dim() const override { return inner_.dim(); }

  void add_gradient(std::size_t i, const Eigen::VectorXd &x, double scale,
                    Eigen::VectorXd &out) const override {
    ++calls;
    inner_.add_gradient(i, x, scale, out);
  }
  void add_gradient_difference(std::size_t i, const Eigen::VectorXd &x_new,
                               const Eigen::VectorXd &x_old, double scale,
                               Eigen::VectorXd &out) const override {
    ++calls;
    inner_.add_gradient_difference(i, x_new, x_old, scale, out);
  }
  double value(const Eigen::VectorXd &x) const override { return inner_.value(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd &x) const override {
    return inner_.gradient(x);
  }

  mutable std::uint64_t calls = 0;

 private:
  const finite_sum &inner_;
};

}  // namespace asprox::testing

#endif  // ASPROX_TESTS_SUPPORT_HPP

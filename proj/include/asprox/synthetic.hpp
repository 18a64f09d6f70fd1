#ifndef ASPROX_SYNTHETIC_HPP
#define ASPROX_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>

#include "asprox/problem.hpp"

namespace asprox {

struct synthetic_spec {
  std::size_t n = 500;
  std::size_t d = 100;
  /// Fraction of zero entries per row; every row keeps at least one nonzero.
  double sparsity = 0.9;
  /// Row norms spread over [scale, scale * heterogeneity]; 1 makes all norms
  /// equal.
  double heterogeneity = 10.0;
  double scale = 1.0;
  /// Probability of flipping each planted label.
  double label_noise = 0.1;
  std::uint64_t seed = 1;
};

/// Deterministic in the spec. Row i gets norm scale * h^(u_i^2) with u_i
/// jittered on a stratified grid of [0, 1], so most rows stay near the low
/// end and a tail reaches scale * h. Labels are sign(a_i^T w) for a planted sparse w (10% support),
/// each flipped with probability label_noise.
///
/// Throws std::invalid_argument for n or d of zero, fractions outside [0, 1]
/// heterogeneity < 1 or a non-positive scale.
dataset gen_synthetic(const synthetic_spec &spec);

}  // namespace asprox

#endif  // ASPROX_SYNTHETIC_HPP

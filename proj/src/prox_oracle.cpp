#include <cmath>
#include <stdexcept>

#include "asprox/regularizers.hpp"

namespace asprox {

double prox_oracle_1d(regularizer_kind kind, double tau, double v,
                      long grid_points) {
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  if (grid_points < 2) throw std::invalid_argument("grid needs >= 2 points");

  const double hi = 2.0 * std::abs(v) + 1.0;
  const double lo = -hi;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  // Analytic candidates first so an exact tie keeps 0.
  double best_y = 0.0;
  double best = prox_objective(kind, tau, 0.0, v);
  if (const double f = prox_objective(kind, tau, v, v); f < best) {
    best = f;
    best_y = v;
  }
  for (long k = 0; k < grid_points; ++k) {
    const double y = lo + step * static_cast<double>(k);
    const double f = prox_objective(kind, tau, y, v);
    if (f < best) {
      best = f;
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace asprox

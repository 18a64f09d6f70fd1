#ifndef ASPROX_OPTIMIZERS_HPP
#define ASPROX_OPTIMIZERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "asprox/problem.hpp"
#include "asprox/regularizers.hpp"
#include "asprox/sampling.hpp"

namespace asprox {

enum class method { prox_sgd, prox_sarah, prox_spider };
enum class output_rule { last_iterate, uniform_random_iterate };

std::string_view to_string(method m);
method parse_method(std::string_view name);

/// Thrown for inconsistent optimizer configurations.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// State handed to an optional per-step observer, after the prox update.
struct step_view {
  std::size_t epoch;             ///< 0 for ProxSGD
  std::size_t step;              ///< inner index t (1-based)
  const Eigen::VectorXd &x_cur;  ///< x_t
  const Eigen::VectorXd &x_next; ///< x_{t+1} = prox(x_t - eta g)
  const Eigen::VectorXd &g;      ///< estimator used in the update
  std::uint64_t ifo;             ///< cumulative IFO after this step
};

struct optimizer_config {
  method algorithm = method::prox_sgd;
  double eta = 0.0;
  /// Inner-loop length for the recursive methods. m = 0 degenerates to one
  /// full-batch prox step per epoch.
  std::size_t m = 1;
  /// T for ProxSGD, number of outer loops for ProxSARAH / ProxSPIDER.
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  output_rule output = output_rule::last_iterate;
  /// Inner (and ProxSGD) batches.
  std::optional<sampling_scheme> inner_scheme;
  /// Outer batch for ProxSPIDER.
  std::optional<sampling_scheme> outer_scheme;
  /// Record a checkpoint every `trace_stride` steps; 0 disables tracing.
  /// Zero iterations give an empty trace.
  std::size_t trace_stride = 1;
  /// Stop once cumulative IFO reaches this count; 0 means no budget.
  std::uint64_t ifo_budget = 0;
  /// Defaults to the zero vector.
  std::optional<Eigen::VectorXd> x0;
  std::function<void(const step_view &)> on_step;
};

struct trace_record {
  std::size_t step = 0;
  std::uint64_t ifo = 0;
  double objective = 0.0;
  /// NaN on the initial record, which has no preceding step.
  double residual = 0.0;
  std::size_t nnz = 0;
  double elapsed = 0.0;
};

struct run_report {
  Eigen::VectorXd x;
  std::size_t selected_epoch = 0;
  std::size_t selected_step = 0;
  std::vector<trace_record> trace;
  optimizer_config config;
  std::uint64_t total_ifo = 0;
  bool diverged = false;
};

/// ||grad f(x_next) - g - (x_next - x_cur) / eta||, the norm of an element of
/// the Frechet subdifferential of F at x_next when x_next = prox(x_cur - eta g).
double stationarity_residual(const Eigen::VectorXd &grad_next,
                             const Eigen::VectorXd &g_used,
                             const Eigen::VectorXd &x_next,
                             const Eigen::VectorXd &x_cur, double eta);

/// Q = sum_i v_i L_i^2 / (p_i n^2)
double q_constant(const sampling_scheme &scheme, std::span<const double> L);
/// Q' = sum_i v'_i G_i^2 / (p'_i n^2)
double q_prime_constant(const sampling_scheme &outer_scheme,
                        std::span<const double> G);

/// ProxSGD: 1 / (4 L_tilde). Recursive methods: 1 / (4 L_tilde + 2 m Q / L_tilde),
/// which makes 1/(2 eta) = 2 L_tilde + m Q / L_tilde.
double default_stepsize(method m, double L_tilde, std::size_t inner_length,
                        double Q);

// Constants of the ProxSGD convergence bound; informational only.
double sgd_c1(double L_tilde, double eta);
double sgd_c2(double L_tilde, double eta);

/// Batch size making the uniform-sampling variance term of ProxSGD at most
/// eps^2 / 2: 2 (sum G_i^2) C1 / (n eps^2), rounded up and clamped to n
/// with a warning on stderr.
std::size_t sgd_uniform_batch(std::span<const double> G, double c1, double eps);
/// Independent-sampling counterpart: 2 (sum G_i)^2 C1 / (n^2 eps^2).
std::size_t sgd_independent_batch(std::span<const double> G, double c1,
                                  double eps);

/// sum_{i in S} (grad f_i(x_t) - grad f_i(x_prev)) / (n p_i), one IFO per index.
Eigen::VectorXd recursive_increment(const finite_sum &problem,
                                    std::span<const std::size_t> batch,
                                    const sampling_scheme &scheme,
                                    const Eigen::VectorXd &x_t,
                                    const Eigen::VectorXd &x_prev);

/// sum_{i in S} grad f_i(x) / (n p_i), one IFO per index.
Eigen::VectorXd batch_gradient(const finite_sum &problem,
                               std::span<const std::size_t> batch,
                               const sampling_scheme &scheme,
                               const Eigen::VectorXd &x);

run_report prox_sgd_as(const finite_sum &problem, const regularizer &reg,
                       const optimizer_config &config);
run_report prox_sarah_as(const finite_sum &problem, const regularizer &reg,
                         const optimizer_config &config);
run_report prox_spider_as(const finite_sum &problem, const regularizer &reg,
                          const optimizer_config &config);

/// Dispatches on config.algorithm.
run_report run_optimizer(const finite_sum &problem, const regularizer &reg,
                         const optimizer_config &config);

}  // namespace asprox

#endif  // ASPROX_OPTIMIZERS_HPP

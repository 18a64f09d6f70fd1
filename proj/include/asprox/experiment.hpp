#ifndef ASPROX_EXPERIMENT_HPP
#define ASPROX_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asprox/libsvm.hpp"
#include "asprox/optimizers.hpp"
#include "asprox/problem.hpp"
#include "asprox/regularizers.hpp"
#include "asprox/sampling.hpp"
#include "asprox/synthetic.hpp"

namespace asprox {

/// One method / sampling-scheme combination, e.g. ProxSARAH with independent
/// sampling. Written as "sarah:I" in config files.
struct run_spec {
  method algorithm = method::prox_sgd;
  sampling_kind sampling = sampling_kind::uniform;

  /// "prox_sarah_I" and the like; also the trace file stem.
  std::string name() const;
  friend bool operator==(const run_spec &, const run_spec &) = default;
};

run_spec parse_run_spec(std::string_view text);

enum class eta_mode { theory, fixed, grid };

inline const std::vector<double> default_eta_grid = {10.0, 1.0, 1e-1, 1e-2, 1e-3, 1e-4};

struct experiment_config {
  std::optional<std::filesystem::path> data_path;  ///< synthetic when empty
  libsvm_options libsvm;
  synthetic_spec synthetic;

  regularizer_kind reg_kind = regularizer_kind::l_half;
  double lambda = 0.01;

  std::vector<run_spec> runs;

  eta_mode step_rule = eta_mode::theory;
  double eta = 0.0;
  std::vector<double> eta_grid = default_eta_grid;

  // Zero selects the default: b = m = ceil(sqrt(n)), B = ceil(n / 2).
  std::size_t b = 0;
  std::size_t B = 0;
  std::size_t m = 0;
  /// Outer loops for the recursive methods; ProxSGD runs epochs * ceil(n / b)
  /// iterations unless sgd_iterations is set.
  std::size_t epochs = 30;
  std::size_t sgd_iterations = 0;

  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  std::size_t trace_stride = 1;
  output_rule output = output_rule::last_iterate;
  std::uint64_t ifo_budget = 0;
  std::size_t threads = 1;

  /// Every run starts from the same x0: zero when x0_scale is 0, otherwise
  /// i.i.d. N(0, x0_scale^2) entries drawn from x0_seed.
  double x0_scale = 0.0;
  std::uint64_t x0_seed = 0;
};

/// Flat `key = value` text, '#' starts a comment. Throws config_error on
/// unknown keys, malformed values, an empty method list or a missing seed.
experiment_config parse_config(std::istream &in);
experiment_config load_config(const std::filesystem::path &path);

/// Loads or generates the dataset named by the config.
dataset load_dataset(const experiment_config &config);

Eigen::VectorXd initial_iterate(const experiment_config &config, std::size_t dim);

struct resolved_sizes {
  std::size_t b, B, m, epochs, sgd_iterations;
};
resolved_sizes resolve_sizes(const experiment_config &config, std::size_t n);

/// Sampling schemes, step size and loop lengths for one run. ProxSGD and the
/// ProxSPIDER outer batch weight independent probabilities by G, inner
/// batches of the recursive methods by L. A non-positive eta selects the
/// theory step size.
optimizer_config make_optimizer_config(const experiment_config &config,
                                       const dataset &data,
                                       const loss_constants &constants,
                                       const run_spec &spec, double eta,
                                       std::uint64_t seed);

struct run_outcome {
  run_spec spec;
  double eta = 0.0;
  run_report report;
};

struct experiment_summary {
  std::vector<run_outcome> runs;
  /// max(0, smallest objective observed in any trace).
  double f_star = 0.0;
};

/// Executes every configured run and writes `<run>.csv` traces plus
/// `summary.csv` into config.output_dir.
experiment_summary run_experiment(const experiment_config &config);
experiment_summary run_experiment(const experiment_config &config,
                                  const dataset &data);

/// CSV trace with header `step,ifo,objective,residual,nnz,elapsed`.
void write_trace_csv(const std::vector<trace_record> &trace, std::ostream &out);

struct grid_entry {
  double eta = 0.0;
  double final_objective = 0.0;
  bool finite = true;
};

struct grid_result {
  run_spec spec;
  std::vector<grid_entry> entries;
  std::optional<double> best_eta;  ///< empty when every entry diverged
};

/// Runs every eta for each configured run under the IFO budget (or the full
/// epoch count when no budget is set) and picks the eta with the smallest
/// final objective, ties toward the smaller eta. Non-finite runs are
/// excluded from selection. Writes `grid.csv` into config.output_dir.
std::vector<grid_result> grid_search(const experiment_config &config,
                                     const dataset &data,
                                     const std::vector<double> &etas);

}  // namespace asprox

#endif  // ASPROX_EXPERIMENT_HPP

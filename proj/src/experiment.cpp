#include "asprox/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace asprox {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    if (auto item = trim(s.substr(pos, end - pos)); !item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw config_error("key '" + std::string(key) + "': not a number: '" +
                       std::string(v) + "'");
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw config_error("key '" + std::string(key) + "': not a non-negative integer: '" +
                       std::string(v) + "'");
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t isqrt_ceil(std::size_t n) {
  auto r = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  while (r * r < n) ++r;
  return r;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < count;) {
        try {
          fn(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

double final_objective(const run_report &report, const finite_sum &problem,
                       const regularizer &reg) {
  if (!report.trace.empty()) return report.trace.back().objective;
  return problem.value(report.x) + reg_value(reg, report.x);
}

}  // namespace

std::string run_spec::name() const {
  return std::string(to_string(algorithm)) + "_" + std::string(to_string(sampling));
}

run_spec parse_run_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw config_error("method entry '" + std::string(text) +
                       "' must look like sarah:U or spider:I");
  run_spec spec;
  try {
    spec.algorithm = parse_method(trim(text.substr(0, colon)));
  } catch (const std::invalid_argument &e) {
    throw config_error(e.what());
  }
  const auto kind = trim(text.substr(colon + 1));
  if (kind == "U" || kind == "u" || kind == "uniform")
    spec.sampling = sampling_kind::uniform;
  else if (kind == "I" || kind == "i" || kind == "independent")
    spec.sampling = sampling_kind::independent;
  else
    throw config_error("unknown sampling '" + std::string(kind) + "'");
  return spec;
}

experiment_config parse_config(std::istream &in) {
  experiment_config c;
  std::string line;
  std::size_t lineno = 0;
  bool have_methods = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(s.substr(0, eq));
    const auto val = trim(s.substr(eq + 1));
    if (val.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty value for '" +
                         std::string(key) + "'");
    try {
      if (key == "data") {
        c.data_path = std::filesystem::path(std::string(val));
      } else if (key == "labels") {
        c.libsvm.labels = parse_label_mapping(val);
      } else if (key == "dim") {
        c.libsvm.dim = to_uint(key, val);
      } else if (key == "synthetic.n") {
        c.synthetic.n = to_uint(key, val);
      } else if (key == "synthetic.d") {
        c.synthetic.d = to_uint(key, val);
      } else if (key == "synthetic.sparsity") {
        c.synthetic.sparsity = to_double(key, val);
      } else if (key == "synthetic.het") {
        c.synthetic.heterogeneity = to_double(key, val);
      } else if (key == "synthetic.noise") {
        c.synthetic.label_noise = to_double(key, val);
      } else if (key == "synthetic.scale") {
        c.synthetic.scale = to_double(key, val);
      } else if (key == "x0_scale") {
        c.x0_scale = to_double(key, val);
        if (!(c.x0_scale >= 0.0) || !std::isfinite(c.x0_scale))
          throw config_error("x0_scale must be a finite value >= 0");
      } else if (key == "x0_seed") {
        c.x0_seed = to_uint(key, val);
      } else if (key == "synthetic.seed") {
        c.synthetic.seed = to_uint(key, val);
      } else if (key == "regularizer") {
        c.reg_kind = parse_regularizer_kind(val);
      } else if (key == "lambda") {
        c.lambda = to_double(key, val);
        if (!(c.lambda >= 0.0)) throw config_error("lambda must be >= 0");
      } else if (key == "methods") {
        c.runs.clear();
        for (auto item : split_list(val)) c.runs.push_back(parse_run_spec(item));
        have_methods = true;
      } else if (key == "eta") {
        if (val == "theory") {
          c.step_rule = eta_mode::theory;
        } else if (val == "grid") {
          c.step_rule = eta_mode::grid;
        } else {
          c.step_rule = eta_mode::fixed;
          c.eta = to_double(key, val);
          if (!(c.eta > 0.0)) throw config_error("eta must be > 0");
        }
      } else if (key == "eta_grid") {
        c.eta_grid.clear();
        for (auto item : split_list(val)) c.eta_grid.push_back(to_double(key, item));
      } else if (key == "b") {
        c.b = to_uint(key, val);
      } else if (key == "B") {
        c.B = to_uint(key, val);
      } else if (key == "m") {
        c.m = to_uint(key, val);
      } else if (key == "epochs") {
        c.epochs = to_uint(key, val);
      } else if (key == "sgd_iterations") {
        c.sgd_iterations = to_uint(key, val);
      } else if (key == "seed") {
        c.seed = to_uint(key, val);
      } else if (key == "output_dir") {
        c.output_dir = std::filesystem::path(std::string(val));
      } else if (key == "stride") {
        c.trace_stride = to_uint(key, val);
      } else if (key == "output_rule") {
        if (val == "last")
          c.output = output_rule::last_iterate;
        else if (val == "random")
          c.output = output_rule::uniform_random_iterate;
        else
          throw config_error("output_rule must be 'last' or 'random'");
      } else if (key == "ifo_budget") {
        c.ifo_budget = to_uint(key, val);
      } else if (key == "threads") {
        c.threads = to_uint(key, val);
      } else {
        throw config_error("unknown key '" + std::string(key) + "'");
      }
    } catch (const config_error &) {
      throw;
    } catch (const std::invalid_argument &e) {
      throw config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_methods || c.runs.empty()) throw config_error("no methods configured");
  if (!c.seed) throw config_error("seed must be set explicitly");
  return c;
}

experiment_config load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config " + path.string());
  return parse_config(in);
}

dataset load_dataset(const experiment_config &config) {
  if (config.data_path) return parse_libsvm(*config.data_path, config.libsvm);
  try {
    return gen_synthetic(config.synthetic);
  } catch (const std::invalid_argument &e) {
    throw config_error(e.what());
  }
}

resolved_sizes resolve_sizes(const experiment_config &config, std::size_t n) {
  resolved_sizes r{};
  const std::size_t root = isqrt_ceil(n);
  r.b = config.b ? config.b : root;
  r.m = config.m ? config.m : root;
  r.B = config.B ? config.B : (n + 1) / 2;
  if (r.b > n || r.B > n)
    throw config_error("batch size exceeds the number of examples (" +
                       std::to_string(n) + ")");
  r.epochs = config.epochs;
  r.sgd_iterations =
      config.sgd_iterations ? config.sgd_iterations : config.epochs * ((n + r.b - 1) / r.b);
  return r;
}

Eigen::VectorXd initial_iterate(const experiment_config &config, std::size_t dim) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  if (config.x0_scale == 0.0) return x;
  rng_type rng(config.x0_seed);
  std::normal_distribution<double> gauss(0.0, config.x0_scale);
  for (auto &v : x) v = gauss(rng);
  return x;
}

optimizer_config make_optimizer_config(const experiment_config &config,
                                       const dataset &data,
                                       const loss_constants &constants,
                                       const run_spec &spec, double eta,
                                       std::uint64_t seed) {
  const std::size_t n = data.size();
  const resolved_sizes sz = resolve_sizes(config, n);
  const std::span<const double> G(constants.G.data(), n);
  const std::span<const double> L(constants.L.data(), n);

  auto scheme = [&](std::size_t batch, std::span<const double> weights) {
    if (spec.sampling == sampling_kind::uniform) return make_uniform(n, batch);
    return make_independent_optimal(weights, static_cast<double>(batch));
  };

  optimizer_config oc;
  oc.algorithm = spec.algorithm;
  oc.seed = seed;
  oc.output = config.output;
  oc.trace_stride = config.trace_stride;
  oc.ifo_budget = config.ifo_budget;
  oc.m = sz.m;
  if (config.x0_scale != 0.0) oc.x0 = initial_iterate(config, data.dim());
  try {
    if (spec.algorithm == method::prox_sgd) {
      oc.inner_scheme = scheme(sz.b, G);
      oc.epochs = sz.sgd_iterations;
    } else {
      oc.inner_scheme = scheme(sz.b, L);
      oc.epochs = sz.epochs;
      if (spec.algorithm == method::prox_spider) oc.outer_scheme = scheme(sz.B, G);
    }
  } catch (const std::exception &e) {
    throw config_error(std::string("cannot build sampling scheme: ") + e.what());
  }
  if (eta > 0.0) {
    oc.eta = eta;
  } else {
    const double Q = q_constant(*oc.inner_scheme, L);
    oc.eta = default_stepsize(spec.algorithm, constants.L_tilde, sz.m, Q);
  }
  return oc;
}

void write_trace_csv(const std::vector<trace_record> &trace, std::ostream &out) {
  out << "step,ifo,objective,residual,nnz,elapsed\n";
  for (const auto &r : trace)
    out << r.step << ',' << r.ifo << ',' << fmt17(r.objective) << ','
        << fmt17(r.residual) << ',' << r.nnz << ',' << fmt17(r.elapsed) << '\n';
}

experiment_summary run_experiment(const experiment_config &config) {
  const dataset data = load_dataset(config);
  return run_experiment(config, data);
}

experiment_summary run_experiment(const experiment_config &config,
                                  const dataset &data) {
  if (config.runs.empty()) throw config_error("no methods configured");
  if (!config.seed) throw config_error("seed must be set explicitly");
  const regularizer reg(config.reg_kind, config.lambda);
  const loss_constants constants = compute_loss_constants(data);
  const sigmoid_squared_loss problem(data);

  std::vector<double> etas(config.runs.size(), 0.0);
  if (config.step_rule == eta_mode::fixed) {
    std::fill(etas.begin(), etas.end(), config.eta);
  } else if (config.step_rule == eta_mode::grid) {
    const auto grid = grid_search(config, data, config.eta_grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!grid[k].best_eta)
        throw config_error("grid search: every step size diverged for " +
                           grid[k].spec.name());
      etas[k] = *grid[k].best_eta;
    }
  }

  experiment_summary summary;
  summary.runs.resize(config.runs.size());
  std::vector<optimizer_config> configs;
  for (std::size_t k = 0; k < config.runs.size(); ++k)
    configs.push_back(make_optimizer_config(config, data, constants, config.runs[k],
                                            etas[k], *config.seed ^ k));
  parallel_for(config.runs.size(), config.threads, [&](std::size_t k) {
    summary.runs[k] = {config.runs[k], configs[k].eta,
                       run_optimizer(problem, reg, configs[k])};
  });

  double lowest = std::numeric_limits<double>::infinity();
  for (const auto &r : summary.runs)
    for (const auto &rec : r.report.trace)
      if (std::isfinite(rec.objective)) lowest = std::min(lowest, rec.objective);
  summary.f_star = std::isfinite(lowest) ? std::max(0.0, lowest) : 0.0;

  std::filesystem::create_directories(config.output_dir);
  for (const auto &r : summary.runs) {
    std::ofstream out(config.output_dir / (r.spec.name() + ".csv"), std::ios::binary);
    if (!out) throw data_error("cannot write trace for " + r.spec.name());
    write_trace_csv(r.report.trace, out);
  }
  std::ofstream out(config.output_dir / "summary.csv", std::ios::binary);
  if (!out) throw data_error("cannot write summary");
  const resolved_sizes sz = resolve_sizes(config, data.size());
  out << "run,eta,b,B,m,total_ifo,final_objective,final_residual,final_nnz,"
         "diverged,f_star\n";
  for (const auto &r : summary.runs) {
    const auto &tr = r.report.trace;
    const double resid = tr.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : tr.back().residual;
    const auto nnz = static_cast<std::size_t>((r.report.x.array() != 0.0).count());
    out << r.spec.name() << ',' << fmt17(r.eta) << ',' << sz.b << ','
        << (r.spec.algorithm == method::prox_spider ? sz.B : 0) << ','
        << (r.spec.algorithm == method::prox_sgd ? 0 : sz.m) << ','
        << r.report.total_ifo << ',' << fmt17(final_objective(r.report, problem, reg))
        << ',' << fmt17(resid) << ',' << nnz << ',' << (r.report.diverged ? 1 : 0)
        << ',' << fmt17(summary.f_star) << '\n';
  }
  return summary;
}

std::vector<grid_result> grid_search(const experiment_config &config,
                                     const dataset &data,
                                     const std::vector<double> &etas) {
  if (etas.empty()) throw config_error("empty step-size grid");
  for (double e : etas)
    if (!(e > 0.0)) throw config_error("grid step sizes must be > 0");
  if (!config.seed) throw config_error("seed must be set explicitly");
  const regularizer reg(config.reg_kind, config.lambda);
  const loss_constants constants = compute_loss_constants(data);
  const sigmoid_squared_loss problem(data);

  std::vector<grid_result> results(config.runs.size());
  for (auto &r : results) r.entries.resize(etas.size());
  const std::size_t jobs = config.runs.size() * etas.size();
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const std::size_t k = job / etas.size(), e = job % etas.size();
    optimizer_config oc = make_optimizer_config(config, data, constants, config.runs[k],
                                                etas[e], *config.seed ^ k);
    oc.trace_stride = 0;
    const run_report rep = run_optimizer(problem, reg, oc);
    const double f = problem.value(rep.x) + reg_value(reg, rep.x);
    results[k].entries[e] = {etas[e], f, std::isfinite(f) && !rep.diverged};
  });

  for (std::size_t k = 0; k < config.runs.size(); ++k) {
    results[k].spec = config.runs[k];
    const grid_entry *best = nullptr;
    for (const auto &entry : results[k].entries) {
      if (!entry.finite) continue;
      if (!best || entry.final_objective < best->final_objective ||
          (entry.final_objective == best->final_objective && entry.eta < best->eta))
        best = &entry;
    }
    if (best) results[k].best_eta = best->eta;
  }

  std::filesystem::create_directories(config.output_dir);
  std::ofstream out(config.output_dir / "grid.csv", std::ios::binary);
  if (!out) throw data_error("cannot write grid report");
  out << "run,eta,final_objective,finite,selected\n";
  for (const auto &r : results)
    for (const auto &entry : r.entries)
      out << r.spec.name() << ',' << fmt17(entry.eta) << ','
          << fmt17(entry.final_objective) << ',' << (entry.finite ? 1 : 0) << ','
          << (r.best_eta && *r.best_eta == entry.eta ? 1 : 0) << '\n';
  return results;
}

}  // namespace asprox

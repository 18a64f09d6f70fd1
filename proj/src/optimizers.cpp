#include "asprox/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>

namespace asprox {

std::string_view to_string(method m) {
  switch (m) {
    case method::prox_sgd: return "prox_sgd";
    case method::prox_sarah: return "prox_sarah";
    case method::prox_spider: return "prox_spider";
  }
  return "?";
}

method parse_method(std::string_view name) {
  if (name == "sgd" || name == "prox_sgd") return method::prox_sgd;
  if (name == "sarah" || name == "prox_sarah") return method::prox_sarah;
  if (name == "spider" || name == "prox_spider") return method::prox_spider;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

double stationarity_residual(const Eigen::VectorXd &grad_next,
                             const Eigen::VectorXd &g_used,
                             const Eigen::VectorXd &x_next,
                             const Eigen::VectorXd &x_cur, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  const auto d = grad_next.size();
  if (g_used.size() != d || x_next.size() != d || x_cur.size() != d)
    throw std::invalid_argument("stationarity_residual: dimension mismatch");
  return (grad_next - g_used - (x_next - x_cur) / eta).norm();
}

namespace {

double weighted_sq_sum(const sampling_scheme &scheme, std::span<const double> c) {
  if (c.size() != scheme.n)
    throw std::invalid_argument("constant vector length must equal n");
  double s = 0.0;
  for (std::size_t i = 0; i < scheme.n; ++i)
    s += scheme.v[i] * c[i] * c[i] / scheme.p[i];
  const double nd = static_cast<double>(scheme.n);
  return s / (nd * nd);
}

std::size_t clamp_batch(double b, std::size_t n, const char *what) {
  const double up = std::ceil(b);
  if (!(up <= static_cast<double>(n))) {
    std::cerr << "warning: " << what << " batch size " << b
              << " exceeds n = " << n << "; clamped to n\n";
    return n;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(up));
}

}  // namespace

double q_constant(const sampling_scheme &scheme, std::span<const double> L) {
  return weighted_sq_sum(scheme, L);
}

double q_prime_constant(const sampling_scheme &outer_scheme,
                        std::span<const double> G) {
  return weighted_sq_sum(outer_scheme, G);
}

double default_stepsize(method m, double L_tilde, std::size_t inner_length,
                        double Q) {
  if (!(L_tilde > 0.0)) throw std::invalid_argument("L_tilde must be > 0");
  if (m == method::prox_sgd) return 1.0 / (4.0 * L_tilde);
  return 1.0 / (4.0 * L_tilde +
                2.0 * static_cast<double>(inner_length) * Q / L_tilde);
}

double sgd_c1(double L, double eta) {
  const double le = L * eta;
  return (1.0 + 4.0 * le - 2.0 * le * le) / (le - 2.0 * le * le);
}

double sgd_c2(double L, double eta) {
  const double le = L * eta;
  return (2.0 + 4.0 * le + 4.0 * le * le) / (eta - 2.0 * L * eta * eta);
}

std::size_t sgd_uniform_batch(std::span<const double> G, double c1, double eps) {
  const double sq = std::inner_product(G.begin(), G.end(), G.begin(), 0.0);
  const double n = static_cast<double>(G.size());
  return clamp_batch(2.0 * sq * c1 / (n * eps * eps), G.size(), "uniform");
}

std::size_t sgd_independent_batch(std::span<const double> G, double c1,
                                  double eps) {
  const double s = std::accumulate(G.begin(), G.end(), 0.0);
  const double n = static_cast<double>(G.size());
  return clamp_batch(2.0 * s * s * c1 / (n * n * eps * eps), G.size(),
                     "independent");
}

Eigen::VectorXd recursive_increment(const finite_sum &problem,
                                    std::span<const std::size_t> batch,
                                    const sampling_scheme &scheme,
                                    const Eigen::VectorXd &x_t,
                                    const Eigen::VectorXd &x_prev) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x_t.size());
  const double nd = static_cast<double>(scheme.n);
  for (std::size_t i : batch)
    problem.add_gradient_difference(i, x_t, x_prev, 1.0 / (nd * scheme.p[i]),
                                    out);
  return out;
}

Eigen::VectorXd batch_gradient(const finite_sum &problem,
                               std::span<const std::size_t> batch,
                               const sampling_scheme &scheme,
                               const Eigen::VectorXd &x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  const double nd = static_cast<double>(scheme.n);
  for (std::size_t i : batch)
    problem.add_gradient(i, x, 1.0 / (nd * scheme.p[i]), out);
  return out;
}

namespace {

enum stream_id : std::uint64_t { inner_stream = 1, outer_stream = 2, output_stream = 3 };

rng_type make_stream(std::uint64_t seed, stream_id id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return rng_type(seq);
}

void validate(const finite_sum &problem, const optimizer_config &c,
              method expected) {
  if (c.algorithm != expected)
    throw config_error("config method is " + std::string(to_string(c.algorithm)) +
                       ", called " + std::string(to_string(expected)));
  if (!(c.eta > 0.0)) throw config_error("step size must be > 0");
  if (!c.inner_scheme) throw config_error("inner sampling scheme not set");
  if (c.inner_scheme->n != problem.size())
    throw config_error("inner sampling scheme size differs from problem size");
  if (expected == method::prox_spider) {
    if (!c.outer_scheme) throw config_error("ProxSPIDER needs an outer scheme");
    if (c.outer_scheme->n != problem.size())
      throw config_error("outer sampling scheme size differs from problem size");
  }
  if (c.x0 && static_cast<std::size_t>(c.x0->size()) != problem.dim())
    throw config_error("initial iterate has wrong dimension");
}

/// Shared bookkeeping: IFO count, checkpoints, iterate selection.
class run_state {
 public:
  run_state(const finite_sum &problem, const regularizer &reg,
            const optimizer_config &config)
      : problem_(problem),
        reg_(reg),
        config_(config),
        output_rng_(make_stream(config.seed, output_stream)),
        start_(std::chrono::steady_clock::now()) {
    report_.config = config;
    report_.config.on_step = nullptr;
  }

  Eigen::VectorXd initial_iterate() const {
    return config_.x0 ? *config_.x0 : Eigen::VectorXd::Zero(problem_.dim());
  }

  void record_initial(const Eigen::VectorXd &x0) {
    if (config_.trace_stride == 0 || config_.epochs == 0) return;
    push(0, x0, std::numeric_limits<double>::quiet_NaN());
  }

  void charge(std::size_t calls) { ifo_ += calls; }
  std::uint64_t ifo() const { return ifo_; }

  bool budget_exhausted() const {
    return config_.ifo_budget != 0 && ifo_ >= config_.ifo_budget;
  }

  /// Offers x as a candidate for the uniformly sampled output iterate
  /// (reservoir sampling of size one over the visited candidates).
  void offer(std::size_t epoch, std::size_t step, const Eigen::VectorXd &x) {
    if (config_.output != output_rule::uniform_random_iterate) return;
    ++candidates_;
    std::uniform_int_distribution<std::uint64_t> pick(0, candidates_ - 1);
    if (pick(output_rng_) == 0) {
      selected_ = x;
      report_.selected_epoch = epoch;
      report_.selected_step = step;
    }
  }

  /// Handles one completed update x_cur -> x_next using estimator g.
  /// Returns false when the iterate is no longer finite.
  bool after_step(std::size_t epoch, std::size_t t, const Eigen::VectorXd &x_cur,
                  const Eigen::VectorXd &x_next, const Eigen::VectorXd &g) {
    ++global_step_;
    last_epoch_ = epoch;
    last_step_ = t;
    if (config_.on_step) config_.on_step(step_view{epoch, t, x_cur, x_next, g, ifo_});
    const bool finite = x_next.allFinite();
    if (config_.trace_stride != 0 &&
        (!finite || global_step_ % config_.trace_stride == 0)) {
      const Eigen::VectorXd grad_next = problem_.gradient(x_next);
      push(global_step_, x_next,
           stationarity_residual(grad_next, g, x_next, x_cur, config_.eta));
    }
    if (!finite) report_.diverged = true;
    return finite;
  }

  run_report finish(Eigen::VectorXd last) {
    report_.total_ifo = ifo_;
    if (config_.output == output_rule::uniform_random_iterate && candidates_ > 0) {
      report_.x = std::move(selected_);
    } else {
      report_.x = std::move(last);
      report_.selected_epoch = last_epoch_;
      report_.selected_step = last_step_ + (global_step_ > 0 ? 1 : 0);
    }
    return std::move(report_);
  }

 private:
  void push(std::size_t step, const Eigen::VectorXd &x, double residual) {
    trace_record rec;
    rec.step = step;
    rec.ifo = ifo_;
    rec.objective = problem_.value(x) + reg_value(reg_, x);
    rec.residual = residual;
    rec.nnz = static_cast<std::size_t>((x.array() != 0.0).count());
    rec.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    report_.trace.push_back(rec);
  }

  const finite_sum &problem_;
  const regularizer &reg_;
  const optimizer_config &config_;
  rng_type output_rng_;
  std::chrono::steady_clock::time_point start_;
  run_report report_;
  Eigen::VectorXd selected_;
  std::uint64_t ifo_ = 0;
  std::uint64_t candidates_ = 0;
  std::size_t global_step_ = 0;
  std::size_t last_epoch_ = 0;
  std::size_t last_step_ = 0;
};

run_report run_recursive(const finite_sum &problem, const regularizer &reg,
                         const optimizer_config &config, bool spider) {
  run_state state(problem, reg, config);
  rng_type inner_rng = make_stream(config.seed, inner_stream);
  rng_type outer_rng = make_stream(config.seed, outer_stream);
  const sampling_scheme &inner = *config.inner_scheme;
  const double eta = config.eta;
  const std::size_t n = problem.size();

  Eigen::VectorXd snapshot = state.initial_iterate();
  state.record_initial(snapshot);

  for (std::size_t j = 1; j <= config.epochs; ++j) {
    if (state.budget_exhausted()) break;

    // x_0 = snapshot; V_0 from the full set (SARAH) or an outer batch (SPIDER).
    Eigen::VectorXd x_prev = snapshot;
    Eigen::VectorXd V;
    if (spider) {
      const auto batch = draw(*config.outer_scheme, outer_rng);
      V = batch_gradient(problem, batch, *config.outer_scheme, x_prev);
      state.charge(batch.size());
    } else {
      V = Eigen::VectorXd::Zero(x_prev.size());
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) problem.add_gradient(i, x_prev, inv_n, V);
      state.charge(n);
    }

    Eigen::VectorXd x_cur = x_prev;  // x_1 = x_0
    const std::size_t inner_steps = std::max<std::size_t>(config.m, 1);
    bool finite = true;
    for (std::size_t t = 1; t <= inner_steps; ++t) {
      if (t > 1 && state.budget_exhausted()) break;
      state.offer(j, t, x_cur);
      if (config.m > 0) {
        const auto batch = draw(inner, inner_rng);
        V += recursive_increment(problem, batch, inner, x_cur, x_prev);
        state.charge(batch.size());
      }
      Eigen::VectorXd x_next = prox(reg, x_cur - eta * V, eta);
      finite = state.after_step(j, t, x_cur, x_next, V);
      x_prev = std::move(x_cur);
      x_cur = std::move(x_next);
      if (!finite) break;
    }
    snapshot = std::move(x_cur);
    if (!finite) break;
  }
  return state.finish(std::move(snapshot));
}

}  // namespace

run_report prox_sgd_as(const finite_sum &problem, const regularizer &reg,
                       const optimizer_config &config) {
  validate(problem, config, method::prox_sgd);
  run_state state(problem, reg, config);
  rng_type rng = make_stream(config.seed, inner_stream);
  const sampling_scheme &scheme = *config.inner_scheme;

  Eigen::VectorXd x = state.initial_iterate();
  state.record_initial(x);
  for (std::size_t t = 1; t <= config.epochs; ++t) {
    if (state.budget_exhausted()) break;
    state.offer(0, t, x);
    const auto batch = draw(scheme, rng);
    const Eigen::VectorXd g = batch_gradient(problem, batch, scheme, x);
    state.charge(batch.size());
    Eigen::VectorXd x_next = prox(reg, x - config.eta * g, config.eta);
    const bool finite = state.after_step(0, t, x, x_next, g);
    x = std::move(x_next);
    if (!finite) break;
  }
  return state.finish(std::move(x));
}

run_report prox_sarah_as(const finite_sum &problem, const regularizer &reg,
                         const optimizer_config &config) {
  validate(problem, config, method::prox_sarah);
  return run_recursive(problem, reg, config, false);
}

run_report prox_spider_as(const finite_sum &problem, const regularizer &reg,
                          const optimizer_config &config) {
  validate(problem, config, method::prox_spider);
  return run_recursive(problem, reg, config, true);
}

run_report run_optimizer(const finite_sum &problem, const regularizer &reg,
                         const optimizer_config &config) {
  switch (config.algorithm) {
    case method::prox_sgd: return prox_sgd_as(problem, reg, config);
    case method::prox_sarah: return prox_sarah_as(problem, reg, config);
    case method::prox_spider: return prox_spider_as(problem, reg, config);
  }
  throw config_error("unknown method");
}

}  // namespace asprox

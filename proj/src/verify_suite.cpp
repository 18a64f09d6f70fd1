#include "asprox/verify_suite.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "asprox/optimizers.hpp"
#include "asprox/problem.hpp"
#include "asprox/sampling.hpp"
#include "asprox/synthetic.hpp"
#include "asprox/verification.hpp"

namespace asprox {

namespace {

using check_fn = std::function<check_result()>;

check_result guarded(const std::string &name, const check_fn &fn) {
  try {
    check_result r = fn();
    r.name = name;
    return r;
  } catch (const std::exception &e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

check_result prox_optimality(const verify_options &opts, regularizer_kind kind) {
  rng_type rng(opts.seed + static_cast<std::uint64_t>(kind));
  std::uniform_real_distribution<double> vdist(-3.0, 3.0), tdist(0.0, 2.0);
  double worst = -std::numeric_limits<double>::infinity();
  constexpr int coords = 150;
  for (int c = 0; c < coords; ++c) {
    const double v = vdist(rng), tau = tdist(rng);
    const double y = opts.prox(kind, tau, v);
    const double yo = prox_oracle_1d(kind, tau, v);
    worst = std::max(worst, prox_objective(kind, tau, y, v) -
                                prox_objective(kind, tau, yo, v));
  }
  return {"", worst <= 1e-6,
          "max(closed - oracle) = " + num(worst) + " over " + std::to_string(coords)};
}

check_result l0_threshold(const verify_options &opts) {
  const double taus[] = {0.01, 0.5, 1.0, 3.7};
  for (double tau : taus) {
    const double t = std::sqrt(2.0 * tau);
    for (double sign : {-1.0, 1.0}) {
      if (opts.prox(regularizer_kind::l0, tau, sign * (t + 1e-9)) != sign * (t + 1e-9))
        return {"", false, "value just above sqrt(2 tau) not kept, tau=" + num(tau)};
      if (opts.prox(regularizer_kind::l0, tau, sign * (t - 1e-9)) != 0.0)
        return {"", false, "value just below sqrt(2 tau) not zeroed, tau=" + num(tau)};
    }
  }
  return {"", true, "exact at sqrt(2 tau) +- 1e-9"};
}

check_result gradient_fd(const verify_options &opts) {
  synthetic_spec spec;
  spec.n = 20;
  spec.d = 10;
  spec.sparsity = 0.3;
  spec.seed = opts.seed;
  const dataset data = gen_synthetic(spec);
  rng_type rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int probe = 0; probe < 200; ++probe) {
    const std::size_t i = static_cast<std::size_t>(probe) % data.size();
    Eigen::VectorXd x(data.dim());
    for (auto &xj : x) xj = gauss(rng);
    const Eigen::VectorXd g = grad_single(data, i, x);
    const Eigen::VectorXd fd = finite_diff_gradient(
        [&](const Eigen::VectorXd &z) { return loss_single(data, i, z); }, x);
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
  }
  return {"", worst <= default_fd_rel_tol, "max rel err = " + num(worst)};
}

check_result bound_validity(const verify_options &opts) {
  synthetic_spec spec;
  spec.n = 50;
  spec.d = 10;
  spec.sparsity = 0.5;
  spec.heterogeneity = 5.0;
  spec.seed = opts.seed + 1;
  const dataset data = gen_synthetic(spec);
  const loss_constants c = compute_loss_constants(data);
  rng_type rng(opts.seed + 2);
  std::normal_distribution<double> gauss(0.0, 2.0);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  int g_viol = 0, l_viol = 0;
  Eigen::VectorXd x(data.dim()), x2(data.dim());
  for (int probe = 0; probe < 20000; ++probe) {
    const std::size_t i = pick(rng);
    for (auto &xj : x) xj = gauss(rng);
    for (auto &xj : x2) xj = gauss(rng);
    const Eigen::VectorXd g1 = grad_single(data, i, x);
    if (g1.norm() > c.G[i] * (1.0 + 1e-12)) ++g_viol;
    const Eigen::VectorXd g2 = grad_single(data, i, x2);
    if ((g1 - g2).norm() > c.L[i] * (x - x2).norm() * (1.0 + 1e-12) + 1e-15) ++l_viol;
  }
  return {"", g_viol == 0 && l_viol == 0,
          std::to_string(g_viol) + " G violations, " + std::to_string(l_viol) +
              " L violations in 20000 probes"};
}

check_result pairwise_enumeration(const verify_options &) {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::size_t b = 1; b <= n; ++b) {
      const auto u = make_uniform(n, b);
      worst = std::max(worst, (pairwise_matrix(u) - enumerate_pairwise(u)).cwiseAbs().maxCoeff());
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = 0.05 + 0.9 * static_cast<double>(i) / static_cast<double>(n);
    const auto ind = make_independent(p);
    worst = std::max(worst, (pairwise_matrix(ind) - enumerate_pairwise(ind)).cwiseAbs().maxCoeff());
  }
  return {"", worst <= 1e-12, "max |closed - enumerated| = " + num(worst)};
}

check_result pv_inequality(const verify_options &opts) {
  rng_type rng(opts.seed + 3);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t n = 2; n <= 32; ++n) {
    std::vector<double> weights(n);
    for (auto &x : weights) x = w(rng);
    for (std::size_t b = 1; b <= n; ++b) {
      worst = std::min(worst, pv_min_eigenvalue(make_uniform(n, b)));
      worst = std::min(worst, pv_min_eigenvalue(
                                  make_independent_optimal(weights, static_cast<double>(b))));
    }
  }
  return {"", worst >= -1e-10, "smallest eigenvalue = " + num(worst)};
}

check_result kkt_optimality(const verify_options &opts) {
  rng_type rng(opts.seed + 4);
  std::uniform_real_distribution<double> w(0.1, 10.0), unit(0.0, 1.0);
  int losses = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 12;
    const double b = 1.0 + 10.0 * unit(rng);
    std::vector<double> weights(n);
    for (auto &x : weights) x = w(rng) * (unit(rng) < 0.2 ? 10.0 : 1.0);
    const auto s = make_independent_optimal(weights, b);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += weights[i] * weights[i] / s.p[i];
    for (int r = 0; r < 50; ++r) {
      // Random feasible point: convex combination with the all-b/n vector.
      std::vector<double> q(n);
      double sum = 0.0;
      for (auto &x : q) sum += (x = unit(rng) + 1e-3);
      bool ok = true;
      for (auto &x : q) {
        x = 0.5 * (x * b / sum) + 0.5 * b / static_cast<double>(n);
        ok = ok && x <= 1.0;
      }
      if (!ok) continue;
      double other = 0.0;
      for (std::size_t i = 0; i < n; ++i) other += weights[i] * weights[i] / q[i];
      if (other < obj - 1e-9) ++losses;
    }
  }
  return {"", losses == 0, std::to_string(losses) + " random feasible points beat KKT"};
}

check_result estimator_statistics(const verify_options &opts) {
  constexpr std::size_t n = 16, d = 4;
  rng_type rng(opts.seed + 5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd xi(d, n);
  std::vector<double> w(n), sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 + static_cast<double>(i);
    for (std::size_t r = 0; r < d; ++r) xi(r, i) = w[i] * gauss(rng);
    sq[i] = xi.col(i).squaredNorm();
  }
  const Eigen::VectorXd mean = xi.rowwise().mean();
  std::ostringstream detail;
  bool ok = true;
  for (const auto &s : {make_uniform(n, 4), make_independent_optimal(w, 4.0)}) {
    const auto st = monte_carlo_estimator(s, xi, 50000, opts.seed + 6);
    const double z = ((st.mean_estimate - mean).cwiseAbs().array() /
                      st.mean_std_error.array().max(1e-300)).maxCoeff();
    const double bound = variance_bound(s, sq);
    const bool pass = z <= 3.0 && st.deviation_second_moment <= bound * 1.02 + 3.0 * st.std_error;
    ok = ok && pass;
    detail << to_string(s.kind) << ": z=" << num(z) << " E|dev|^2=" << num(st.deviation_second_moment)
           << " bound=" << num(bound) << "; ";
  }
  return {"", ok, detail.str()};
}

check_result sarah_exactness(const verify_options &opts) {
  synthetic_spec spec;
  spec.n = 30;
  spec.d = 8;
  spec.sparsity = 0.25;
  spec.seed = opts.seed + 7;
  const dataset data = gen_synthetic(spec);
  const sigmoid_squared_loss problem(data);
  optimizer_config c;
  c.algorithm = method::prox_sarah;
  c.inner_scheme = make_uniform(data.size(), data.size());
  c.m = 25;
  c.epochs = 2;
  c.eta = default_stepsize(method::prox_sarah, compute_loss_constants(data).L_tilde, c.m, 0.0);
  c.trace_stride = 0;
  double worst = 0.0;
  c.on_step = [&](const step_view &s) {
    worst = std::max(worst, (s.g - grad_full(data, s.x_cur)).norm());
  };
  prox_sarah_as(problem, regularizer(regularizer_kind::l_half, 0.01), c);
  return {"", worst <= 1e-12, "max |V_t - grad f(x_t)| = " + num(worst)};
}

check_result stepsize_identity(const verify_options &) {
  const std::vector<double> L = {1.0, 2.0, 3.0, 4.0};
  const auto s = make_independent({0.2, 0.4, 0.6, 0.8});
  double direct = 0.0;
  for (std::size_t i = 0; i < 4; ++i) direct += (1.0 - s.p[i]) * L[i] * L[i] / (s.p[i] * 16.0);
  const double Q = q_constant(s, L);
  const double Lt = 2.5;
  const double eta = default_stepsize(method::prox_sarah, Lt, 5, Q);
  const double lhs = 0.5 / eta, rhs = 2.0 * Lt + 5.0 * Q / Lt;
  const bool ok = std::abs(Q - direct) <= 1e-12 && std::abs(lhs - rhs) <= 1e-12 * rhs;
  return {"", ok, "Q=" + num(Q) + " 1/(2 eta)=" + num(lhs) + " vs " + num(rhs)};
}

}  // namespace

std::vector<check_result> run_verification_suite(const verify_options &opts) {
  std::vector<std::pair<std::string, check_fn>> checks = {
      {"prox_l0_optimality", [&] { return prox_optimality(opts, regularizer_kind::l0); }},
      {"prox_lhalf_optimality", [&] { return prox_optimality(opts, regularizer_kind::l_half); }},
      {"prox_l1_optimality", [&] { return prox_optimality(opts, regularizer_kind::l1); }},
      {"prox_l0_threshold", [&] { return l0_threshold(opts); }},
      {"gradient_finite_difference", [&] { return gradient_fd(opts); }},
      {"gradient_bounds_G_L", [&] { return bound_validity(opts); }},
      {"pairwise_enumeration", [&] { return pairwise_enumeration(opts); }},
      {"pv_inequality", [&] { return pv_inequality(opts); }},
      {"kkt_optimal_probabilities", [&] { return kkt_optimality(opts); }},
      {"estimator_unbiased_variance", [&] { return estimator_statistics(opts); }},
      {"sarah_full_batch_exactness", [&] { return sarah_exactness(opts); }},
      {"stepsize_identity", [&] { return stepsize_identity(opts); }},
  };
  std::vector<check_result> results;
  for (const auto &[name, fn] : checks) results.push_back(guarded(name, fn));
  return results;
}

bool print_verification_table(const std::vector<check_result> &results,
                              std::ostream &out) {
  bool all = true;
  for (const auto &r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(30) << r.name
        << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "verification FAILED") << '\n';
  return all;
}

}  // namespace asprox

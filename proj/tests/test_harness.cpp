#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "asprox/experiment.hpp"
#include "asprox/libsvm.hpp"
#include "asprox/synthetic.hpp"

using namespace asprox;
namespace fs = std::filesystem;

namespace {

dataset parse(const std::string &text, libsvm_options opts = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, opts);
}

std::size_t error_line(const std::string &text) {
  try {
    parse(text);
  } catch (const data_error &e) {
    return e.line();
  }
  return 0;
}

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("asprox_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Drops the trailing elapsed column from every line.
std::string without_elapsed(const std::string &csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

experiment_config small_config(const fs::path &out) {
  std::istringstream in(
      "synthetic.n = 60\n"
      "synthetic.d = 15\n"
      "synthetic.seed = 4\n"
      "methods = sarah:U, spider:I\n"
      "epochs = 3\n"
      "seed = 11\n"
      "threads = 2\n");
  auto c = parse_config(in);
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("LibSVM parsing examples") {
  const auto d = parse("+1 1:0.5 3:2\n");
  CHECK(d.size() == 1);
  CHECK(d.dim() == 3);
  CHECK(d.label(0) == 1);
  CHECK(d.row(0) == sparse_row{{0, 0.5}, {2, 2.0}});

  const auto z = parse("-1\n+1 2:1\n");
  CHECK(z.row(0).empty());
  CHECK(z.label(0) == -1);

  const auto unordered = parse("# header\n\n1 4:1.0 2:3 # trailing\n");
  CHECK(unordered.row(0) == sparse_row{{1, 3.0}, {3, 1.0}});
  CHECK(parse("-1 2:1\n", {.dim = 10}).dim() == 10);
}

TEST_CASE("LibSVM label mappings") {
  CHECK(parse("0 1:1\n1 1:2\n", {.labels = label_mapping::zero_one}).labels() ==
        std::vector<int>{-1, 1});
  CHECK(parse("2 1:1\n1 1:2\n", {.labels = label_mapping::one_two}).labels() ==
        std::vector<int>{1, -1});
  CHECK_THROWS_AS(parse("0 1:1\n"), data_error);
  CHECK_THROWS_AS(parse("3 1:1\n", {.labels = label_mapping::one_two}), data_error);
  CHECK(parse_label_mapping("01") == label_mapping::zero_one);
}

TEST_CASE("LibSVM errors carry line numbers") {
  CHECK_THROWS_AS(parse(""), data_error);
  CHECK_THROWS_AS(parse("# only comments\n\n"), data_error);
  CHECK(error_line("+1 1:1\n+1 0:1\n") == 2);
  CHECK(error_line("+1 1:1\n-1 2:1\n+1 x:1\n") == 3);
  CHECK(error_line("+1 1:abc\n") == 1);
  CHECK(error_line("+1 1:1 1:2\n") == 1);
  CHECK(error_line("abc 1:1\n") == 1);
  CHECK_THROWS_AS(parse("+1 5:1\n", {.dim = 3}), data_error);
}

TEST_CASE("LibSVM write/parse round trip is exact") {
  const auto data = gen_synthetic({.n = 40, .d = 30, .sparsity = 0.7, .seed = 5});
  std::ostringstream out;
  write_libsvm(data, out);
  const auto back = parse(out.str(), {.dim = data.dim()});
  CHECK(back == data);
}

TEST_CASE("synthetic generator") {
  const synthetic_spec spec{.n = 100, .d = 20, .heterogeneity = 10.0, .seed = 8};
  const auto a = gen_synthetic(spec);
  CHECK(a == gen_synthetic(spec));
  CHECK(a.size() == 100);
  CHECK(a.dim() == 20);
  const auto c = compute_loss_constants(a);
  CHECK(cauchy_ratio({c.G.data(), 100}) > 1.5);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lo = std::min(lo, a.row_norm(i));
    hi = std::max(hi, a.row_norm(i));
    CHECK(a.row(i).size() == 2);
  }
  CHECK(lo >= 1.0 - 1e-12);
  CHECK(hi <= 10.0 + 1e-12);
  CHECK(hi / lo > 5.0);

  const auto flat = gen_synthetic({.n = 50, .d = 10, .heterogeneity = 1.0, .seed = 2});
  const auto cf = compute_loss_constants(flat);
  const auto s = make_independent_optimal({cf.G.data(), 50}, 5.0);
  for (double p : s.p) CHECK(p == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(gen_synthetic({.n = 0}), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic({.sparsity = 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic({.heterogeneity = 0.5}), std::invalid_argument);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "data = /tmp/x.svm   # trailing comment\n"
      "labels = 01\n"
      "regularizer = l0\n"
      "lambda = 0.5\n"
      "methods = sgd:U, sarah:I,spider:U\n"
      "eta = 0.01\n"
      "b = 4\nB = 9\nm = 3\nepochs = 7\nseed = 42\nstride = 5\n"
      "output_rule = random\nifo_budget = 1000\nthreads = 3\n"
      "x0_scale = 0.1\nx0_seed = 6\n");
  const auto c = parse_config(in);
  CHECK(c.data_path == fs::path("/tmp/x.svm"));
  CHECK(c.libsvm.labels == label_mapping::zero_one);
  CHECK(c.reg_kind == regularizer_kind::l0);
  CHECK(c.lambda == 0.5);
  REQUIRE(c.runs.size() == 3);
  CHECK(c.runs[1] == run_spec{method::prox_sarah, sampling_kind::independent});
  CHECK(c.step_rule == eta_mode::fixed);
  CHECK(c.eta == 0.01);
  CHECK(c.b == 4);
  CHECK(c.B == 9);
  CHECK(c.m == 3);
  CHECK(c.epochs == 7);
  CHECK(c.seed == 42u);
  CHECK(c.trace_stride == 5);
  CHECK(c.output == output_rule::uniform_random_iterate);
  CHECK(c.ifo_budget == 1000);
  CHECK(c.threads == 3);
  CHECK(c.x0_scale == 0.1);

  auto bad = [](const std::string &text) {
    std::istringstream s(text);
    return parse_config(s);
  };
  CHECK_THROWS_AS(bad("methods = sarah:U\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\nmethods = sarah:X\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\nmethods = sarah:U\ncolour = red\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\nmethods = sarah:U\nlambda = -1\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\nmethods = sarah:U\nb = two\n"), config_error);
  CHECK_THROWS_AS(bad("seed = 1\nmethods = sarah:U\nno equals sign\n"), config_error);
}

TEST_CASE("defaults resolve from n") {
  experiment_config c;
  const auto s = resolve_sizes(c, 500);
  CHECK(s.b == 23);
  CHECK(s.m == 23);
  CHECK(s.B == 250);
  CHECK(s.epochs == 30);
  CHECK(s.sgd_iterations == 30 * 22);
}

TEST_CASE("initial iterate") {
  experiment_config c;
  CHECK(initial_iterate(c, 4).norm() == 0.0);
  c.x0_scale = 0.5;
  c.x0_seed = 3;
  const auto a = initial_iterate(c, 4);
  CHECK(a.norm() > 0.0);
  CHECK(a == initial_iterate(c, 4));
}

TEST_CASE("run_experiment writes one trace per run plus a summary") {
  const auto dir = scratch_dir("run");
  const auto cfg = small_config(dir);
  const auto summary = run_experiment(cfg);
  REQUIRE(summary.runs.size() == 2);
  CHECK(fs::exists(dir / "prox_sarah_U.csv"));
  CHECK(fs::exists(dir / "prox_spider_I.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 3);

  const std::string trace = slurp(dir / "prox_sarah_U.csv");
  CHECK(trace.rfind("step,ifo,objective,residual,nnz,elapsed\n", 0) == 0);
  CHECK(trace.find('\r') == std::string::npos);
  CHECK(slurp(dir / "summary.csv").rfind("run,eta,", 0) == 0);

  double lowest = INFINITY;
  for (const auto &r : summary.runs)
    for (const auto &t : r.report.trace) lowest = std::min(lowest, t.objective);
  CHECK(summary.f_star == std::max(0.0, lowest));
  for (const auto &r : summary.runs)
    CHECK(r.report.trace.back().objective <= r.report.trace.front().objective);
}

TEST_CASE("reruns produce identical CSVs apart from elapsed") {
  const auto d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  run_experiment(small_config(d1));
  auto c2 = small_config(d2);
  c2.threads = 1;
  run_experiment(c2);
  for (const char *name : {"prox_sarah_U.csv", "prox_spider_I.csv"})
    CHECK(without_elapsed(slurp(d1 / name)) == without_elapsed(slurp(d2 / name)));
  CHECK(slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv"));
}

TEST_CASE("grid search") {
  const auto dir = scratch_dir("grid");
  auto cfg = small_config(dir);
  const auto data = load_dataset(cfg);

  const auto single = grid_search(cfg, data, {0.05});
  for (const auto &r : single) {
    REQUIRE(r.best_eta);
    CHECK(*r.best_eta == 0.05);
  }

  const auto six = grid_search(cfg, data, default_eta_grid);
  for (const auto &r : six) {
    CHECK(r.entries.size() == 6);
    CHECK(r.best_eta);
  }
  CHECK(fs::exists(dir / "grid.csv"));

  // With lambda > 0 an infinite step just thresholds to zero; without a
  // regularizer it overflows.
  cfg.lambda = 0.0;
  const auto with_inf = grid_search(cfg, data, {INFINITY, 0.01});
  for (const auto &r : with_inf) {
    CHECK_FALSE(r.entries[0].finite);
    REQUIRE(r.best_eta);
    CHECK(*r.best_eta == 0.01);
  }
  const auto none = grid_search(cfg, data, {INFINITY});
  for (const auto &r : none) CHECK_FALSE(r.best_eta);
}

TEST_CASE("grid ties go to the smaller step") {
  const auto dir = scratch_dir("tie");
  auto cfg = small_config(dir);
  const auto data = load_dataset(cfg);
  const auto r = grid_search(cfg, data, {0.02, 0.02 * (1 + 1e-17), 0.02});
  for (const auto &g : r) CHECK(*g.best_eta == 0.02);
}

TEST_CASE("command-line exit codes") {
  const char *cli = std::getenv("ASPROX_CLI");
  if (!cli) return;
  const auto dir = scratch_dir("cli");
  auto run = [&](const std::string &args) {
    const std::string cmd =
        std::string(cli) + " " + args + " >" + (dir / "log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const auto data_path = dir / "d.svm";
  CHECK(run("gen-data --n 40 --d 10 --het 4 --seed 3 --out " + data_path.string()) == 0);
  CHECK(parse_libsvm(data_path).size() == 40);

  const auto cfg_path = dir / "c.cfg";
  std::ofstream(cfg_path) << "data = " << data_path.string() << "\nmethods = sarah:I\n"
                          << "epochs = 2\nseed = 1\noutput_dir = " << (dir / "out").string()
                          << '\n';
  CHECK(run("run --config " + cfg_path.string()) == 0);
  CHECK(fs::exists(dir / "out" / "prox_sarah_I.csv"));
  CHECK(run("grid --config " + cfg_path.string() + " --etas 0.1,0.01") == 0);

  std::ofstream(dir / "bad.cfg") << "methods = sarah:I\n";
  CHECK(run("run --config " + (dir / "bad.cfg").string()) == 1);
  CHECK(run("frobnicate") == 1);

  std::ofstream(dir / "broken.svm") << "+1 1:1\n+1 banana\n";
  std::ofstream(dir / "broken.cfg") << "data = " << (dir / "broken.svm").string()
                                    << "\nmethods = sarah:I\nseed = 1\n";
  CHECK(run("run --config " + (dir / "broken.cfg").string()) == 2);
}

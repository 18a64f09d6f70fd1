// Command-line front end: run experiments, grid-search step sizes, generate
// synthetic LibSVM data and run the oracle suite.
//
// Exit codes: 0 success, 1 configuration error, 2 data error,
// 3 verification failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asprox/experiment.hpp"
#include "asprox/libsvm.hpp"
#include "asprox/synthetic.hpp"
#include "asprox/verify_suite.hpp"

namespace {

enum exit_code { ok = 0, config_failure = 1, data_failure = 2, verify_failure = 3 };

int cmd_run(const std::string &config_path) {
  const auto config = asprox::load_config(config_path);
  const auto summary = asprox::run_experiment(config);
  for (const auto &r : summary.runs) {
    const auto &tr = r.report.trace;
    std::cout << r.spec.name() << ": eta=" << r.eta << " ifo=" << r.report.total_ifo;
    if (!tr.empty())
      std::cout << " F=" << tr.back().objective << " residual=" << tr.back().residual
                << " nnz=" << tr.back().nnz;
    std::cout << '\n';
  }
  std::cout << "F* = " << summary.f_star << "; traces in " << config.output_dir.string()
            << '\n';
  return ok;
}

int cmd_grid(const std::string &config_path, const std::vector<double> &etas) {
  const auto config = asprox::load_config(config_path);
  const auto data = asprox::load_dataset(config);
  const auto results =
      asprox::grid_search(config, data, etas.empty() ? config.eta_grid : etas);
  for (const auto &r : results) {
    std::cout << r.spec.name() << ':';
    for (const auto &e : r.entries)
      std::cout << "  eta=" << e.eta << " F=" << e.final_objective
                << (e.finite ? "" : " (non-finite)");
    if (r.best_eta)
      std::cout << "  -> best eta=" << *r.best_eta << '\n';
    else
      std::cout << "  -> no finite run\n";
  }
  return ok;
}

int cmd_gen(const asprox::synthetic_spec &spec, const std::string &out) {
  asprox::dataset data = [&] {
    try {
      return asprox::gen_synthetic(spec);
    } catch (const std::invalid_argument &e) {
      throw asprox::config_error(e.what());
    }
  }();
  asprox::write_libsvm(data, std::filesystem::path(out));
  std::cout << "wrote " << data.size() << " examples, d=" << data.dim() << " to " << out
            << '\n';
  return ok;
}

int cmd_verify() {
  const auto results = asprox::run_verification_suite();
  return asprox::print_verification_table(results, std::cout) ? ok : verify_failure;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Arbitrary-sampling stochastic proximal methods"};
  app.require_subcommand(1);

  std::string config_path;
  auto *run = app.add_subcommand("run", "Run every configured method and write traces");
  run->add_option("--config", config_path, "Experiment config file")->required();

  std::string grid_config;
  std::vector<double> etas;
  auto *grid = app.add_subcommand("grid", "Grid-search the step size per method");
  grid->add_option("--config", grid_config, "Experiment config file")->required();
  grid->add_option("--etas", etas, "Step sizes (default: 10,1,0.1,0.01,0.001,0.0001)")
      ->delimiter(',');

  asprox::synthetic_spec spec;
  std::string out_path;
  auto *gen = app.add_subcommand("gen-data", "Write a synthetic LibSVM dataset");
  gen->add_option("--n", spec.n, "Examples")->capture_default_str();
  gen->add_option("--d", spec.d, "Features")->capture_default_str();
  gen->add_option("--het", spec.heterogeneity, "Row-norm spread h >= 1")->capture_default_str();
  gen->add_option("--scale", spec.scale, "Smallest row norm")->capture_default_str();
  gen->add_option("--sparsity", spec.sparsity, "Fraction of zero entries")->capture_default_str();
  gen->add_option("--noise", spec.label_noise, "Label flip rate")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Random seed")->required();
  gen->add_option("--out", out_path, "Output path")->required();

  auto *verify = app.add_subcommand("verify", "Run the oracle verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_failure;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*grid) return cmd_grid(grid_config, etas);
    if (*gen) return cmd_gen(spec, out_path);
    if (*verify) return cmd_verify();
  } catch (const asprox::config_error &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return config_failure;
  } catch (const asprox::data_error &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return data_failure;
  } catch (const std::invalid_argument &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return data_failure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_failure;
  }
  return ok;
}

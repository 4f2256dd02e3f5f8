#include "config.hpp"
#include "experiments.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"fpaccel-exp: accelerated fixed-point experiment driver"};

  expcli::CliOverrides overrides;
  std::optional<std::string> config_path;

  app.add_option("--experiment", overrides.experiment,
                 "one of: linear-bound, linear-rate, scalar-tight, tme-run, tme-jacobian, "
                 "tme-compare, w0-table");
  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  app.add_option("--seed-count", overrides.seed_count, "use seeds 1..N");
  app.add_option("--out", overrides.out, "output directory for CSV tables and summary.json");
  app.add_option("--method", overrides.methods,
                 "method spec, repeatable: fp, aa<m>[:c0=<v>][:beta=<v>]");
  app.add_option("--m", overrides.m, "shorthand for --method aa<m>");
  app.add_option("--c0", overrides.c0, "coefficient bound applied to accelerated methods");
  app.add_option("--beta", overrides.beta, "damping applied to accelerated methods");
  app.add_option("--tol", overrides.tol, "residual tolerance (default 1e-12)");
  app.add_option("--max-iter", overrides.max_iter, "iteration cap per run");
  app.add_option("--p", overrides.p, "ambient dimension for the first data model");
  app.add_option("--n", overrides.n, "sample count for the first data model");
  app.add_option("--model", overrides.model, "data model, 1 or 2");

  CLI11_PARSE(app, argc, argv);

  try {
    const expcli::ExperimentConfig cfg = expcli::load_config(config_path, overrides);
    std::filesystem::create_directories(cfg.out_dir);
    const int violations = expcli::run_experiment(cfg);
    if (violations > 0) {
      std::cerr << cfg.experiment << ": " << violations << " invariant violation(s)\n";
      return 1;
    }
    std::cout << cfg.experiment << ": ok\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "hcd_cli/commands.hpp"

namespace hcd::cli {

int run(int argc, const char* const* argv) {
  CLI::App app{"Homotopy coordinate descent for l0-regularized sparse coding", "hcd"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string dist = "normal";
  std::string pgm, input, manifest;

  app.add_option("--seed", config.gen.seed, "base seed; trial t uses seed + t");
  app.add_option("--lambda-tgt", config.params.lambda_tgt, "target regularization")
      ->capture_default_str();
  app.add_option("--eta", config.params.eta, "homotopy ratio in (0,1)")->capture_default_str();
  app.add_option("--tau", config.params.tau, "inner tolerance, scaled by lambda")
      ->capture_default_str();
  app.add_option("--delta", config.params.delta, "admission margin")->capture_default_str();
  app.add_option("--phi", config.params.phi, "strong-rule margin")->capture_default_str();
  app.add_option("--lipschitz", config.params.lipschitz, "step constant L")->capture_default_str();
  app.add_option("--max-inner", config.params.max_inner, "sweeps per inner loop")
      ->capture_default_str();
  app.add_option("--max-outer", config.params.max_outer, "homotopy stages")->capture_default_str();
  app.add_option("--trials", config.trials, "synthetic instances per run")->capture_default_str();
  app.add_option("--method", config.methods, "hcd, iht, oracle (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_flag("--normalize", config.normalize, "rescale non-unit dictionary columns on input");
  app.add_flag("--strict", config.strict, "exit 3 when any iteration cap was hit");
  app.add_option("--out", config.out, "output directory")->capture_default_str();

  app.add_option("--dist", dist, "normal or uniform")->capture_default_str();
  app.add_option("--dim", config.gen.d, "signal dimension d")->capture_default_str();
  app.add_option("--atoms", config.gen.K, "dictionary size K")->capture_default_str();
  app.add_option("--sparsity", config.gen.s, "nonzeros in the generating code")
      ->capture_default_str();
  app.add_option("--sigma", config.gen.sigma, "noise level (pixel units for --pgm)")
      ->capture_default_str();
  app.add_option("--input", input, "directory with dictionary.csv, signal.csv[, truth.csv]");
  app.add_option("--manifest", manifest, "manifest.json written by gen");
  app.add_option("--pgm", pgm, "PGM image for natural-signal patches");
  app.add_option("--patch", config.source.patch, "patch side length")->capture_default_str();
  app.add_option("--count", config.source.patch_count, "number of patches")->capture_default_str();
  app.add_option("--workers", config.workers, "bench threads; 0 uses all cores");
  app.add_option("--oracle-max-support", config.oracle_max_support,
                 "oracle support budget; 0 means K when K <= 20, else 4");
  app.add_option("--param", config.sweep_param, "sweep parameter: lambda_tgt or eta");
  app.add_option("--values", config.sweep_values, "sweep values (comma separated)")
      ->delimiter(',');

  auto* gen = app.add_subcommand("gen", "write a synthetic or patch instance with its manifest");
  auto* solve = app.add_subcommand("solve", "solve instances and write solution, metrics, trace");
  auto* sweep = app.add_subcommand("sweep", "solve across values of one parameter");
  auto* bench = app.add_subcommand("bench", "run trials in parallel and aggregate metrics");
  auto* oracle = app.add_subcommand("oracle-check", "compare against exhaustive search");
  for (auto* sub : {gen, solve, sweep, bench, oracle}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.gen.dist = parse_distribution(dist);
    if (!input.empty()) config.source.input_dir = input;
    if (!manifest.empty()) config.source.manifest = manifest;
    if (!pgm.empty()) config.source.pgm = pgm;

    CommandResult result;
    if (gen->parsed()) {
      result = cmd_gen(config);
    } else if (solve->parsed()) {
      result = cmd_solve(config);
    } else if (sweep->parsed()) {
      result = cmd_sweep(config);
    } else if (bench->parsed()) {
      result = cmd_bench(config);
    } else {
      result = cmd_oracle_check(config);
    }
    if (result.cap_warning) std::cerr << "warning: an iteration cap was hit\n";
    return result.exit_code;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace hcd::cli

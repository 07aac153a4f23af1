#pragma once

// Experiment harness behind the `hcd` executable. Each subcommand is a plain
// function over an ExperimentConfig so it can be driven from tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcd/hcd.hpp"

namespace hcd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitCapWarning = 3,
};

// Where a command's problem instances come from.
struct InputSource {
  std::optional<std::filesystem::path> input_dir;  // dictionary.csv, signal.csv[, truth.csv]
  std::optional<std::filesystem::path> manifest;   // regenerate from a gen manifest
  std::optional<std::filesystem::path> pgm;        // natural-signal patches
  std::size_t patch = 8;
  std::size_t patch_count = 10;
};

struct ExperimentConfig {
  GenSpec gen;
  SolverParams params;
  InputSource source;
  std::size_t trials = 1;
  std::vector<std::string> methods{"hcd"};
  std::filesystem::path out = "hcd_out";
  bool normalize = false;
  bool strict = false;
  std::size_t workers = 0;           // 0: hardware concurrency
  std::size_t oracle_max_support = 0;  // 0: K when K <= 20, else 4

  std::string sweep_param;
  std::vector<double> sweep_values;

  // Throws ParameterError on inconsistent settings.
  void validate() const;
};

// One instance to solve, tagged for reporting.
struct Instance {
  Problem problem;
  std::uint64_t seed = 0;
  std::string label;
};

// Problems for trial indices [0, trials): generated with seed + t, the t-th
// image patch, or the single loaded input.
std::vector<Instance> load_instances(const ExperimentConfig& config);

// Reads dictionary.csv / signal.csv / optional truth.csv. With `normalize`,
// non-unit columns are rescaled (and truth with them); otherwise they raise
// NormalizationError.
Problem read_problem_dir(const std::filesystem::path& dir, bool normalize);

// Result of running one method on one instance.
struct MethodRun {
  std::string method;
  Solution solution;
  Metrics metrics;
  std::optional<bool> support_recovered;
  std::string error;  // non-empty if the run failed
};

MethodRun run_method(const std::string& method, const Instance& instance,
                     const ExperimentConfig& config);

// Files written to `dir`: solution.csv, metrics.json, trace.json, trace.csv.
void write_run(const std::filesystem::path& dir, const MethodRun& run);

struct CommandResult {
  int exit_code = kExitOk;
  bool cap_warning = false;
  std::vector<std::filesystem::path> files;
};

CommandResult cmd_gen(const ExperimentConfig& config);
CommandResult cmd_solve(const ExperimentConfig& config);
CommandResult cmd_sweep(const ExperimentConfig& config);
CommandResult cmd_bench(const ExperimentConfig& config);
CommandResult cmd_oracle_check(const ExperimentConfig& config);

// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv);

}  // namespace hcd::cli

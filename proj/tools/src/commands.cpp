#include "hcd_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

namespace hcd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDominanceSlack = 1e-10;

bool is_known_method(const std::string& m) { return m == "hcd" || m == "iht" || m == "oracle"; }

std::string join_indices(std::span<const std::size_t> idx, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(idx[i]);
  }
  return s;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::size_t oracle_support_budget(const ExperimentConfig& config, std::size_t atoms) {
  if (config.oracle_max_support != 0) return config.oracle_max_support;
  return atoms <= 20 ? atoms : 4;
}

void add_patch_noise(DenseVector& patch, double sigma, std::uint64_t seed, std::size_t index) {
  if (sigma <= 0.0) return;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(Stream::Noise), static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : patch) v += noise(rng);
}

std::vector<Instance> pgm_instances(const fs::path& pgm, std::size_t patch, std::size_t count,
                                    std::size_t atoms, double sigma, std::uint64_t seed) {
  const GrayImage image = read_pgm(pgm);
  std::vector<DenseVector> patches = extract_patches(image, patch, count, seed);
  const DenseMatrix dict = random_dictionary(Distribution::Normal, patch * patch, atoms, seed);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    add_patch_noise(patches[i], sigma, seed, i);
    out.push_back({Problem{dict, std::move(patches[i]), std::nullopt}, seed,
                   "patch_" + std::to_string(i)});
  }
  return out;
}

json spec_to_json(const GenSpec& g) {
  return {{"dist", to_string(g.dist)}, {"d", g.d},         {"K", g.K},
          {"s", g.s},                  {"sigma", g.sigma}, {"seed", g.seed}};
}

GenSpec spec_from_json(const json& j) {
  GenSpec g;
  g.dist = parse_distribution(j.at("dist").get<std::string>());
  g.d = j.at("d").get<std::size_t>();
  g.K = j.at("K").get<std::size_t>();
  g.s = j.at("s").get<std::size_t>();
  g.sigma = j.at("sigma").get<double>();
  g.seed = j.at("seed").get<std::uint64_t>();
  return g;
}

Problem problem_from_manifest(const fs::path& path) {
  json m;
  try {
    m = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (m.value("schema_version", 0) != kSchemaVersion) {
    throw ParseError(path.string() + ": unsupported schema_version");
  }
  const std::string source = m.value("source", "synthetic");
  if (source == "pgm") {
    fs::path pgm = m.at("pgm").get<std::string>();
    if (pgm.is_relative()) pgm = path.parent_path() / pgm;
    auto inst = pgm_instances(pgm, m.at("patch").get<std::size_t>(), 1, m.at("K").get<std::size_t>(),
                              m.at("sigma").get<double>(), m.at("seed").get<std::uint64_t>());
    return std::move(inst.front().problem);
  }
  const GenSpec spec = spec_from_json(m.at("spec"));
  DenseVector norms;
  Problem p = generate(spec, &norms);
  const auto recorded = m.at("column_pre_norms").get<std::vector<double>>();
  if (recorded != norms.values()) {
    throw ParseError(path.string() + ": regenerated dictionary does not match recorded column norms");
  }
  return p;
}

fs::path run_dir(const fs::path& base, const Instance& inst, const std::string& method,
                 bool multi_instance, bool multi_method) {
  fs::path dir = base;
  if (multi_instance) dir /= inst.label;
  if (multi_method) dir /= method;
  return dir;
}

bool has_cap_warning(const MethodRun& run) { return !run.solution.trace.cap_warnings.empty(); }

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (methods.empty()) throw ParameterError("at least one method is required");
  for (const auto& m : methods) {
    if (!is_known_method(m)) throw ParameterError("unknown method '" + m + "' (hcd, iht, oracle)");
  }
  const int sources = int(source.input_dir.has_value()) + int(source.manifest.has_value()) +
                      int(source.pgm.has_value());
  if (sources > 1) throw ParameterError("--input, --manifest and --pgm are mutually exclusive");
  if (!source.input_dir && !source.manifest && !source.pgm) gen.validate();
  if (source.pgm && (source.patch == 0 || source.patch_count == 0)) {
    throw ParameterError("patch size and count must be positive");
  }
}

Problem read_problem_dir(const fs::path& dir, bool normalize) {
  Problem p;
  p.dictionary = read_matrix_csv(dir / "dictionary.csv");
  p.signal = read_vector_csv(dir / "signal.csv");
  if (fs::exists(dir / "truth.csv")) p.truth = read_vector_csv(dir / "truth.csv");
  validate_dimensions(p);
  if (max_column_norm_deviation(p.dictionary) > 1e-8) {
    if (!normalize) require_unit_columns(p.dictionary, 1e-8);
    auto [unit, norms] = normalize_columns(p.dictionary);
    p.dictionary = std::move(unit);
    if (p.truth) {
      for (std::size_t j = 0; j < norms.size(); ++j) (*p.truth)[j] *= norms[j];
    }
  }
  return p;
}

std::vector<Instance> load_instances(const ExperimentConfig& config) {
  const InputSource& src = config.source;
  if (src.manifest) return {{problem_from_manifest(*src.manifest), config.gen.seed, "input"}};
  if (src.input_dir) return {{read_problem_dir(*src.input_dir, config.normalize), config.gen.seed, "input"}};
  if (src.pgm) {
    return pgm_instances(*src.pgm, src.patch, src.patch_count, config.gen.K, config.gen.sigma,
                         config.gen.seed);
  }
  std::vector<Instance> out;
  out.reserve(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    GenSpec spec = config.gen;
    spec.seed = config.gen.seed + t;
    out.push_back({generate(spec), spec.seed, "seed_" + std::to_string(spec.seed)});
  }
  return out;
}

MethodRun run_method(const std::string& method, const Instance& instance,
                     const ExperimentConfig& config) {
  MethodRun run;
  run.method = method;
  const Problem& problem = instance.problem;
  const double lambda = config.params.lambda_tgt;

  const auto started = std::chrono::steady_clock::now();
  if (method == "hcd") {
    run.solution = solve_hcd(problem, config.params);
  } else if (method == "iht") {
    run.solution = plain_iht_homotopy(problem, config.params);
  } else if (method == "oracle") {
    OracleResult r = brute_force_l0(problem, lambda, oracle_support_budget(config, problem.atoms()));
    run.solution.alpha = std::move(r.alpha);
    run.solution.objective = r.objective;
    run.solution.trace.method = "oracle";
  } else {
    throw ParameterError("unknown method '" + method + "'");
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::optional<PhiStar> phi_star = truth_phi_star(problem, lambda);
  if (!phi_star && problem.atoms() <= 20) {
    phi_star = PhiStar{brute_force_l0(problem, lambda, problem.atoms()).objective,
                       PhiStarSource::Oracle};
  }
  run.metrics = compute_metrics(problem, run.solution, phi_star, elapsed);
  if (problem.truth) run.support_recovered = support_recovered(*problem.truth, run.solution.alpha);
  return run;
}

void write_run(const fs::path& dir, const MethodRun& run) {
  fs::create_directories(dir);
  write_vector_csv(dir / "solution.csv", run.solution.alpha, "alpha");
  write_text(dir / "metrics.json", metrics_to_json(run.metrics, run.method) + "\n");
  write_text(dir / "trace.json", trace_to_json(run.solution.trace) + "\n");
  write_text(dir / "trace.csv", trace_to_csv(run.solution.trace));
}

CommandResult cmd_gen(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  fs::create_directories(config.out);

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "manifest";
  manifest["prng"] = std::string(kPrngName);

  Problem problem;
  if (config.source.pgm) {
    auto inst = pgm_instances(*config.source.pgm, config.source.patch, 1, config.gen.K,
                              config.gen.sigma, config.gen.seed);
    problem = std::move(inst.front().problem);
    manifest["source"] = "pgm";
    manifest["pgm"] = fs::absolute(*config.source.pgm).string();
    manifest["patch"] = config.source.patch;
    manifest["K"] = config.gen.K;
    manifest["sigma"] = config.gen.sigma;
    manifest["seed"] = config.gen.seed;
  } else {
    DenseVector norms;
    problem = generate(config.gen, &norms);
    manifest["source"] = "synthetic";
    manifest["spec"] = spec_to_json(config.gen);
    manifest["column_pre_norms"] = norms.values();
  }

  write_matrix_csv(config.out / "dictionary.csv", problem.dictionary);
  write_vector_csv(config.out / "signal.csv", problem.signal, "x");
  result.files = {config.out / "dictionary.csv", config.out / "signal.csv"};
  json files = {{"dictionary", "dictionary.csv"}, {"signal", "signal.csv"}};
  if (problem.truth) {
    write_vector_csv(config.out / "truth.csv", *problem.truth, "alpha");
    files["truth"] = "truth.csv";
    result.files.push_back(config.out / "truth.csv");
  }
  manifest["files"] = files;
  write_text(config.out / "manifest.json", manifest.dump(2) + "\n");
  result.files.push_back(config.out / "manifest.json");
  return result;
}

CommandResult cmd_solve(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const std::vector<Instance> instances = load_instances(config);
  const bool multi_instance = instances.size() > 1;
  const bool multi_method = config.methods.size() > 1;
  for (const Instance& inst : instances) {
    for (const std::string& method : config.methods) {
      const MethodRun run = run_method(method, inst, config);
      const fs::path dir = run_dir(config.out, inst, method, multi_instance, multi_method);
      write_run(dir, run);
      result.files.push_back(dir);
      result.cap_warning = result.cap_warning || has_cap_warning(run);
      std::cout << method << " " << inst.label << ": nnz=" << run.metrics.nnz
                << " recon_error=" << format_double(run.metrics.recon_error)
                << " objective=" << format_double(run.solution.objective);
      if (run.metrics.obj_gap) {
        std::cout << " obj_gap=" << format_double(*run.metrics.obj_gap) << " ("
                  << to_string(run.metrics.phi_star_source) << ")";
      }
      std::cout << "\n";
    }
  }
  if (config.strict && result.cap_warning) result.exit_code = kExitCapWarning;
  return result;
}

CommandResult cmd_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.sweep_param != "lambda_tgt" && config.sweep_param != "eta") {
    throw ParameterError("unknown sweep parameter '" + config.sweep_param +
                         "' (lambda_tgt or eta)");
  }
  if (config.sweep_values.empty()) throw ParameterError("sweep needs at least one value");

  CommandResult result;
  const std::vector<Instance> instances = load_instances(config);
  CsvTable summary;
  summary.push_back({"param", "value", "seed", "label", "method", "recon_error", "obj_gap",
                     "phi_star_source", "nnz", "stages", "middle_iters_per_stage",
                     "total_middle_iters", "support", "wall_time_s"});

  for (double value : config.sweep_values) {
    ExperimentConfig cfg = config;
    if (config.sweep_param == "lambda_tgt") {
      cfg.params.lambda_tgt = value;
    } else {
      cfg.params.eta = value;
    }
    cfg.params.validate();
    const fs::path value_dir = config.out / (config.sweep_param + "=" + format_double(value));
    for (const Instance& inst : instances) {
      for (const std::string& method : config.methods) {
        const MethodRun run = run_method(method, inst, cfg);
        const fs::path dir = value_dir / inst.label / method;
        write_run(dir, run);
        result.files.push_back(dir);
        result.cap_warning = result.cap_warning || has_cap_warning(run);

        std::vector<std::size_t> per_stage;
        for (const auto& s : run.solution.trace.stages) per_stage.push_back(s.middle_iters);
        const ActiveSet support = ActiveSet::from_pattern(run.solution.alpha);
        summary.push_back({config.sweep_param, format_double(value), std::to_string(inst.seed),
                           inst.label, method, format_double(run.metrics.recon_error),
                           optional_number(run.metrics.obj_gap),
                           to_string(run.metrics.phi_star_source), std::to_string(run.metrics.nnz),
                           std::to_string(run.solution.trace.stages.size()),
                           join_indices(per_stage),
                           std::to_string(run.solution.trace.total_middle_iters),
                           join_indices(support.indices()),
                           format_double(run.metrics.wall_time_s)});
      }
    }
  }
  fs::create_directories(config.out);
  write_text(config.out / "sweep_summary.csv", to_csv(summary));
  result.files.push_back(config.out / "sweep_summary.csv");
  if (config.strict && result.cap_warning) result.exit_code = kExitCapWarning;
  return result;
}

namespace {

struct Aggregate {
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};

Aggregate aggregate(std::vector<double> values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  a.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return a;
}

json aggregate_json(const Aggregate& a) {
  if (a.count == 0) return nullptr;
  return {{"mean", a.mean}, {"median", a.median}, {"count", a.count}};
}

// Runs task(i) for i in [0, n) on a bounded pool; results land by index, so
// output order does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t n, std::size_t workers, Task task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
}

}  // namespace

CommandResult cmd_bench(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const std::vector<Instance> instances = load_instances(config);
  const std::size_t n_methods = config.methods.size();
  std::vector<MethodRun> runs(instances.size() * n_methods);

  parallel_for(runs.size(), config.workers, [&](std::size_t k) {
    const Instance& inst = instances[k / n_methods];
    const std::string& method = config.methods[k % n_methods];
    try {
      runs[k] = run_method(method, inst, config);
    } catch (const std::exception& e) {
      runs[k].method = method;
      runs[k].error = e.what();
    }
  });

  CsvTable trials;
  trials.push_back({"seed", "label", "method", "recon_error", "obj_gap", "phi_star_source", "nnz",
                    "support_recovered", "stages", "total_middle_iters", "wall_time_s", "error"});
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Instance& inst = instances[k / n_methods];
    const MethodRun& r = runs[k];
    result.cap_warning = result.cap_warning || has_cap_warning(r);
    if (!r.error.empty()) {
      trials.push_back({std::to_string(inst.seed), inst.label, r.method, "", "", "", "", "", "", "",
                        "", r.error});
      continue;
    }
    trials.push_back({std::to_string(inst.seed), inst.label, r.method,
                      format_double(r.metrics.recon_error), optional_number(r.metrics.obj_gap),
                      to_string(r.metrics.phi_star_source), std::to_string(r.metrics.nnz),
                      r.support_recovered ? (*r.support_recovered ? "1" : "0") : "",
                      std::to_string(r.solution.trace.stages.size()),
                      std::to_string(r.solution.trace.total_middle_iters),
                      format_double(r.metrics.wall_time_s), ""});
  }

  CsvTable summary;
  summary.push_back({"method", "trials", "failures", "recovered", "mean_recon_error",
                     "median_recon_error", "mean_obj_gap", "median_obj_gap", "mean_nnz",
                     "median_nnz", "mean_total_middle_iters", "mean_wall_time_s",
                     "median_wall_time_s"});
  json summary_json;
  summary_json["schema_version"] = kSchemaVersion;
  summary_json["kind"] = "bench_summary";
  summary_json["methods"] = json::array();

  for (std::size_t m = 0; m < n_methods; ++m) {
    std::vector<double> err, gap, nnz, mid, wall;
    std::size_t failures = 0;
    std::size_t recovered = 0;
    std::size_t with_truth = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const MethodRun& r = runs[i * n_methods + m];
      if (!r.error.empty()) {
        ++failures;
        continue;
      }
      err.push_back(r.metrics.recon_error);
      if (r.metrics.obj_gap) gap.push_back(*r.metrics.obj_gap);
      nnz.push_back(static_cast<double>(r.metrics.nnz));
      mid.push_back(static_cast<double>(r.solution.trace.total_middle_iters));
      wall.push_back(r.metrics.wall_time_s);
      if (r.support_recovered) {
        ++with_truth;
        recovered += *r.support_recovered ? 1 : 0;
      }
    }
    const Aggregate a_err = aggregate(err), a_gap = aggregate(gap), a_nnz = aggregate(nnz),
                    a_mid = aggregate(mid), a_wall = aggregate(wall);
    const std::string& method = config.methods[m];
    summary.push_back({method, std::to_string(instances.size()), std::to_string(failures),
                       with_truth ? std::to_string(recovered) : "", format_double(a_err.mean),
                       format_double(a_err.median), a_gap.count ? format_double(a_gap.mean) : "",
                       a_gap.count ? format_double(a_gap.median) : "", format_double(a_nnz.mean),
                       format_double(a_nnz.median), format_double(a_mid.mean),
                       format_double(a_wall.mean), format_double(a_wall.median)});
    summary_json["methods"].push_back({
        {"method", method},
        {"trials", instances.size()},
        {"failures", failures},
        {"recovered", with_truth ? json(recovered) : json(nullptr)},
        {"recon_error", aggregate_json(a_err)},
        {"obj_gap", aggregate_json(a_gap)},
        {"nnz", aggregate_json(a_nnz)},
        {"total_middle_iters", aggregate_json(a_mid)},
        {"wall_time_s", aggregate_json(a_wall)},
    });
    std::cout << method << ": trials=" << instances.size() << " failures=" << failures
              << " mean_recon_error=" << format_double(a_err.mean)
              << " mean_nnz=" << format_double(a_nnz.mean);
    if (with_truth) std::cout << " recovered=" << recovered << "/" << with_truth;
    std::cout << "\n";
  }

  fs::create_directories(config.out);
  write_text(config.out / "bench_trials.csv", to_csv(trials));
  write_text(config.out / "bench_summary.csv", to_csv(summary));
  write_text(config.out / "bench_summary.json", summary_json.dump(2) + "\n");
  result.files = {config.out / "bench_trials.csv", config.out / "bench_summary.csv",
                  config.out / "bench_summary.json"};
  if (config.strict && result.cap_warning) result.exit_code = kExitCapWarning;
  return result;
}

CommandResult cmd_oracle_check(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  const std::vector<Instance> instances = load_instances(config);

  CsvTable rows;
  rows.push_back({"seed", "label", "hcd_objective", "oracle_objective", "difference",
                  "support_match", "dominance_ok"});
  json items = json::array();
  std::size_t matches = 0;
  std::size_t violations = 0;
  for (const Instance& inst : instances) {
    const Problem& p = inst.problem;
    const Solution hcd = solve_hcd(p, config.params);
    result.cap_warning = result.cap_warning || !hcd.trace.cap_warnings.empty();
    const OracleResult oracle =
        brute_force_l0(p, config.params.lambda_tgt, oracle_support_budget(config, p.atoms()));
    const bool match = ActiveSet::from_pattern(hcd.alpha) == oracle.support;
    const bool dominance = hcd.objective >= oracle.objective - kDominanceSlack;
    matches += match ? 1 : 0;
    violations += dominance ? 0 : 1;
    rows.push_back({std::to_string(inst.seed), inst.label, format_double(hcd.objective),
                    format_double(oracle.objective), format_double(hcd.objective - oracle.objective),
                    match ? "1" : "0", dominance ? "1" : "0"});
    items.push_back({{"seed", inst.seed},
                     {"hcd_objective", hcd.objective},
                     {"oracle_objective", oracle.objective},
                     {"support_match", match},
                     {"dominance_ok", dominance}});
  }

  fs::create_directories(config.out);
  write_text(config.out / "oracle_check.csv", to_csv(rows));
  json j = {{"schema_version", kSchemaVersion}, {"kind", "oracle_check"},
            {"instances", instances.size()},    {"support_matches", matches},
            {"dominance_violations", violations}, {"items", std::move(items)}};
  write_text(config.out / "oracle_check.json", j.dump(2) + "\n");
  result.files = {config.out / "oracle_check.csv", config.out / "oracle_check.json"};

  std::cout << "oracle-check: " << matches << "/" << instances.size()
            << " support matches, " << violations << " dominance violations\n";
  if (violations > 0) {
    result.exit_code = kExitData;
  } else if (config.strict && result.cap_warning) {
    result.exit_code = kExitCapWarning;
  }
  return result;
}

}  // namespace hcd::cli

#include "hcd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hcd/error.hpp"

namespace hcd {

const char* to_string(StageStop stop) noexcept {
  switch (stop) {
    case StageStop::GradientTest: return "gradient_test";
    case StageStop::EmptyInactive: return "empty_inactive";
    case StageStop::ZeroAdmission: return "zero_admission";
    case StageStop::MiddleCap: return "middle_cap";
    case StageStop::Converged: return "converged";
    case StageStop::InnerCap: return "inner_cap";
  }
  return "unknown";
}

void SolverParams::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (!(lambda_tgt > 0.0) || !std::isfinite(lambda_tgt)) fail("lambda_tgt must be positive");
  if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0, 1)");
  if (!(phi > 0.0 && phi < 1.0)) fail("phi must lie in (0, 1)");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) fail("delta must be positive");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) fail("lipschitz must be positive");
  if (max_inner == 0) fail("max_inner must be positive");
  if (max_outer == 0) fail("max_outer must be positive");
}

ActiveSet::ActiveSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

ActiveSet ActiveSet::from_pattern(const DenseVector& alpha) {
  ActiveSet set;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] != 0.0) set.indices_.push_back(j);
  }
  return set;
}

bool ActiveSet::contains(std::size_t j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool ActiveSet::insert(std::size_t j) {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), j);
  if (it != indices_.end() && *it == j) return false;
  indices_.insert(it, j);
  return true;
}

SolverState SolverState::start(const Problem& problem, DenseVector alpha, double lambda) {
  if (alpha.size() != problem.atoms()) throw DimensionError("alpha length != dictionary cols");
  SolverState s;
  s.residual = Residual(problem.dictionary, problem.signal, alpha);
  s.active = ActiveSet::from_pattern(alpha);
  s.alpha = std::move(alpha);
  s.lambda = lambda;
  return s;
}

double objective(const Problem& problem, const DenseVector& alpha, double lambda) {
  validate_dimensions(problem);
  if (alpha.size() != problem.atoms()) throw DimensionError("alpha length != dictionary cols");
  const DenseVector r = subtract(problem.signal, matvec(problem.dictionary, alpha));
  return 0.5 * squared_norm(r.span()) + lambda * static_cast<double>(count_nonzero(alpha.span()));
}

double threshold_value(double step, double lambda, double lipschitz) noexcept {
  return step * step > 2.0 * lambda / lipschitz ? step : 0.0;
}

double hard_threshold(const SolverState& state, const Problem& problem, std::size_t i,
                      double lambda, double lipschitz) {
  if (i >= problem.atoms()) {
    throw IndexError("coordinate " + std::to_string(i) + " out of range");
  }
  // d_i^T (d_i alpha_i - z) = -d_i^T r, so the step needs only the residual.
  const double grad = -column_dot(problem.dictionary, i, state.residual.vector());
  const double step = state.alpha[i] - grad / lipschitz;
  return threshold_value(step, lambda, lipschitz);
}

namespace {

// Objective from the maintained residual.
double current_objective(const SolverState& state, double lambda) {
  return 0.5 * squared_norm(state.residual.vector().span()) +
         lambda * static_cast<double>(count_nonzero(state.alpha.span()));
}

// Recomputes the residual so checkpoints carry no accumulated drift.
void checkpoint(StageTrace& trace, SolverState& state, const Problem& problem, double lambda) {
  state.residual.refresh(problem.dictionary, problem.signal, state.alpha);
  trace.objective_checkpoints.push_back(current_objective(state, lambda));
  trace.nnz_checkpoints.push_back(count_nonzero(state.alpha.span()));
}

}  // namespace

InnerStats act_coo_des(SolverState& state, const Problem& problem, double lambda,
                       const SolverParams& params, SolverObserver* observer) {
  InnerStats stats;
  if (state.active.empty()) return stats;

  DenseVector before;
  if (observer) before = state.alpha;

  const auto active = state.active.indices();
  const double tol = params.tau * lambda;
  while (true) {
    double prev_sq = 0.0;
    double change_sq = 0.0;
    double next_sq = 0.0;
    for (std::size_t j : active) {
      const double old_value = state.alpha[j];
      const double new_value = hard_threshold(state, problem, j, lambda, params.lipschitz);
      if (observer) observer->on_threshold(new_value, lambda, params.lipschitz);
      if (new_value != old_value) {
        state.alpha[j] = new_value;
        state.residual.coordinate_update(problem.dictionary, j, old_value, new_value);
      }
      prev_sq += old_value * old_value;
      change_sq += (new_value - old_value) * (new_value - old_value);
      next_sq += new_value * new_value;
    }
    ++stats.sweeps;

    const bool converged = prev_sq == 0.0 ? next_sq == 0.0
                                          : std::sqrt(change_sq) / std::sqrt(prev_sq) < tol;
    if (converged) break;
    if (stats.sweeps >= params.max_inner) {
      stats.cap_hit = true;
      break;
    }
  }

  if (observer) observer->on_inner_exit(before, state);
  return stats;
}

ActiveSet strong_rule_init(const DenseVector& alpha0, const Problem& problem, double lambda,
                           const SolverParams& params) {
  validate_dimensions(problem);
  if (alpha0.size() != problem.atoms()) throw DimensionError("alpha length != dictionary cols");
  const DenseVector r = subtract(problem.signal, matvec(problem.dictionary, alpha0));
  const double bound = (1.0 - params.phi) * std::sqrt(2.0 * lambda / params.lipschitz);
  std::vector<std::size_t> indices;
  for (std::size_t j = 0; j < problem.atoms(); ++j) {
    if (alpha0[j] != 0.0 || std::abs(dot(problem.dictionary.col(j), r.span())) >= bound) {
      indices.push_back(j);
    }
  }
  return ActiveSet(std::move(indices));
}

namespace {

// Runs one stage in place on `state`. The residual is refreshed at entry and
// once per middle-loop iteration.
StageTrace run_stage(SolverState& state, const Problem& problem, double lambda,
                     const SolverParams& params, SolverObserver* observer) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t atoms = problem.atoms();
  const std::size_t max_middle = params.max_middle == 0 ? atoms : params.max_middle;
  const double admit_bound = (1.0 - params.delta) * std::sqrt(2.0 * lambda / params.lipschitz);

  StageTrace trace;
  trace.lambda = lambda;
  state.lambda = lambda;
  state.residual.refresh(problem.dictionary, problem.signal, state.alpha);
  trace.start_objective = current_objective(state, lambda);

  state.active = strong_rule_init(state.alpha, problem, lambda, params);
  trace.strong_rule_admitted = state.active.size() - count_nonzero(state.alpha.span());

  auto inner = [&](bool from_strong_rule) {
    if (observer) observer->on_inner_entry(state, from_strong_rule);
    const InnerStats stats = act_coo_des(state, problem, lambda, params, observer);
    trace.inner_sweeps_total += stats.sweeps;
    if (stats.cap_hit) ++trace.inner_cap_hits;
    checkpoint(trace, state, problem, lambda);
  };

  inner(true);
  while (true) {
    state.residual.refresh(problem.dictionary, problem.signal, state.alpha);
    state.active = ActiveSet::from_pattern(state.alpha);
    if (state.active.size() == atoms) {
      trace.stop = StageStop::EmptyInactive;
      break;
    }

    // Greedy selection over the inactive set; ties go to the lowest index.
    std::size_t best = atoms;
    double best_mag = -1.0;
    for (std::size_t j = 0; j < atoms; ++j) {
      if (state.alpha[j] != 0.0) continue;
      const double mag = std::abs(column_dot(problem.dictionary, j, state.residual.vector()));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best_mag <= admit_bound) {
      trace.stop = StageStop::GradientTest;
      break;
    }
    if (trace.middle_iters >= max_middle) {
      trace.stop = StageStop::MiddleCap;
      break;
    }
    const double value = hard_threshold(state, problem, best, lambda, params.lipschitz);
    if (observer) observer->on_threshold(value, lambda, params.lipschitz);
    if (value == 0.0) {
      // No inactive coordinate can pass Gamma when the largest gradient does not.
      trace.stop = StageStop::ZeroAdmission;
      break;
    }

    trace.pruned_active_sizes.push_back(state.active.size());
    state.alpha[best] = value;
    state.residual.coordinate_update(problem.dictionary, best, 0.0, value);
    state.active.insert(best);
    trace.admitted_active_sizes.push_back(state.active.size());
    trace.admitted_coords.push_back(best);
    ++trace.middle_iters;
    checkpoint(trace, state, problem, lambda);

    inner(false);
  }

  trace.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

void require_finite_problem(const Problem& problem) {
  // DenseMatrix/DenseVector reject non-finite values at construction, but
  // element access can write them afterwards.
  for (double v : problem.dictionary.values()) {
    if (!std::isfinite(v)) throw InputError("dictionary contains a non-finite value");
  }
  for (double v : problem.signal) {
    if (!std::isfinite(v)) throw InputError("signal contains a non-finite value");
  }
}

}  // namespace

std::pair<DenseVector, StageTrace> ite_act_upd(const DenseVector& alpha0, const Problem& problem,
                                               double lambda, const SolverParams& params,
                                               SolverObserver* observer) {
  validate_dimensions(problem);
  params.validate();
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  SolverState state = SolverState::start(problem, alpha0, lambda);
  StageTrace trace = run_stage(state, problem, lambda, params, observer);
  return {std::move(state.alpha), std::move(trace)};
}

std::vector<double> lambda_schedule(double lambda0, const SolverParams& params, bool* truncated) {
  params.validate();
  if (truncated) *truncated = false;
  std::vector<double> stages;
  double lambda = lambda0;
  while (true) {
    lambda *= params.eta;
    if (!(lambda > params.lambda_tgt)) {
      stages.push_back(params.lambda_tgt);
      break;
    }
    if (stages.size() + 1 >= params.max_outer) {
      if (truncated) *truncated = true;
      stages.push_back(params.lambda_tgt);
      break;
    }
    stages.push_back(lambda);
  }
  return stages;
}

Solution solve_hcd(const Problem& problem, const SolverParams& params,
                   const DenseVector& alpha_init, SolverObserver* observer) {
  validate_dimensions(problem);
  params.validate();
  require_finite_problem(problem);
  require_unit_columns(problem.dictionary, 1e-8);
  if (alpha_init.size() != problem.atoms()) {
    throw DimensionError("alpha_init length != dictionary cols");
  }
  for (double v : alpha_init) {
    if (!std::isfinite(v)) throw InputError("alpha_init contains a non-finite value");
  }

  Solution solution;
  RunTrace& trace = solution.trace;
  trace.method = "hcd";

  SolverState state = SolverState::start(problem, alpha_init, params.lambda_tgt);
  trace.lambda0 = norm_inf(matvec_transposed(problem.dictionary, state.residual.vector()).span());

  // A caller-supplied warm start stands in for the homotopy path; starting the
  // schedule above lambda_tgt would discard small coefficients it already holds.
  bool truncated = false;
  const std::vector<double> schedule =
      count_nonzero(alpha_init.span()) > 0 ? std::vector<double>{params.lambda_tgt}
                                           : lambda_schedule(trace.lambda0, params, &truncated);
  if (truncated) {
    trace.cap_warnings.push_back("max_outer reached; jumped to lambda_tgt after " +
                                 std::to_string(schedule.size() - 1) + " stages");
  }

  for (double lambda : schedule) {
    ++state.stage;
    StageTrace stage = run_stage(state, problem, lambda, params, observer);
    if (stage.inner_cap_hits > 0) {
      trace.cap_warnings.push_back("stage " + std::to_string(state.stage) + ": max_inner hit " +
                                   std::to_string(stage.inner_cap_hits) + " time(s)");
    }
    if (stage.stop == StageStop::MiddleCap) {
      trace.cap_warnings.push_back("stage " + std::to_string(state.stage) +
                                   ": max_middle admissions reached");
    }
    trace.total_middle_iters += stage.middle_iters;
    trace.stages.push_back(std::move(stage));
  }

  solution.alpha = std::move(state.alpha);
  solution.objective = objective(problem, solution.alpha, params.lambda_tgt);
  return solution;
}

Solution solve_hcd(const Problem& problem, const SolverParams& params) {
  return solve_hcd(problem, params, DenseVector(problem.atoms()));
}

}  // namespace hcd

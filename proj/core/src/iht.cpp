#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hcd/baselines.hpp"
#include "hcd/error.hpp"

namespace hcd {

double spectral_norm_squared(const DenseMatrix& m, std::size_t max_iters, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return 0.0;
  // Deterministic, non-degenerate start.
  DenseVector v(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j % 7);
  double estimate = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const double vn = norm2(v.span());
    if (vn == 0.0) return 0.0;
    for (double& e : v) e /= vn;
    const DenseVector w = matvec_transposed(m, matvec(m, v));
    const double next = dot(v.span(), w.span());
    v = w;
    if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

Solution plain_iht_homotopy(const Problem& problem, const SolverParams& params) {
  validate_dimensions(problem);
  params.validate();
  require_unit_columns(problem.dictionary, 1e-8);

  const DenseMatrix& dict = problem.dictionary;
  const double lip = std::max(params.lipschitz, spectral_norm_squared(dict));

  Solution solution;
  RunTrace& trace = solution.trace;
  trace.method = "iht";

  DenseVector alpha(problem.atoms());
  trace.lambda0 = norm_inf(matvec_transposed(dict, problem.signal).span());

  bool truncated = false;
  const std::vector<double> schedule = lambda_schedule(trace.lambda0, params, &truncated);
  if (truncated) trace.cap_warnings.push_back("max_outer reached; jumped to lambda_tgt");

  std::size_t stage_no = 0;
  for (double lambda : schedule) {
    ++stage_no;
    const auto started = std::chrono::steady_clock::now();
    StageTrace stage;
    stage.lambda = lambda;
    DenseVector residual = subtract(problem.signal, matvec(dict, alpha));
    stage.start_objective =
        0.5 * squared_norm(residual.span()) + lambda * static_cast<double>(count_nonzero(alpha.span()));
    stage.stop = StageStop::InnerCap;

    const double tol = params.tau * lambda;
    for (std::size_t it = 0; it < params.max_inner; ++it) {
      const DenseVector corr = matvec_transposed(dict, residual);
      double prev_sq = 0.0;
      double change_sq = 0.0;
      double next_sq = 0.0;
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        const double old_value = alpha[j];
        const double new_value = threshold_value(old_value + corr[j] / lip, lambda, lip);
        alpha[j] = new_value;
        prev_sq += old_value * old_value;
        change_sq += (new_value - old_value) * (new_value - old_value);
        next_sq += new_value * new_value;
      }
      ++stage.inner_sweeps_total;
      residual = subtract(problem.signal, matvec(dict, alpha));
      stage.objective_checkpoints.push_back(0.5 * squared_norm(residual.span()) +
                                            lambda * static_cast<double>(count_nonzero(alpha.span())));
      stage.nnz_checkpoints.push_back(count_nonzero(alpha.span()));

      const bool converged = prev_sq == 0.0 ? next_sq == 0.0
                                            : std::sqrt(change_sq) / std::sqrt(prev_sq) < tol;
      if (converged) {
        stage.stop = StageStop::Converged;
        break;
      }
    }
    if (stage.stop == StageStop::InnerCap) {
      stage.inner_cap_hits = 1;
      trace.cap_warnings.push_back("stage " + std::to_string(stage_no) + ": max_inner hit");
    }
    stage.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    trace.stages.push_back(std::move(stage));
  }

  solution.alpha = std::move(alpha);
  solution.objective = objective(problem, solution.alpha, params.lambda_tgt);
  return solution;
}

}  // namespace hcd

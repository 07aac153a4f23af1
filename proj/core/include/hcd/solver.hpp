#pragma once

// Homotopy coordinate descent for the l0-regularized least-squares problem
//
//   Phi_lambda(alpha) = 1/2 ||x - D alpha||_2^2 + lambda ||alpha||_0
//
// built from three nested loops: a coordinate-wise hard-thresholding sweep
// over a fixed active set (inner), greedy one-coordinate active-set growth
// seeded by a strong rule (middle), and a geometric lambda schedule with
// warm starts (outer).

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hcd/linalg.hpp"
#include "hcd/problem.hpp"
#include "hcd/trace.hpp"

namespace hcd {

struct SolverParams {
  double lambda_tgt = 0.01;
  double eta = 0.5;     // homotopy ratio
  double tau = 1e-6;    // inner tolerance, scaled by lambda
  double delta = 1e-3;  // admission margin
  double phi = 0.05;    // strong-rule margin
  double lipschitz = 1.0;
  std::size_t max_inner = 10000;  // sweeps per inner loop
  std::size_t max_middle = 0;     // admissions per stage; 0 means K
  std::size_t max_outer = 100;    // homotopy stages

  // Throws ParameterError unless 0 < eta < 1, 0 < phi < 1, tau, delta,
  // lambda_tgt, lipschitz > 0 and every cap is positive (max_middle may be 0).
  void validate() const;
};

// Sorted, duplicate-free coordinate indices.
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(std::vector<std::size_t> indices);

  // { j : alpha_j != 0 }
  static ActiveSet from_pattern(const DenseVector& alpha);

  bool contains(std::size_t j) const;
  // Returns false if already present.
  bool insert(std::size_t j);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

struct SolverState {
  DenseVector alpha;
  ActiveSet active;
  Residual residual;
  double lambda = 0.0;
  std::size_t stage = 0;

  // Active set from the sparse pattern of alpha, residual from scratch.
  static SolverState start(const Problem& problem, DenseVector alpha, double lambda);
};

// Callbacks for instrumentation; every method defaults to a no-op.
class SolverObserver {
 public:
  virtual ~SolverObserver() = default;
  // `from_strong_rule` marks the first inner loop of a stage, whose active set
  // may include zero coordinates admitted by the strong rule.
  virtual void on_inner_entry(const SolverState& /*state*/, bool /*from_strong_rule*/) {}
  virtual void on_inner_exit(const DenseVector& /*before*/, const SolverState& /*after*/) {}
  virtual void on_threshold(double /*value*/, double /*lambda*/, double /*lipschitz*/) {}
};

// 1/2 ||x - D alpha||^2 + lambda * nnz(alpha), computed from scratch.
double objective(const Problem& problem, const DenseVector& alpha, double lambda);

// Gamma(s): s if s^2 > 2 lambda / L, else exactly 0.
double threshold_value(double step, double lambda, double lipschitz) noexcept;

// Exact coordinate step for coordinate i using the maintained residual:
// s = alpha_i - (1/L) d_i^T (d_i alpha_i - z) with z = r + d_i alpha_i,
// followed by Gamma. Does not modify the state.
double hard_threshold(const SolverState& state, const Problem& problem, std::size_t i,
                      double lambda, double lipschitz);

struct InnerStats {
  std::size_t sweeps = 0;
  bool cap_hit = false;
};

// Sweeps the active coordinates in ascending order, committing each
// hard-threshold step before the next, until the relative change of alpha
// drops below tau * lambda or max_inner sweeps have run. Coordinates outside
// the active set are never touched.
InnerStats act_coo_des(SolverState& state, const Problem& problem, double lambda,
                       const SolverParams& params, SolverObserver* observer = nullptr);

// Nonzeros of alpha0 plus zero coordinates whose gradient magnitude reaches
// (1 - phi) * sqrt(2 lambda / L).
ActiveSet strong_rule_init(const DenseVector& alpha0, const Problem& problem, double lambda,
                           const SolverParams& params);

// One homotopy stage at fixed lambda, starting from alpha0.
std::pair<DenseVector, StageTrace> ite_act_upd(const DenseVector& alpha0, const Problem& problem,
                                               double lambda, const SolverParams& params,
                                               SolverObserver* observer = nullptr);

// Stage lambdas: lambda0 * eta^n while above lambda_tgt, then lambda_tgt
// exactly. A single lambda_tgt stage when lambda0 <= lambda_tgt. Never
// longer than max_outer; `truncated` reports whether that cap cut it short.
std::vector<double> lambda_schedule(double lambda0, const SolverParams& params,
                                    bool* truncated = nullptr);

struct Solution {
  DenseVector alpha;
  double objective = 0.0;  // Phi at lambda_tgt
  RunTrace trace;
};

// Full homotopy solve. Requires unit-norm dictionary columns (within 1e-8).
// The trace records lambda0 = ||grad f(alpha_init)||_inf. A zero alpha_init
// runs lambda_schedule(lambda0); a nonzero one runs a single stage at
// lambda_tgt.
Solution solve_hcd(const Problem& problem, const SolverParams& params,
                   const DenseVector& alpha_init, SolverObserver* observer = nullptr);
Solution solve_hcd(const Problem& problem, const SolverParams& params);

}  // namespace hcd

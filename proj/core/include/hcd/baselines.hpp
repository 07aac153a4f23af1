#pragma once

// Reference methods used to check and compare the HCD solver:
// an exhaustive-support global optimizer for small instances and a
// full-vector iterative hard thresholding baseline on the same homotopy
// schedule.

#include <cstddef>

#include "hcd/linalg.hpp"
#include "hcd/problem.hpp"
#include "hcd/solver.hpp"

namespace hcd {

struct OracleResult {
  ActiveSet support;
  DenseVector alpha;  // least-squares fit on `support`, zero elsewhere
  double objective = 0.0;
  std::size_t supports_evaluated = 0;
};

// Global minimizer of Phi_lambda over all supports with at most
// `max_support` entries. Restricted fits use the normal equations, with a
// 1e-12 ridge if the restricted Gram matrix is numerically singular.
// Equal objectives resolve to the lexicographically smallest support.
//
// Throws BudgetError unless K <= 20 or max_support <= 4, and
// SingularSystemError if even the ridged system cannot be factored.
OracleResult brute_force_l0(const Problem& problem, double lambda, std::size_t max_support);

// Largest eigenvalue of D^T D by power iteration.
double spectral_norm_squared(const DenseMatrix& m, std::size_t max_iters = 1000,
                             double rel_tol = 1e-12);

// Plain iterative hard thresholding on the HCD lambda schedule: each
// iteration thresholds the full vector alpha + (1/L) D^T (x - D alpha).
// L is max(params.lipschitz, ||D||_2^2) so the full-gradient step is a
// descent step. Trace fields mirror solve_hcd's with one checkpoint per
// iteration and no admissions.
Solution plain_iht_homotopy(const Problem& problem, const SolverParams& params);

}  // namespace hcd

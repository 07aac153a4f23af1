#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hcd {

// Why a middle loop (one homotopy stage) stopped.
enum class StageStop {
  GradientTest,    // max inactive |grad| <= (1 - delta) * sqrt(2 lambda / L)
  EmptyInactive,   // every coordinate is active; nothing left to admit
  ZeroAdmission,   // the selected coordinate thresholds to 0; a fixed point
  MiddleCap,       // max_middle admissions reached
  Converged,       // IHT baseline: relative change below tau * lambda
  InnerCap,        // IHT baseline: max_inner iterations reached
};

const char* to_string(StageStop stop) noexcept;

// Record of one homotopy stage at a fixed lambda.
struct StageTrace {
  double lambda = 0.0;
  // Objective at the stage's warm start, evaluated at this stage's lambda.
  double start_objective = 0.0;
  // Coordinate admissions (middle-loop iterations that did not terminate).
  std::size_t middle_iters = 0;
  std::size_t inner_sweeps_total = 0;
  // Zero coordinates added to the active set by the strong rule.
  std::size_t strong_rule_admitted = 0;
  // Objective and nnz after each inner-loop return and each admission.
  std::vector<double> objective_checkpoints;
  std::vector<std::size_t> nnz_checkpoints;
  std::vector<std::size_t> admitted_coords;
  // Active-set sizes around each admission: after pruning and after admitting.
  std::vector<std::size_t> pruned_active_sizes;
  std::vector<std::size_t> admitted_active_sizes;
  std::size_t inner_cap_hits = 0;
  StageStop stop = StageStop::GradientTest;
  double wall_time_s = 0.0;
};

struct RunTrace {
  std::string method;
  // Starting level of the homotopy, ||grad f(alpha_init)||_inf.
  double lambda0 = 0.0;
  std::vector<StageTrace> stages;
  std::size_t total_middle_iters = 0;
  std::vector<std::string> cap_warnings;
};

}  // namespace hcd

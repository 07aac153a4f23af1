#pragma once

#include <cstddef>
#include <optional>

#include "hcd/linalg.hpp"
#include "hcd/problem.hpp"
#include "hcd/solver.hpp"

namespace hcd {

// Where the reference objective Phi* came from.
enum class PhiStarSource { None, Truth, Oracle };

const char* to_string(PhiStarSource source) noexcept;

struct PhiStar {
  double value = 0.0;
  PhiStarSource source = PhiStarSource::None;
};

struct Metrics {
  double recon_error = 0.0;  // ||x - D alpha_hat||_2
  std::optional<double> obj_gap;
  PhiStarSource phi_star_source = PhiStarSource::None;
  std::optional<double> phi_star;
  std::size_t nnz = 0;
  double wall_time_s = 0.0;  // measured by the caller around the solve
};

// Phi_lambda(alpha*) when the problem carries ground truth.
std::optional<PhiStar> truth_phi_star(const Problem& problem, double lambda);

// obj_gap = solution.objective - phi_star.value when phi_star is supplied.
Metrics compute_metrics(const Problem& problem, const Solution& solution,
                        std::optional<PhiStar> phi_star, double wall_time_s = 0.0);

// { j : truth_j != 0 } == { j : alpha_j != 0 }. Throws DimensionError on
// length mismatch.
bool support_recovered(const DenseVector& truth, const DenseVector& alpha);

}  // namespace hcd

#include "hcd/metrics.hpp"

#include "hcd/error.hpp"

namespace hcd {

const char* to_string(PhiStarSource source) noexcept {
  switch (source) {
    case PhiStarSource::None: return "none";
    case PhiStarSource::Truth: return "truth";
    case PhiStarSource::Oracle: return "oracle";
  }
  return "none";
}

std::optional<PhiStar> truth_phi_star(const Problem& problem, double lambda) {
  if (!problem.truth) return std::nullopt;
  return PhiStar{objective(problem, *problem.truth, lambda), PhiStarSource::Truth};
}

Metrics compute_metrics(const Problem& problem, const Solution& solution,
                        std::optional<PhiStar> phi_star, double wall_time_s) {
  validate_dimensions(problem);
  if (solution.alpha.size() != problem.atoms()) {
    throw DimensionError("solution length != dictionary cols");
  }
  Metrics m;
  m.recon_error = norm2(subtract(problem.signal, matvec(problem.dictionary, solution.alpha)).span());
  m.nnz = count_nonzero(solution.alpha.span());
  m.wall_time_s = wall_time_s;
  if (phi_star && phi_star->source != PhiStarSource::None) {
    m.phi_star = phi_star->value;
    m.phi_star_source = phi_star->source;
    m.obj_gap = solution.objective - phi_star->value;
  }
  return m;
}

bool support_recovered(const DenseVector& truth, const DenseVector& alpha) {
  if (truth.size() != alpha.size()) throw DimensionError("support_recovered: length mismatch");
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if ((truth[j] != 0.0) != (alpha[j] != 0.0)) return false;
  }
  return true;
}

}  // namespace hcd

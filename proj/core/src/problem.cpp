#include "hcd/problem.hpp"

#include <cmath>
#include <string>

#include "hcd/error.hpp"

namespace hcd {

void validate_dimensions(const Problem& problem) {
  if (problem.dictionary.rows() == 0 || problem.dictionary.cols() == 0) {
    throw DimensionError("dictionary must be non-empty");
  }
  if (problem.signal.size() != problem.dictionary.rows()) {
    throw DimensionError("signal length " + std::to_string(problem.signal.size()) +
                         " != dictionary rows " + std::to_string(problem.dictionary.rows()));
  }
  if (problem.truth && problem.truth->size() != problem.dictionary.cols()) {
    throw DimensionError("truth length " + std::to_string(problem.truth->size()) +
                         " != dictionary cols " + std::to_string(problem.dictionary.cols()));
  }
}

double max_column_norm_deviation(const DenseMatrix& m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    worst = std::max(worst, std::abs(norm2(m.col(j)) - 1.0));
  }
  return worst;
}

void require_unit_columns(const DenseMatrix& m, double tol) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const double n = norm2(m.col(j));
    if (std::abs(n - 1.0) > tol) {
      throw NormalizationError("dictionary column " + std::to_string(j) + " has norm " +
                               std::to_string(n) + ", expected 1");
    }
  }
}

}  // namespace hcd

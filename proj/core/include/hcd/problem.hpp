#pragma once

#include <optional>

#include "hcd/linalg.hpp"

namespace hcd {

// Sensing dictionary D (d x K), observed signal x (length d) and, for
// synthetic data, the generating sparse code alpha* (length K).
struct Problem {
  DenseMatrix dictionary;
  DenseVector signal;
  std::optional<DenseVector> truth;

  std::size_t dim() const noexcept { return dictionary.rows(); }
  std::size_t atoms() const noexcept { return dictionary.cols(); }
};

// Throws DimensionError on inconsistent sizes.
void validate_dimensions(const Problem& problem);

// Throws NormalizationError if any column norm deviates from 1 by more than `tol`.
void require_unit_columns(const DenseMatrix& m, double tol = 1e-8);

// Largest |norm(d_j) - 1| over all columns.
double max_column_norm_deviation(const DenseMatrix& m);

}  // namespace hcd

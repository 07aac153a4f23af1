#include "hcd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcd/error.hpp"

namespace hcd {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

DenseVector::DenseVector(std::size_t len, double fill) : data_(len, fill) {
  require_finite(data_, "vector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "vector");
}

DenseVector::DenseVector(std::vector<double> values) : data_(std::move(values)) {
  require_finite(data_, "vector");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_, "matrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  require_finite(data_, "matrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row literal");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  require_finite(m.data_, "matrix");
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::size_t count_nonzero(std::span<const double> v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

DenseVector matvec(const DenseMatrix& m, const DenseVector& v) {
  if (v.size() != m.cols()) {
    throw DimensionError("matvec: vector length " + std::to_string(v.size()) +
                         " != matrix cols " + std::to_string(m.cols()));
  }
  DenseVector out(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const double vj = v[j];
    if (vj == 0.0) continue;
    const auto c = m.col(j);
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] += c[i] * vj;
  }
  return out;
}

DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& v) {
  if (v.size() != m.rows()) {
    throw DimensionError("matvec_transposed: vector length " + std::to_string(v.size()) +
                         " != matrix rows " + std::to_string(m.rows()));
  }
  DenseVector out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) out[j] = dot(m.col(j), v.span());
  return out;
}

double column_dot(const DenseMatrix& m, std::size_t j, const DenseVector& v) {
  if (j >= m.cols()) {
    throw IndexError("column " + std::to_string(j) + " out of range for " +
                     std::to_string(m.cols()) + " columns");
  }
  if (v.size() != m.rows()) throw DimensionError("column_dot: vector length mismatch");
  return dot(m.col(j), v.span());
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw DimensionError("subtract: length mismatch");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Residual::Residual(const DenseMatrix& m, const DenseVector& x, const DenseVector& alpha) {
  refresh(m, x, alpha);
}

void Residual::coordinate_update(const DenseMatrix& m, std::size_t j, double old_value,
                                 double new_value) {
  if (j >= m.cols()) {
    throw IndexError("residual update: column " + std::to_string(j) + " out of range");
  }
  if (r_.size() != m.rows()) throw DimensionError("residual update: length mismatch");
  const double step = new_value - old_value;
  if (step == 0.0) return;
  const auto c = m.col(j);
  for (std::size_t i = 0; i < r_.size(); ++i) r_[i] -= c[i] * step;
}

void Residual::refresh(const DenseMatrix& m, const DenseVector& x, const DenseVector& alpha) {
  if (x.size() != m.rows()) throw DimensionError("residual: signal length mismatch");
  r_ = subtract(x, matvec(m, alpha));
}

}  // namespace hcd

#pragma once

// Minimal dense linear algebra used by the solvers: column-major matrices,
// matrix-vector products, per-column inner products and an incrementally
// maintained residual r = x - D*alpha.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hcd {

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t len, double fill = 0.0);
  DenseVector(std::initializer_list<double> values);
  // Throws InputError if any entry is NaN/Inf.
  explicit DenseVector(std::vector<double> values);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

// Column-major rows x cols matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // `column_major` must hold rows*cols finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  static DenseMatrix identity(std::size_t n);
  // Row-by-row literal, convenient for small fixed matrices.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  const std::vector<double>& values() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double squared_norm(std::span<const double> v);
double norm_inf(std::span<const double> v);
std::size_t count_nonzero(std::span<const double> v);

// M * v.
DenseVector matvec(const DenseMatrix& m, const DenseVector& v);
// M^T * v.
DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& v);
// Inner product of column j with v.
double column_dot(const DenseMatrix& m, std::size_t j, const DenseVector& v);

DenseVector subtract(const DenseVector& a, const DenseVector& b);

// r = x - M*alpha, kept current under single-coordinate changes of alpha.
class Residual {
 public:
  Residual() = default;
  Residual(const DenseMatrix& m, const DenseVector& x, const DenseVector& alpha);

  // alpha_j changed from old_value to new_value: r <- r - d_j*(new - old).
  void coordinate_update(const DenseMatrix& m, std::size_t j, double old_value,
                         double new_value);
  // Full recomputation, used once per middle-loop iteration to bound drift.
  void refresh(const DenseMatrix& m, const DenseVector& x, const DenseVector& alpha);

  const DenseVector& vector() const noexcept { return r_; }
  std::size_t size() const noexcept { return r_.size(); }

 private:
  DenseVector r_;
};

}  // namespace hcd

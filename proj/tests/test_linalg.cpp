#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace hcd;

TEST_CASE("dense types reject non-finite values and bad shapes") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DenseVector({1.0, nan}), InputError);
  CHECK_THROWS_AS(DenseVector({inf}), InputError);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(DenseMatrix(1, 2, std::vector<double>{1, inf}), InputError);
}

TEST_CASE("matvec examples") {
  CHECK(matvec(DenseMatrix::identity(2), DenseVector{3, -4}) == DenseVector{3, -4});
  CHECK(matvec(DenseMatrix(3, 2), DenseVector{5, -1}) == DenseVector{0, 0, 0});
  const DenseMatrix m = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  CHECK(matvec(m, DenseVector{1, 1}) == DenseVector{3, 7});
  CHECK(matvec_transposed(m, DenseVector{1, 1}) == DenseVector{4, 6});
  CHECK_THROWS_AS(matvec(m, DenseVector{1, 1, 1}), DimensionError);
  CHECK_THROWS_AS(matvec_transposed(m, DenseVector{1}), DimensionError);
}

TEST_CASE("matvec against unit vectors returns columns exactly") {
  std::mt19937_64 rng(11);
  const DenseMatrix m = test::unit_gaussian(7, 9, rng);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    DenseVector e(m.cols());
    e[j] = 1.0;
    const DenseVector out = matvec(m, e);
    for (std::size_t i = 0; i < m.rows(); ++i) CHECK(out[i] == m(i, j));
  }
}

TEST_CASE("column_dot examples and errors") {
  CHECK(column_dot(DenseMatrix::identity(3), 1, DenseVector{5, 6, 7}) == 6.0);
  const DenseMatrix m = DenseMatrix::from_rows({{1, 9}, {2, 9}});
  CHECK(column_dot(m, 0, DenseVector{3, 4}) == 11.0);
  CHECK(column_dot(m, 1, DenseVector{0, 0}) == 0.0);
  CHECK_THROWS_AS(column_dot(m, 2, DenseVector{3, 4}), IndexError);
  CHECK_THROWS_AS(column_dot(m, 0, DenseVector{3}), DimensionError);
}

TEST_CASE("vector norms") {
  const DenseVector v{3, -4, 0};
  CHECK(norm2(v.span()) == 5.0);
  CHECK(squared_norm(v.span()) == 25.0);
  CHECK(norm_inf(v.span()) == 4.0);
  CHECK(count_nonzero(v.span()) == 2);
  CHECK(count_nonzero(DenseVector{-0.0, 1e-300}.span()) == 1);
  CHECK(subtract(DenseVector{1, 2}, DenseVector{0.5, 3}) == DenseVector{0.5, -1});
}

TEST_CASE("residual coordinate update examples") {
  const DenseMatrix m = DenseMatrix::from_rows({{1, 0.5}, {0, 2}});
  const DenseVector x{1, 1};
  Residual r(m, x, DenseVector(2));
  CHECK(r.vector() == x);

  r.coordinate_update(m, 1, 0.0, 0.0);
  CHECK(r.vector() == x);

  // alpha_1: 0 -> c gives x - c d_1
  r.coordinate_update(m, 1, 0.0, 2.0);
  CHECK(r.vector() == DenseVector{0, -3});
  CHECK_THROWS_AS(r.coordinate_update(m, 5, 0.0, 1.0), IndexError);
}

TEST_CASE("residual matches recomputation on a random 5x8 instance") {
  std::mt19937_64 rng(5);
  const DenseMatrix m = test::unit_gaussian(5, 8, rng);
  const DenseVector x = test::gaussian_vector(5, rng);
  DenseVector a(8);
  Residual r(m, x, a);
  std::uniform_int_distribution<std::size_t> pick(0, 7);
  std::normal_distribution<double> val(0.0, 1.0);
  for (int step = 0; step < 10; ++step) {
    const std::size_t j = pick(rng);
    const double nv = val(rng);
    r.coordinate_update(m, j, a[j], nv);
    a[j] = nv;
  }
  for (std::size_t i = 0; i < 5; ++i) {
    double direct = x[i];
    for (std::size_t j = 0; j < 8; ++j) direct -= m(i, j) * a[j];
    CHECK(r.vector()[i] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("residual drift stays within 1e-9 over random update sequences") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> dim(1, 32);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = dim(rng), K = dim(rng);
    const DenseMatrix m = test::unit_gaussian(d, K, rng);
    const DenseVector x = test::gaussian_vector(d, rng, 5.0);
    DenseVector a(K);
    Residual r(m, x, a);
    std::uniform_int_distribution<std::size_t> pick(0, K - 1);
    std::normal_distribution<double> val(0.0, 3.0);
    for (int step = 0; step < 100; ++step) {
      const std::size_t j = pick(rng);
      const double nv = step % 7 == 0 ? 0.0 : val(rng);
      r.coordinate_update(m, j, a[j], nv);
      a[j] = nv;
    }
    const Residual fresh(m, x, a);
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      diff += (r.vector()[i] - fresh.vector()[i]) * (r.vector()[i] - fresh.vector()[i]);
    }
    CHECK(std::sqrt(diff) <= 1e-9 * (1.0 + norm2(fresh.vector().span())));
  }
}

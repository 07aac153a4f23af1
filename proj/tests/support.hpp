#pragma once

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

#include "hcd/hcd.hpp"

namespace hcd::test {

// Gaussian matrix with unit columns, drawn independently of the library's
// generator so tests do not share its code path.
inline DenseMatrix unit_gaussian(std::size_t d, std::size_t K, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> data(d * K);
  for (std::size_t j = 0; j < K; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      data[j * d + i] = n(rng);
      ss += data[j * d + i] * data[j * d + i];
    }
    const double norm = std::sqrt(ss);
    for (std::size_t i = 0; i < d; ++i) data[j * d + i] /= norm;
  }
  return DenseMatrix(d, K, std::move(data));
}

inline DenseVector gaussian_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return DenseVector(std::move(v));
}

// x = D a with `s` random nonzeros in a, plus optional gaussian noise.
inline Problem sparse_instance(std::size_t d, std::size_t K, std::size_t s, double sigma,
                               std::mt19937_64& rng) {
  Problem p;
  p.dictionary = unit_gaussian(d, K, rng);
  std::vector<std::size_t> idx(K);
  for (std::size_t j = 0; j < K; ++j) idx[j] = j;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::normal_distribution<double> n(0.0, 1.0);
  DenseVector a(K);
  for (std::size_t k = 0; k < s; ++k) a[idx[k]] = n(rng);
  std::vector<double> x(d, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t i = 0; i < d; ++i) x[i] += p.dictionary(i, j) * a[j];
  }
  if (sigma > 0) {
    std::normal_distribution<double> z(0.0, sigma);
    for (double& v : x) v += z(rng);
  }
  p.signal = DenseVector(std::move(x));
  p.truth = a;
  return p;
}

// Direct evaluation of the objective with plain loops.
inline double naive_objective(const Problem& p, const DenseVector& a, double lambda) {
  double rss = 0.0;
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    double r = p.signal[i];
    for (std::size_t j = 0; j < p.atoms(); ++j) r -= p.dictionary(i, j) * a[j];
    rss += r * r;
  }
  for (std::size_t j = 0; j < p.atoms(); ++j) nnz += a[j] != 0.0 ? 1 : 0;
  return 0.5 * rss + lambda * static_cast<double>(nnz);
}

// Modified Gram-Schmidt on a random square matrix.
inline DenseMatrix random_orthonormal(std::size_t n, std::mt19937_64& rng) {
  DenseMatrix g = unit_gaussian(n, n, rng);
  std::vector<double> q(g.values());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q[k * n + i] * q[j * n + i];
      for (std::size_t i = 0; i < n; ++i) q[j * n + i] -= dot * q[k * n + i];
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += q[j * n + i] * q[j * n + i];
    const double norm = std::sqrt(ss);
    for (std::size_t i = 0; i < n; ++i) q[j * n + i] /= norm;
  }
  return DenseMatrix(n, n, std::move(q));
}

}  // namespace hcd::test

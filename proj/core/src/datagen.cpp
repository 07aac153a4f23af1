#include "hcd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hcd/error.hpp"

namespace hcd {

namespace {

std::mt19937_64 substream(std::uint64_t seed, Stream purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

}  // namespace

const char* to_string(Distribution dist) noexcept {
  return dist == Distribution::Normal ? "normal" : "uniform";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "normal") return Distribution::Normal;
  if (name == "uniform") return Distribution::Uniform;
  throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

void GenSpec::validate() const {
  if (d < 1) throw ParameterError("d must be at least 1");
  if (K < 1) throw ParameterError("K must be at least 1");
  if (s < 1 || s > K) {
    throw ParameterError("sparsity s=" + std::to_string(s) + " must satisfy 0 < s <= K=" +
                         std::to_string(K));
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be >= 0");
}

DenseMatrix sample_raw_dictionary(Distribution dist, std::size_t d, std::size_t K,
                                  std::uint64_t seed) {
  auto rng = substream(seed, Stream::Dictionary);
  std::vector<double> data(d * K);
  if (dist == Distribution::Normal) {
    std::normal_distribution<double> draw(0.0, 1.0);
    for (double& v : data) v = draw(rng);
  } else {
    std::uniform_real_distribution<double> draw(-1.0, 1.0);
    for (double& v : data) v = draw(rng);
  }
  return DenseMatrix(d, K, std::move(data));
}

std::pair<DenseMatrix, DenseVector> normalize_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  DenseVector norms(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const double n = norm2(m.col(j));
    if (n == 0.0) throw NormalizationError("column " + std::to_string(j) + " is zero");
    norms[j] = n;
    for (double& v : out.col(j)) v /= n;
  }
  return {std::move(out), std::move(norms)};
}

DenseMatrix random_dictionary(Distribution dist, std::size_t d, std::size_t K, std::uint64_t seed) {
  return normalize_columns(sample_raw_dictionary(dist, d, K, seed)).first;
}

Problem generate(const GenSpec& spec, DenseVector* pre_norms) {
  spec.validate();
  auto [dict, norms] = normalize_columns(sample_raw_dictionary(spec.dist, spec.d, spec.K, spec.seed));

  // Support: partial Fisher-Yates, then sorted.
  auto support_rng = substream(spec.seed, Stream::Support);
  std::vector<std::size_t> perm(spec.K);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < spec.s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, spec.K - 1);
    std::swap(perm[i], perm[pick(support_rng)]);
  }
  std::vector<std::size_t> support(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.s));
  std::sort(support.begin(), support.end());

  auto truth_rng = substream(spec.seed, Stream::Truth);
  std::normal_distribution<double> coef(0.0, 1.0);
  DenseVector truth(spec.K);
  for (std::size_t j : support) {
    double v = 0.0;
    // An exact zero would silently shrink the support.
    while (v == 0.0) v = coef(truth_rng);
    truth[j] = v * norms[j];
  }

  DenseVector signal = matvec(dict, truth);
  if (spec.sigma > 0.0) {
    auto noise_rng = substream(spec.seed, Stream::Noise);
    if (spec.dist == Distribution::Normal) {
      std::normal_distribution<double> noise(0.0, spec.sigma);
      for (double& v : signal) v += noise(noise_rng);
    } else {
      std::uniform_real_distribution<double> noise(-spec.sigma, spec.sigma);
      for (double& v : signal) v += noise(noise_rng);
    }
  }

  if (pre_norms) *pre_norms = norms;
  return Problem{std::move(dict), std::move(signal), std::move(truth)};
}

std::vector<DenseVector> extract_patches(const GrayImage& image, std::size_t patch,
                                         std::size_t count, std::uint64_t seed) {
  if (patch == 0) throw ParameterError("patch size must be positive");
  if (count == 0) throw ParameterError("patch count must be positive");
  if (patch > image.width || patch > image.height) {
    throw ParameterError("patch " + std::to_string(patch) + " larger than image " +
                         std::to_string(image.width) + "x" + std::to_string(image.height));
  }
  auto rng = substream(seed, Stream::Patches);
  std::uniform_int_distribution<std::size_t> row_pick(0, image.height - patch);
  std::uniform_int_distribution<std::size_t> col_pick(0, image.width - patch);

  std::vector<DenseVector> patches;
  patches.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t top = row_pick(rng);
    const std::size_t left = col_pick(rng);
    DenseVector v(patch * patch);
    for (std::size_t r = 0; r < patch; ++r) {
      for (std::size_t c = 0; c < patch; ++c) v[r * patch + c] = image.at(top + r, left + c);
    }
    patches.push_back(std::move(v));
  }
  return patches;
}

}  // namespace hcd

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hcd/linalg.hpp"
#include "hcd/problem.hpp"

namespace hcd {

enum class Distribution { Normal, Uniform };

const char* to_string(Distribution dist) noexcept;
// Throws ParameterError for anything but "normal" / "uniform".
Distribution parse_distribution(std::string_view name);

// Synthetic compressed-sensing instance x = D alpha* + z.
//   normal:  D_ij ~ N(0,1),    alpha*_j ~ N(0,1) on s coordinates, z_i ~ N(0, sigma^2)
//   uniform: D_ij ~ U[-1,1],   alpha*_j ~ N(0,1) on s coordinates, z_i ~ U[-sigma, sigma]
struct GenSpec {
  Distribution dist = Distribution::Normal;
  std::size_t d = 300;
  std::size_t K = 2000;
  std::size_t s = 20;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  // Throws ParameterError unless d >= 1, 0 < s <= K, sigma >= 0.
  void validate() const;
};

// Generator algorithm recorded in manifests.
inline constexpr std::string_view kPrngName = "mt19937_64";

// Independent substreams per purpose so that, e.g., changing sigma leaves D
// and alpha* untouched.
enum class Stream : std::uint32_t { Dictionary = 1, Support = 2, Truth = 3, Noise = 4, Patches = 5 };

// Sampled d x K matrix before column normalization.
DenseMatrix sample_raw_dictionary(Distribution dist, std::size_t d, std::size_t K,
                                  std::uint64_t seed);

// Unit-norm columns plus the norms they had before. Throws NormalizationError
// on a zero column.
std::pair<DenseMatrix, DenseVector> normalize_columns(const DenseMatrix& m);

// Deterministic for a fixed spec. Columns of D are unit-norm; alpha* is
// rescaled by the pre-normalization column norms so x = D alpha* + z holds
// for the stored (normalized) D. `pre_norms`, when given, receives those norms.
Problem generate(const GenSpec& spec, DenseVector* pre_norms = nullptr);

// Normalized random dictionary of the given distribution.
DenseMatrix random_dictionary(Distribution dist, std::size_t d, std::size_t K, std::uint64_t seed);

// Single-channel image with pixel values scaled to [0, 1], stored row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

// Plain PGM, ASCII (P2) or binary (P5), maxval <= 65535. Throws ParseError.
GrayImage parse_pgm(std::string_view bytes);
GrayImage read_pgm(const std::filesystem::path& path);
// Writes P2 with the given maxval, rounding pixel * maxval.
void write_pgm(const std::filesystem::path& path, const GrayImage& image, unsigned maxval = 255);

// `count` patch x patch blocks at uniformly random top-left offsets, each
// flattened row-major. Throws ParameterError if the patch does not fit.
std::vector<DenseVector> extract_patches(const GrayImage& image, std::size_t patch,
                                         std::size_t count, std::uint64_t seed);

}  // namespace hcd

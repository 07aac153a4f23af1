#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "hcd/datagen.hpp"
#include "hcd/error.hpp"

namespace hcd {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads an unsigned decimal token.
  unsigned long next_uint(const char* what) {
    skip_space_and_comments();
    const char* begin = bytes_.data() + pos_;
    const char* end = bytes_.data() + bytes_.size();
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) {
      throw ParseError(std::string("PGM: expected ") + what);
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::string_view magic() {
    if (bytes_.size() < 2) throw ParseError("PGM: file too short");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  // Binary raster starts after exactly one whitespace byte following maxval.
  std::string_view raster() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError("PGM: missing separator before raster");
    }
    return bytes_.substr(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  PgmReader reader(bytes);
  const std::string_view magic = reader.magic();
  if (magic != "P2" && magic != "P5") {
    throw ParseError("PGM: unsupported magic '" + std::string(magic) +
                     "' (only single-channel P2/P5 accepted)");
  }
  GrayImage image;
  image.width = reader.next_uint("width");
  image.height = reader.next_uint("height");
  const unsigned long maxval = reader.next_uint("maxval");
  if (image.width == 0 || image.height == 0) throw ParseError("PGM: empty image");
  if (maxval == 0 || maxval > 65535) throw ParseError("PGM: maxval must be in [1, 65535]");

  const std::size_t n = image.width * image.height;
  image.pixels.resize(n);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned long v = reader.next_uint("pixel value");
      if (v > maxval) throw ParseError("PGM: pixel value exceeds maxval");
      image.pixels[i] = static_cast<double>(v) * scale;
    }
  } else {
    const std::string_view raster = reader.raster();
    const std::size_t bytes_per_pixel = maxval > 255 ? 2 : 1;
    if (raster.size() < n * bytes_per_pixel) throw ParseError("PGM: truncated raster");
    for (std::size_t i = 0; i < n; ++i) {
      unsigned long v = static_cast<unsigned char>(raster[i * bytes_per_pixel]);
      if (bytes_per_pixel == 2) {
        v = (v << 8) | static_cast<unsigned char>(raster[i * 2 + 1]);  // big-endian
      }
      if (v > maxval) throw ParseError("PGM: pixel value exceeds maxval");
      image.pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return image;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw ParameterError("maxval must be in [1, 65535]");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P2\n" << image.width << ' ' << image.height << '\n' << maxval << '\n';
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t c = 0; c < image.width; ++c) {
      const double v = std::clamp(image.at(r, c), 0.0, 1.0);
      out << (c ? " " : "") << static_cast<unsigned>(std::lround(v * maxval));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace hcd

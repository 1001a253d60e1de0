#include "shiftdecon/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "shiftdecon/error.hpp"

namespace shiftdecon {

namespace {

// Skips whitespace and '#' comments that run to end of line.
void skip_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

Index read_header_int(std::istream& in, const char* what) {
  skip_space(in);
  std::string digits;
  while (std::isdigit(in.peek())) digits.push_back(static_cast<char>(in.get()));
  if (digits.empty() || digits.size() > 9) {
    throw Error(ErrorKind::Format, std::string("bad ") + what + " in netpbm header");
  }
  return std::stoll(digits);
}

}  // namespace

unsigned char quantize_sample(double v) noexcept {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::round(c * 255.0));
}

ImageRaster read_netpbm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw Error(ErrorKind::Format, "not a binary PGM (P5) or PPM (P6) file");
  }
  const int channels = magic[1] == '5' ? 1 : 3;
  const Index width = read_header_int(in, "width");
  const Index height = read_header_int(in, "height");
  const Index maxval = read_header_int(in, "maxval");
  if (width < 1 || height < 1) throw Error(ErrorKind::Format, "image dimensions must be >= 1");
  if (maxval != 255) {
    throw Error(ErrorKind::Format, "unsupported maxval " + std::to_string(maxval) + " (need 255)");
  }
  // exactly one whitespace byte separates the header from the raster
  if (!std::isspace(in.get())) throw Error(ErrorKind::Format, "missing whitespace after maxval");

  const auto n = static_cast<std::size_t>(width * height * channels);
  std::string raw(n, '\0');
  if (!in.read(raw.data(), static_cast<std::streamsize>(n))) {
    throw Error(ErrorKind::Format, "truncated raster: expected " + std::to_string(n) + " bytes");
  }
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = static_cast<double>(static_cast<unsigned char>(raw[i])) / 255.0;
  }
  return ImageRaster(width, height, channels, std::move(samples));
}

void write_netpbm(std::ostream& out, const ImageRaster& img) {
  out << (img.channels() == 1 ? "P5" : "P6") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << "255\n";
  std::string raw;
  raw.reserve(img.samples().size());
  for (double v : img.samples()) raw.push_back(static_cast<char>(quantize_sample(v)));
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

ImageRaster read_netpbm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_netpbm(in);
}

void write_netpbm_file(const std::filesystem::path& path, const ImageRaster& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_netpbm(out, img);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace shiftdecon

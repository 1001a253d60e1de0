#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shiftdecon/signal.hpp"

namespace shiftdecon {

enum class Axis { X, Y };

/// width x height x channels grid of real samples, row-major with interleaved
/// channels: sample (x, y, c) lives at (y * width + x) * channels + c.
/// Ingested samples are in [0, 1]; intermediate results may leave that range.
class ImageRaster {
 public:
  ImageRaster(Index width, Index height, int channels);
  ImageRaster(Index width, Index height, int channels, std::vector<double> samples);

  Index width() const noexcept { return width_; }
  Index height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::span<const double> samples() const noexcept { return samples_; }

  double at(Index x, Index y, int c) const noexcept { return samples_[offset(x, y, c)]; }
  double& at(Index x, Index y, int c) noexcept { return samples_[offset(x, y, c)]; }

  /// Length of a line along `axis` (width for X, height for Y).
  Index extent(Axis axis) const noexcept { return axis == Axis::X ? width_ : height_; }
  /// Number of lines along `axis` (height for X, width for Y).
  Index line_count(Axis axis) const noexcept { return axis == Axis::X ? height_ : width_; }

  std::vector<double> line(Axis axis, Index index, int channel) const;
  void set_line(Axis axis, Index index, int channel, std::span<const double> values);

  friend bool operator==(const ImageRaster&, const ImageRaster&) = default;

 private:
  std::size_t offset(Index x, Index y, int c) const noexcept {
    return static_cast<std::size_t>((y * width_ + x) * channels_ + c);
  }

  Index width_;
  Index height_;
  int channels_;
  std::vector<double> samples_;
};

struct SeparableKernel2D {
  Signal1D sx;
  Signal1D sy;
};

enum class Method { Step, Modified, Combined };
enum class Order { XThenY, YThenX };

struct DeblurOptions {
  double divergence_factor = 1e6;
  bool normalize = true;            ///< step method: divide by s0
  std::optional<Index> half_width;  ///< combined: L (default extent + 1)
  std::optional<Index> center;      ///< combined: C (default argmax |s|)
  std::optional<int> steps;         ///< modified: doubling steps (default: enough to clear the line)
};

struct MotionDeblurResult {
  ImageRaster image;
  int steps_used = 0;
};

// Image kernels are applied in their local frame: the kernel's offset is ignored
// and the output grid starts at 0.

/// Convolves every line along `axis` with s; that dimension grows by len(s) - 1.
ImageRaster blur_axis(const ImageRaster& img, const Signal1D& s, Axis axis);

/// Deconvolves every line of every channel along `axis`; that dimension shrinks
/// by len(s) - 1. The combined method solves one combination and reuses it for
/// all lines. A diverging line aborts with its coordinates in the message.
ImageRaster deblur_axis(const ImageRaster& img, const Signal1D& s, Axis axis, Method method,
                        const DeblurOptions& opts = {});

/// Uniform motion along `axis` by a normalized boxcar of length l (coefficients
/// 1/l): differencing turns the kernel into (delta_0 - delta_l)/l, after which
/// ceil(log2(extent/l)) doubling steps clear the line.
/// steps_used counts the differencing step plus the doubling steps.
MotionDeblurResult motion_deblur_uniform(const ImageRaster& img, Index l, Axis axis);

/// Same as motion_deblur_uniform for a boxcar with any common coefficient.
/// Throws KernelShape unless all coefficients of `boxcar` are equal.
MotionDeblurResult motion_deblur(const ImageRaster& img, const Signal1D& boxcar, Axis axis,
                                 std::optional<int> doubling_steps_override = std::nullopt,
                                 double divergence_factor = 1e6);

/// Restores an image blurred by sx (x) sy, one axis after the other.
ImageRaster deblur_separable(const ImageRaster& img, const SeparableKernel2D& k, Order order,
                             Method method, const DeblurOptions& opts = {});

/// exp(-k^2 / (2 sigma^2)) for k in [-radius, radius]; offset -radius, peak 1.
Signal1D make_gaussian_kernel(double sigma, Index radius);

/// l equal coefficients 1/l at offsets 0..l-1.
Signal1D make_boxcar_kernel(Index l);

bool is_boxcar(const Signal1D& s);

ImageRaster add_noise(const ImageRaster& img, const NoiseSpec& spec);

/// Throws InvalidArgument when the shapes differ.
double max_abs_error(const ImageRaster& a, const ImageRaster& b);
double rms_error(const ImageRaster& a, const ImageRaster& b);

}  // namespace shiftdecon

#include "shiftdecon/image.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "shiftdecon/combined_shift.hpp"
#include "shiftdecon/error.hpp"
#include "shiftdecon/step_shift.hpp"

namespace shiftdecon {

namespace {

const char* axis_name(Axis axis) { return axis == Axis::X ? "x" : "y"; }

std::string where(Axis axis, Index line, int channel) {
  return std::string(axis == Axis::X ? "row " : "column ") + std::to_string(line) + ", channel " +
         std::to_string(channel);
}

// Kernel values in raster space: the offset is dropped.
Signal1D local(const Signal1D& s) { return shift(s, -s.offset()); }

ImageRaster resized(const ImageRaster& img, Axis axis, Index extent) {
  return axis == Axis::X ? ImageRaster(extent, img.height(), img.channels())
                         : ImageRaster(img.width(), extent, img.channels());
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::vector<double> read_out(const Signal1D& est, Index n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = est.at(i);
  return out;
}

void check_shapes(const ImageRaster& a, const ImageRaster& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw Error(ErrorKind::InvalidArgument, "images differ in shape");
  }
}

// Runs `fn(line_values, axis, index, channel) -> vector` for every line.
template <class Fn>
ImageRaster map_lines(const ImageRaster& img, Axis axis, Index out_extent, Fn&& fn) {
  ImageRaster out = resized(img, axis, out_extent);
  for (int c = 0; c < img.channels(); ++c) {
    for (Index i = 0; i < img.line_count(axis); ++i) {
      out.set_line(axis, i, c, fn(img.line(axis, i, c), i, c));
    }
  }
  return out;
}

}  // namespace

ImageRaster::ImageRaster(Index width, Index height, int channels)
    : ImageRaster(width, height, channels,
                  std::vector<double>(width > 0 && height > 0 && channels > 0
                                          ? static_cast<std::size_t>(width * height * channels)
                                          : 0)) {}

ImageRaster::ImageRaster(Index width, Index height, int channels, std::vector<double> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  if (width_ < 1 || height_ < 1) throw Error(ErrorKind::InvalidArgument, "image dimensions must be >= 1");
  if (channels_ != 1 && channels_ != 3) throw Error(ErrorKind::InvalidArgument, "channels must be 1 or 3");
  if (samples_.size() != static_cast<std::size_t>(width_ * height_ * channels_)) {
    throw Error(ErrorKind::InvalidArgument, "sample count does not match width*height*channels");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "image samples must be finite");
  }
}

std::vector<double> ImageRaster::line(Axis axis, Index index, int channel) const {
  const Index n = extent(axis);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    v[static_cast<std::size_t>(k)] = axis == Axis::X ? at(k, index, channel) : at(index, k, channel);
  }
  return v;
}

void ImageRaster::set_line(Axis axis, Index index, int channel, std::span<const double> values) {
  const Index n = extent(axis);
  if (static_cast<Index>(values.size()) != n) {
    throw Error(ErrorKind::InvalidArgument, "line length does not match the image extent");
  }
  for (Index k = 0; k < n; ++k) {
    (axis == Axis::X ? at(k, index, channel) : at(index, k, channel)) =
        values[static_cast<std::size_t>(k)];
  }
}

ImageRaster blur_axis(const ImageRaster& img, const Signal1D& s, Axis axis) {
  const Signal1D ls = local(s);
  const auto sv = ls.values();
  const Index K = static_cast<Index>(sv.size());
  const Index w_out = img.extent(axis) + K - 1;
  return map_lines(img, axis, w_out, [&](const std::vector<double>& h, Index, int) {
    std::vector<double> out(static_cast<std::size_t>(w_out), 0.0);
    for (Index p = 0; p < w_out; ++p) {
      double acc = 0.0;
      for (Index k = 0; k < K; ++k) {
        const Index m = p - k;
        if (m >= 0 && m < static_cast<Index>(h.size())) {
          acc += sv[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(m)];
        }
      }
      out[static_cast<std::size_t>(p)] = acc;
    }
    return out;
  });
}

ImageRaster deblur_axis(const ImageRaster& img, const Signal1D& s, Axis axis, Method method,
                        const DeblurOptions& opts) {
  if (s.is_zero()) throw Error(ErrorKind::InvalidArgument, "kernel is identically zero");
  const Signal1D S = local(s);
  const Index K = static_cast<Index>(S.size());
  const Index w_in = img.extent(axis);
  if (w_in < K) {
    throw Error(ErrorKind::IncompleteResponse,
                std::string("image extent along ") + axis_name(axis) + " (" + std::to_string(w_in) +
                    ") is shorter than the kernel (" + std::to_string(K) + ")");
  }
  const Index w_out = w_in - K + 1;

  switch (method) {
    case Method::Step: {
      if (S.values().front() == 0.0) {
        throw Error(ErrorKind::LeadingZeroKernel, "step method needs s0 != 0");
      }
      return map_lines(img, axis, w_out, [&](const std::vector<double>& line, Index i, int c) {
        if (all_zero(line)) return std::vector<double>(static_cast<std::size_t>(w_out), 0.0);
        const Signal1D H(0, line);
        const Index target = w_out - H.offset();
        if (target < 1) return std::vector<double>(static_cast<std::size_t>(w_out), 0.0);
        StepResult r;
        try {
          r = step_by_step(H, S, {target, opts.divergence_factor, opts.normalize});
        } catch (const DivergentError& e) {
          throw DivergentError(std::string(e.what()) + " at " + where(axis, i, c), e.trace());
        }
        if (r.trace.diverged) {
          throw DivergentError("step-by-step iteration diverged at step " +
                                   std::to_string(r.trace.steps.back().n) + " at " + where(axis, i, c),
                               r.trace);
        }
        return read_out(r.estimate, w_out);
      });
    }
    case Method::Modified: {
      const auto nonzero = std::count_if(S.values().begin(), S.values().end(),
                                         [](double x) { return x != 0.0; });
      if (nonzero == 2) {
        DoublingOptions dopts{opts.divergence_factor, opts.normalize, w_out};
        return map_lines(img, axis, w_out, [&](const std::vector<double>& line, Index i, int c) {
          if (all_zero(line)) return std::vector<double>(static_cast<std::size_t>(w_out), 0.0);
          try {
            return read_out(deconvolve_two_term(Signal1D(0, line), S, opts.steps, dopts).estimate,
                            w_out);
          } catch (const DivergentError& e) {
            throw DivergentError(std::string(e.what()) + " at " + where(axis, i, c), e.trace());
          }
        });
      }
      if (is_boxcar(S)) {
        return motion_deblur(img, S, axis, opts.steps, opts.divergence_factor).image;
      }
      throw Error(ErrorKind::KernelShape,
                  "modified method needs a two-term or boxcar kernel (got " + std::to_string(K) +
                      " coefficients)");
    }
    case Method::Combined: {
      const Index L = opts.half_width.value_or(w_out + 1);
      if (L <= w_out) {
        throw Error(ErrorKind::HalfWidthTooSmall,
                    "L = " + std::to_string(L) + " must exceed M = " + std::to_string(w_out));
      }
      const Index C = opts.center.value_or(dominant_index(S));
      const ShiftCombination comb = solve_combination(S, C, L, unit_target(L));
      return map_lines(img, axis, w_out, [&](const std::vector<double>& line, Index, int) {
        if (all_zero(line)) return std::vector<double>(static_cast<std::size_t>(w_out), 0.0);
        return read_out(extract_response(Signal1D(0, line), S, comb, 0, w_out), w_out);
      });
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown method");
}

bool is_boxcar(const Signal1D& s) {
  const auto v = s.values();
  return v.size() >= 2 && v.front() != 0.0 &&
         std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

MotionDeblurResult motion_deblur(const ImageRaster& img, const Signal1D& boxcar, Axis axis,
                                 std::optional<int> doubling_steps_override,
                                 double divergence_factor) {
  if (!is_boxcar(boxcar)) {
    throw Error(ErrorKind::KernelShape, "uniform motion needs a boxcar kernel with equal coefficients");
  }
  const Index l = static_cast<Index>(boxcar.size());
  const double c = boxcar.values().front();
  const Index w_in = img.extent(axis);
  if (w_in <= l) {
    throw Error(ErrorKind::BlurWiderThanImage,
                "motion length " + std::to_string(l) + " is not shorter than the image extent " +
                    std::to_string(w_in));
  }
  const Index w_out = w_in - l + 1;
  const int k = doubling_steps_override.value_or(doubling_steps(w_out, l));

  // H - H_(1) has kernel c (delta_0 - delta_l).
  std::vector<double> two(static_cast<std::size_t>(l + 1), 0.0);
  two.front() = c;
  two.back() = -c;
  const Signal1D S1(0, std::move(two));
  const DoublingOptions dopts{divergence_factor, true, w_out};

  ImageRaster out = map_lines(img, axis, w_out, [&](const std::vector<double>& line, Index i, int ch) {
    if (all_zero(line)) return std::vector<double>(static_cast<std::size_t>(w_out), 0.0);
    std::vector<double> diff(line.size() + 1);
    diff[0] = line[0];
    for (std::size_t p = 1; p < line.size(); ++p) diff[p] = line[p] - line[p - 1];
    diff.back() = -line.back();
    try {
      return read_out(modified_doubling(Signal1D(0, std::move(diff)), S1, k, dopts).estimate, w_out);
    } catch (const DivergentError& e) {
      throw DivergentError(std::string(e.what()) + " at " + where(axis, i, ch), e.trace());
    }
  });
  return {std::move(out), 1 + k};
}

MotionDeblurResult motion_deblur_uniform(const ImageRaster& img, Index l, Axis axis) {
  if (l < 2) throw Error(ErrorKind::InvalidArgument, "motion length must be >= 2");
  return motion_deblur(img, make_boxcar_kernel(l), axis);
}

ImageRaster deblur_separable(const ImageRaster& img, const SeparableKernel2D& k, Order order,
                             Method method, const DeblurOptions& opts) {
  const Axis first = order == Order::XThenY ? Axis::X : Axis::Y;
  const Axis second = order == Order::XThenY ? Axis::Y : Axis::X;
  const Signal1D& s1 = first == Axis::X ? k.sx : k.sy;
  const Signal1D& s2 = first == Axis::X ? k.sy : k.sx;

  auto stage = [&](const ImageRaster& in, const Signal1D& s, Axis axis, const char* tag) {
    const std::string prefix = std::string(tag) + " axis (" + axis_name(axis) + "): ";
    try {
      return deblur_axis(in, s, axis, method, opts);
    } catch (const DivergentError& e) {
      throw DivergentError(prefix + e.what(), e.trace());
    } catch (const Error& e) {
      throw Error(e.kind(), prefix + e.what());
    }
  };
  return stage(stage(img, s1, first, "first"), s2, second, "second");
}

Signal1D make_gaussian_kernel(double sigma, Index radius) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidArgument, "sigma must be finite and > 0");
  }
  if (radius < 1 || static_cast<double>(radius) < std::ceil(sigma)) {
    throw Error(ErrorKind::InvalidArgument, "radius must be >= max(1, ceil(sigma))");
  }
  std::vector<double> v(static_cast<std::size_t>(2 * radius + 1));
  for (Index k = 0; k <= radius; ++k) {
    const auto kd = static_cast<double>(k);
    const double g = std::exp(-kd * kd / (2.0 * sigma * sigma));
    v[static_cast<std::size_t>(radius + k)] = g;
    v[static_cast<std::size_t>(radius - k)] = g;
  }
  return Signal1D(-radius, std::move(v));
}

Signal1D make_boxcar_kernel(Index l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "boxcar length must be >= 1");
  return Signal1D(0, std::vector<double>(static_cast<std::size_t>(l), 1.0 / static_cast<double>(l)));
}

ImageRaster add_noise(const ImageRaster& img, const NoiseSpec& spec) {
  if (!(spec.level >= 0.0 && spec.level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "noise level must lie in [0, 1)");
  }
  if (spec.level == 0.0) return img;
  const auto s = img.samples();
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> dist(0.0, spec.level * peak);
  std::vector<double> out(s.begin(), s.end());
  for (double& v : out) v += dist(rng);
  return ImageRaster(img.width(), img.height(), img.channels(), std::move(out));
}

double max_abs_error(const ImageRaster& a, const ImageRaster& b) {
  check_shapes(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
  }
  return m;
}

double rms_error(const ImageRaster& a, const ImageRaster& b) {
  check_shapes(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.samples().size()));
}

}  // namespace shiftdecon

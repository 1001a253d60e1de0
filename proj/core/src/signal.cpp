#include "shiftdecon/signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shiftdecon/error.hpp"

namespace shiftdecon {

namespace {

IndexRange support_union(const Signal1D& a, const Signal1D& b) {
  return {std::min(a.offset(), b.offset()), std::max(a.last(), b.last())};
}

}  // namespace

Signal1D::Signal1D() : offset_(0), values_{0.0} {}

Signal1D::Signal1D(Index offset, std::vector<double> values)
    : offset_(offset), values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "signal must hold at least one value");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, "signal values must be finite");
    }
  }
  const auto first = std::find_if(values_.begin(), values_.end(),
                                  [](double v) { return v != 0.0; });
  if (first == values_.end()) {
    offset_ = 0;
    values_.assign(1, 0.0);
    return;
  }
  const auto last = std::find_if(values_.rbegin(), values_.rend(),
                                 [](double v) { return v != 0.0; }).base();
  offset_ += first - values_.begin();
  values_.erase(last, values_.end());
  values_.erase(values_.begin(), first);
}

Signal1D Signal1D::delta(Index at) { return Signal1D(at, {1.0}); }

double Signal1D::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Signal1D convolve(const Signal1D& h, const Signal1D& s) {
  const auto hv = h.values();
  const auto sv = s.values();
  const std::size_t nh = hv.size();
  const std::size_t ns = sv.size();
  std::vector<double> out(nh + ns - 1, 0.0);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const std::size_t k_lo = p >= nh ? p - (nh - 1) : 0;
    const std::size_t k_hi = std::min(p, ns - 1);
    double acc = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) acc += sv[k] * hv[p - k];
    out[p] = acc;
  }
  return Signal1D(h.offset() + s.offset(), std::move(out));
}

Signal1D shift(const Signal1D& x, Index l) {
  auto v = x.values();
  return Signal1D(x.offset() + l, std::vector<double>(v.begin(), v.end()));
}

Signal1D axpy(const Signal1D& x, double alpha, const Signal1D& y) {
  const IndexRange r = support_union(x, y);
  std::vector<double> out(static_cast<std::size_t>(r.hi - r.lo + 1));
  for (Index i = r.lo; i <= r.hi; ++i) {
    out[static_cast<std::size_t>(i - r.lo)] = x.at(i) + alpha * y.at(i);
  }
  return Signal1D(r.lo, std::move(out));
}

Signal1D mirror(const Signal1D& x) {
  auto v = x.values();
  return Signal1D(-x.last(), std::vector<double>(v.rbegin(), v.rend()));
}

Signal1D scale(const Signal1D& x, double factor) {
  auto v = x.values();
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e *= factor;
  return Signal1D(x.offset(), std::move(out));
}

double max_abs_error(const Signal1D& a, const Signal1D& b, std::optional<IndexRange> window) {
  const IndexRange r = window.value_or(support_union(a, b));
  if (r.lo > r.hi) throw Error(ErrorKind::EmptyWindow, "comparison window is empty");
  double m = 0.0;
  for (Index i = r.lo; i <= r.hi; ++i) m = std::max(m, std::abs(a.at(i) - b.at(i)));
  return m;
}

double rms_error(const Signal1D& a, const Signal1D& b, std::optional<IndexRange> window) {
  const IndexRange r = window.value_or(support_union(a, b));
  if (r.lo > r.hi) throw Error(ErrorKind::EmptyWindow, "comparison window is empty");
  double acc = 0.0;
  for (Index i = r.lo; i <= r.hi; ++i) {
    const double d = a.at(i) - b.at(i);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(r.hi - r.lo + 1));
}

Signal1D add_noise(const Signal1D& h, const NoiseSpec& spec) {
  if (!(spec.level >= 0.0) || !(spec.level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "noise level must lie in [0, 1)");
  }
  if (spec.level == 0.0) return h;
  const double sigma = spec.level * h.max_abs();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto v = h.values();
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e += sigma * gauss(rng);
  return Signal1D(h.offset(), std::move(out));
}

}  // namespace shiftdecon

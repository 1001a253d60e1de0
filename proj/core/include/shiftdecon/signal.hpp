#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace shiftdecon {

using Index = std::int64_t;

/// Finitely supported real sequence x = sum_i values[i] * delta_{offset + i}.
///
/// Signals are kept in canonical form: exact-zero coefficients at either end
/// are trimmed away (the threshold is exactly 0.0, never an epsilon), so the
/// first and last stored values are nonzero unless the signal is the zero
/// signal, which is stored as [0]@0. Coefficients outside the stored range
/// read as zero.
class Signal1D {
 public:
  /// The zero signal [0]@0.
  Signal1D();

  /// Throws Error(InvalidArgument) when `values` is empty or holds a
  /// non-finite number.
  Signal1D(Index offset, std::vector<double> values);

  static Signal1D delta(Index at = 0);

  Index offset() const noexcept { return offset_; }
  /// Index of the last stored coefficient.
  Index last() const noexcept { return offset_ + static_cast<Index>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  double at(Index i) const noexcept {
    const Index local = i - offset_;
    if (local < 0 || local >= static_cast<Index>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(local)];
  }
  double operator[](Index i) const noexcept { return at(i); }

  double max_abs() const noexcept;
  bool is_zero() const noexcept { return values_.size() == 1 && values_[0] == 0.0; }

  friend bool operator==(const Signal1D&, const Signal1D&) = default;

 private:
  Index offset_ = 0;
  std::vector<double> values_;
};

/// Inclusive index range [lo, hi].
struct IndexRange {
  Index lo = 0;
  Index hi = 0;
};

struct NoiseSpec {
  double level = 0.0;      ///< sigma as a fraction of max |x|, in [0, 1)
  std::uint64_t seed = 0;
};

/// Full linear convolution. H_p = sum_k s_k h_{p-k}, summed in ascending k.
Signal1D convolve(const Signal1D& h, const Signal1D& s);

Signal1D shift(const Signal1D& x, Index l);

/// Pointwise x + alpha * y over the union of supports.
Signal1D axpy(const Signal1D& x, double alpha, const Signal1D& y);

/// Index reflection i -> -i.
Signal1D mirror(const Signal1D& x);

Signal1D scale(const Signal1D& x, double factor);

/// max |a_i - b_i| over `window` (default: union of both supports). Throws
/// Error(EmptyWindow) when window.lo > window.hi.
double max_abs_error(const Signal1D& a, const Signal1D& b,
                     std::optional<IndexRange> window = std::nullopt);

/// Root mean square of a - b over the window (same defaults as max_abs_error).
double rms_error(const Signal1D& a, const Signal1D& b,
                 std::optional<IndexRange> window = std::nullopt);

/// Adds seeded zero-mean Gaussian noise with sigma = level * max|h| to every
/// stored coefficient. Deterministic for a given seed.
Signal1D add_noise(const Signal1D& h, const NoiseSpec& spec);

}  // namespace shiftdecon

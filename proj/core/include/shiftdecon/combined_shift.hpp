#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "shiftdecon/signal.hpp"

namespace shiftdecon {

/// (2L+1)x(2L+1) Toeplitz shift matrix with entry(i, j) = s_{C+j-i}, where s is
/// indexed in the kernel's local frame and reads as zero outside its support.
/// Only the 4L+1 diagonals are stored.
class ShiftMatrix {
 public:
  ShiftMatrix(Index center, Index half_width, std::vector<double> diagonals);

  Index center() const noexcept { return center_; }
  Index half_width() const noexcept { return half_width_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(2 * half_width_ + 1); }

  /// 0-based row and column.
  double entry(std::size_t i, std::size_t j) const noexcept {
    return diagonals_[j + dim() - 1 - i];
  }
  double max_abs() const noexcept;

 private:
  Index center_;
  Index half_width_;
  std::vector<double> diagonals_;  // value for j - i = d stored at d + 2L
};

/// Coefficients mu_{-L..L} with mu . Sigma = e.
struct ShiftCombination {
  Index center = 0;
  Index half_width = 0;
  std::vector<double> mu;
  std::vector<double> e;
};

/// Throws BadCenter when C lies outside the kernel's local support [0, K).
ShiftMatrix build_shift_matrix(const Signal1D& S, Index center, Index half_width);

/// Solves mu . Sigma = e by row-pivoted elimination on Sigma^T. Throws
/// SingularShiftMatrix when a pivot falls below 1e-12 * max|Sigma| or the
/// solution fails the residual check.
std::vector<double> solve_coefficients(const ShiftMatrix& sigma, std::span<const double> e);

/// sum_{i=-L..L} mu_i H_(i), accumulated in ascending i.
Signal1D apply_combination(const Signal1D& H, const ShiftCombination& comb);

/// The unit vector with a 1 in the middle (length 2L+1).
std::vector<double> unit_target(Index half_width);

/// Default center: argmax |s_k| in local coordinates, ties to the smallest k.
Index dominant_index(const Signal1D& S);

struct CombinedOptions {
  std::optional<Index> half_width;  ///< L, defaults to M + 1
  std::optional<Index> center;      ///< C, defaults to dominant_index(S)
};

struct CombinedResult {
  Signal1D estimate;
  ShiftCombination combination;
};

/// Combined shifts. With M = len(H) - len(S) + 1, requires L > M (else
/// HalfWidthTooSmall) and M >= 1 (else IncompleteResponse). The estimate has
/// length M and starts at H.offset - S.offset.
CombinedResult combined_deconvolve(const Signal1D& H, const Signal1D& S,
                                   const CombinedOptions& opts = {});

/// Solves for the combination of S at (C, L) with target e.
ShiftCombination solve_combination(const Signal1D& S, Index center, Index half_width,
                                   std::vector<double> e);

/// Reads h_q for q in [h_start, h_start + M) from a solved combination,
/// evaluating H*_{q + S.offset + C} directly.
Signal1D extract_response(const Signal1D& H, const Signal1D& S, const ShiftCombination& comb,
                          Index h_start, Index M);

/// Re-expresses H as if it had been blurred by the target kernel
/// T = sum_t e_{t+L} delta_t instead of S. The result is returned on the
/// window where the combined kernel equals T exactly, i.e. [h_end - L, h_start + L].
Signal1D remodel(const Signal1D& H, const Signal1D& S, Index half_width, Index center,
                 std::vector<double> target_e);

/// CSV: `# C=<int> L=<int>`, then `i,mu_i,e_i` and one row per i = -L..L.
void write_combination_csv(std::ostream& out, const ShiftCombination& comb);
ShiftCombination read_combination_csv(std::istream& in);

}  // namespace shiftdecon

#include "shiftdecon/combined_shift.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "shiftdecon/error.hpp"
#include "shiftdecon/signal_io.hpp"

namespace shiftdecon {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Index parse_index(std::string_view tok, std::string_view what) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::Format, "bad " + std::string(what) + ": '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

ShiftMatrix::ShiftMatrix(Index center, Index half_width, std::vector<double> diagonals)
    : center_(center), half_width_(half_width), diagonals_(std::move(diagonals)) {
  if (half_width_ < 1) throw Error(ErrorKind::InvalidArgument, "half-width L must be >= 1");
  if (diagonals_.size() != static_cast<std::size_t>(4 * half_width_ + 1)) {
    throw Error(ErrorKind::InvalidArgument, "shift matrix needs 4L+1 diagonals");
  }
}

double ShiftMatrix::max_abs() const noexcept { return shiftdecon::max_abs(diagonals_); }

ShiftMatrix build_shift_matrix(const Signal1D& S, Index center, Index half_width) {
  const Index K = static_cast<Index>(S.size());
  if (center < 0 || center >= K) {
    throw Error(ErrorKind::BadCenter, "center " + std::to_string(center) +
                                          " outside kernel support [0, " + std::to_string(K) + ")");
  }
  if (half_width < 1) throw Error(ErrorKind::InvalidArgument, "half-width L must be >= 1");
  std::vector<double> diag(static_cast<std::size_t>(4 * half_width + 1));
  for (Index d = -2 * half_width; d <= 2 * half_width; ++d) {
    diag[static_cast<std::size_t>(d + 2 * half_width)] = S.at(S.offset() + center + d);
  }
  return ShiftMatrix(center, half_width, std::move(diag));
}

std::vector<double> solve_coefficients(const ShiftMatrix& sigma, std::span<const double> e) {
  const std::size_t n = sigma.dim();
  if (e.size() != n) throw Error(ErrorKind::InvalidArgument, "target vector must have 2L+1 entries");
  for (double v : e) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "target vector must be finite");
  }

  // mu . Sigma = e  <=>  Sigma^T mu^T = e^T
  std::vector<double> a(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = sigma.entry(c, r);
  }
  std::vector<double> x(e.begin(), e.end());

  const double tol = kPivotTolerance * sigma.max_abs();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (!(std::abs(a[piv * n + col]) >= tol) || sigma.max_abs() == 0.0) {
      throw Error(ErrorKind::SingularShiftMatrix,
                  "pivot " + format_real(std::abs(a[piv * n + col])) + " below tolerance in column " +
                      std::to_string(col));
    }
    if (piv != col) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(piv * n),
                       a.begin() + static_cast<std::ptrdiff_t>(piv * n + n),
                       a.begin() + static_cast<std::ptrdiff_t>(col * n));
      std::swap(x[piv], x[col]);
    }
    const double p = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }

  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * sigma.entry(i, j);
    residual = std::max(residual, std::abs(acc - e[j]));
  }
  const double allowed = kResidualTolerance * (max_abs(e) + max_abs(x) * sigma.max_abs());
  if (!(residual <= allowed)) {
    throw Error(ErrorKind::SingularShiftMatrix,
                "solution residual " + format_real(residual) + " exceeds " + format_real(allowed));
  }
  return x;
}

Signal1D apply_combination(const Signal1D& H, const ShiftCombination& comb) {
  const Index L = comb.half_width;
  const Index lo = H.offset() - L;
  const Index hi = H.last() + L;
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
  for (Index p = lo; p <= hi; ++p) {
    double acc = 0.0;
    for (Index i = -L; i <= L; ++i) acc += comb.mu[static_cast<std::size_t>(i + L)] * H.at(p - i);
    out[static_cast<std::size_t>(p - lo)] = acc;
  }
  return Signal1D(lo, std::move(out));
}

std::vector<double> unit_target(Index half_width) {
  std::vector<double> e(static_cast<std::size_t>(2 * half_width + 1), 0.0);
  e[static_cast<std::size_t>(half_width)] = 1.0;
  return e;
}

Index dominant_index(const Signal1D& S) {
  const auto v = S.values();
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  return it - v.begin();
}

ShiftCombination solve_combination(const Signal1D& S, Index center, Index half_width,
                                   std::vector<double> e) {
  const ShiftMatrix sigma = build_shift_matrix(S, center, half_width);
  std::vector<double> mu = solve_coefficients(sigma, e);
  return {center, half_width, std::move(mu), std::move(e)};
}

Signal1D extract_response(const Signal1D& H, const Signal1D& S, const ShiftCombination& comb,
                          Index h_start, Index M) {
  const Index L = comb.half_width;
  const Index base = S.offset() + comb.center;
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(M, 1)), 0.0);
  for (Index q = 0; q < M; ++q) {
    const Index p = h_start + q + base;
    double acc = 0.0;
    for (Index i = -L; i <= L; ++i) acc += comb.mu[static_cast<std::size_t>(i + L)] * H.at(p - i);
    out[static_cast<std::size_t>(q)] = acc;
  }
  return Signal1D(h_start, std::move(out));
}

CombinedResult combined_deconvolve(const Signal1D& H, const Signal1D& S, const CombinedOptions& opts) {
  if (S.is_zero()) throw Error(ErrorKind::InvalidArgument, "kernel is identically zero");
  const Index K = static_cast<Index>(S.size());
  const Index M = static_cast<Index>(H.size()) - K + 1;
  if (M < 1) {
    throw Error(ErrorKind::IncompleteResponse, "response (" + std::to_string(H.size()) +
                                                   ") is shorter than the kernel (" +
                                                   std::to_string(K) + ")");
  }
  const Index L = opts.half_width.value_or(M + 1);
  if (L <= M) {
    throw Error(ErrorKind::HalfWidthTooSmall,
                "L = " + std::to_string(L) + " must exceed M = " + std::to_string(M));
  }
  const Index C = opts.center.value_or(dominant_index(S));
  ShiftCombination comb = solve_combination(S, C, L, unit_target(L));
  Signal1D est = extract_response(H, S, comb, H.offset() - S.offset(), M);
  return {std::move(est), std::move(comb)};
}

Signal1D remodel(const Signal1D& H, const Signal1D& S, Index half_width, Index center,
                 std::vector<double> target_e) {
  const Index K = static_cast<Index>(S.size());
  const Index M = static_cast<Index>(H.size()) - K + 1;
  if (M < 1) throw Error(ErrorKind::IncompleteResponse, "response is shorter than the kernel");
  if (half_width <= M) {
    throw Error(ErrorKind::HalfWidthTooSmall,
                "L = " + std::to_string(half_width) + " must exceed M = " + std::to_string(M));
  }
  const ShiftCombination comb = solve_combination(S, center, half_width, std::move(target_e));
  const Signal1D modeled = shift(apply_combination(H, comb), -(S.offset() + center));

  const Index h_start = H.offset() - S.offset();
  const Index lo = h_start + M - 1 - half_width;
  const Index hi = h_start + half_width;
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
  for (Index p = lo; p <= hi; ++p) out[static_cast<std::size_t>(p - lo)] = modeled.at(p);
  return Signal1D(lo, std::move(out));
}

void write_combination_csv(std::ostream& out, const ShiftCombination& comb) {
  out << "# C=" << comb.center << " L=" << comb.half_width << '\n';
  out << "i,mu_i,e_i\n";
  for (Index i = -comb.half_width; i <= comb.half_width; ++i) {
    const auto k = static_cast<std::size_t>(i + comb.half_width);
    out << i << ',' << format_real(comb.mu[k]) << ',' << format_real(comb.e[k]) << '\n';
  }
}

ShiftCombination read_combination_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# C=", 0) != 0) {
    throw Error(ErrorKind::Format, "missing '# C=<int> L=<int>' header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto sep = line.find(" L=");
  if (sep == std::string::npos) throw Error(ErrorKind::Format, "header lacks 'L='");
  ShiftCombination comb;
  comb.center = parse_index(std::string_view(line).substr(4, sep - 4), "center");
  comb.half_width = parse_index(std::string_view(line).substr(sep + 3), "half-width");
  if (comb.half_width < 1) throw Error(ErrorKind::Format, "half-width must be >= 1");

  Index expected = -comb.half_width;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("i,", 0) == 0) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error(ErrorKind::Format, "expected 'i,mu_i,e_i' row: '" + line + "'");
    }
    const Index i = parse_index(std::string_view(line).substr(0, c1), "row index");
    if (i != expected) throw Error(ErrorKind::Format, "rows must run from -L to L in order");
    comb.mu.push_back(parse_real(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)));
    comb.e.push_back(parse_real(std::string_view(line).substr(c2 + 1)));
    ++expected;
  }
  if (expected != comb.half_width + 1) throw Error(ErrorKind::Format, "combination has missing rows");
  return comb;
}

}  // namespace shiftdecon

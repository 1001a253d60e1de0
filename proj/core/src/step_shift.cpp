#include "shiftdecon/step_shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "shiftdecon/signal_io.hpp"

namespace shiftdecon {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_factor(double f) {
  if (!std::isfinite(f) || !(f > 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "divergence factor must be finite and > 1");
  }
}

bool is_two_term(const Signal1D& S) {
  const auto v = S.values();
  if (v.size() < 2) return false;
  return std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }) == 2;
}

}  // namespace

StepResult step_by_step(const Signal1D& H, const Signal1D& S, const StepOptions& opts) {
  if (opts.target_len < 1) throw Error(ErrorKind::InvalidArgument, "target length must be >= 1");
  check_factor(opts.divergence_factor);
  if (S.is_zero()) throw Error(ErrorKind::LeadingZeroKernel, "kernel has no nonzero coefficient");

  const auto T = static_cast<std::size_t>(opts.target_len);
  const auto sv = S.values();
  const auto hv = H.values();
  const double s0 = sv[0];

  // Kernel-local frame: S starts at 0, H^0 starts where h starts.
  std::vector<double> s(T, 0.0);
  std::vector<double> r(T, 0.0);
  std::copy_n(sv.begin(), std::min(T, sv.size()), s.begin());
  std::copy_n(hv.begin(), std::min(T, hv.size()), r.begin());

  const double bound = opts.divergence_factor * max_abs(r);
  IterationTrace trace;
  std::size_t confirmed = T;

  for (std::size_t n = 0; n + 1 < T; ++n) {
    const double a = s[n + 1] / s0;
    if (a == 0.0) continue;
    const std::size_t sh = n + 1;
    if (std::isfinite(a)) {
      for (std::size_t k = T - 1; k >= sh; --k) {
        s[k] -= a * s[k - sh];
        r[k] -= a * r[k - sh];
      }
      s[sh] = 0.0;
    }
    trace.steps.push_back({static_cast<Index>(n), a, max_abs(s), max_abs(r)});
    if (!std::isfinite(a) || trace.steps.back().max_abs_H > bound) {
      trace.diverged = true;
      confirmed = n + 1;
      if (n == 0) {
        trace.reconstructed_len = 0;
        throw DivergentError("step-by-step iteration diverged at the first step", std::move(trace));
      }
      break;
    }
  }
  trace.reconstructed_len = static_cast<Index>(confirmed);

  std::vector<double> est(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(confirmed));
  if (opts.normalize) {
    for (double& v : est) v /= s0;
  }
  return {Signal1D(H.offset() - S.offset(), std::move(est)), std::move(trace),
          Signal1D(0, std::move(s))};
}

int doubling_steps(Index extent, Index l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "pair spacing must be >= 1");
  int k = 0;
  while ((l << k) < extent) ++k;
  return k;
}

StepResult modified_doubling(const Signal1D& H, const Signal1D& S, int n_steps,
                             const DoublingOptions& opts) {
  if (!is_two_term(S)) {
    throw Error(ErrorKind::KernelShape, "doubling requires a kernel with exactly two nonzero terms");
  }
  if (n_steps < 0) throw Error(ErrorKind::InvalidArgument, "step count must be >= 0");
  check_factor(opts.divergence_factor);

  const Index l = static_cast<Index>(S.size()) - 1;
  const double s0 = S.values().front();
  const double a = S.values().back() / s0;
  const Index extent = opts.extent.value_or(static_cast<Index>(H.size()) - l);
  if (extent < 1) {
    throw Error(ErrorKind::IncompleteResponse, "response is shorter than the kernel");
  }
  if (n_steps > 62 || (l << n_steps) <= 0) {
    throw Error(ErrorKind::InvalidArgument, "too many doubling steps");
  }

  Signal1D Sk = shift(S, -S.offset());
  Signal1D Hk = H;
  const double bound = opts.divergence_factor * H.max_abs();

  IterationTrace trace;
  double power = a;  // a^{2^k} after k squarings
  Index span = l;
  for (int k = 1; k <= n_steps; ++k) {
    const double mult = k == 1 ? -a : power;
    Sk = axpy(Sk, mult, shift(Sk, span));
    Hk = axpy(Hk, mult, shift(Hk, span));
    power *= power;
    span *= 2;
    trace.steps.push_back({k, power, Sk.max_abs(), Hk.max_abs()});
    if (!std::isfinite(power) || trace.steps.back().max_abs_H > bound) {
      trace.diverged = true;
      trace.reconstructed_len = std::min(span / 2, extent);
      throw DivergentError("doubling iteration diverged at step " + std::to_string(k) +
                               " (|a| = " + format_real(std::abs(a)) + ")",
                           std::move(trace));
    }
  }
  trace.reconstructed_len = std::min(span, extent);

  std::vector<double> est(static_cast<std::size_t>(extent));
  for (Index i = 0; i < extent; ++i) {
    const double v = Hk.at(H.offset() + i);
    est[static_cast<std::size_t>(i)] = opts.normalize ? v / s0 : v;
  }
  return {Signal1D(H.offset() - S.offset(), std::move(est)), std::move(trace), std::move(Sk)};
}

FlipResult flip_to_dominant(const Signal1D& H, const Signal1D& S) {
  if (!is_two_term(S)) {
    throw Error(ErrorKind::KernelShape, "flip requires a kernel with exactly two nonzero terms");
  }
  if (std::abs(S.values().back()) > std::abs(S.values().front())) {
    return {mirror(H), mirror(S), true};
  }
  return {H, S, false};
}

StepResult deconvolve_two_term(const Signal1D& H, const Signal1D& S, std::optional<int> n_steps,
                               const DoublingOptions& opts) {
  FlipResult f = flip_to_dominant(H, S);
  const Index l = static_cast<Index>(S.size()) - 1;
  const Index extent = opts.extent.value_or(static_cast<Index>(H.size()) - l);
  const int steps = n_steps.value_or(extent > 0 ? doubling_steps(extent, l) : 0);
  StepResult res = modified_doubling(f.H, f.S, steps, opts);
  if (f.flipped) {
    res.estimate = mirror(res.estimate);
    res.residual_kernel = mirror(res.residual_kernel);
  }
  return res;
}

double estimate_m_max(double s_max_over_s0, Index l, double ln_n_max) {
  if (!(s_max_over_s0 > 1.0)) return std::numeric_limits<double>::infinity();
  return static_cast<double>(l) * ln_n_max / std::log(s_max_over_s0);
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "n,a_n,max_abs_S,max_abs_H\n";
  for (const TraceStep& st : trace.steps) {
    out << st.n << ',' << format_real(st.a_n) << ',' << format_real(st.max_abs_S) << ','
        << format_real(st.max_abs_H) << '\n';
  }
}

}  // namespace shiftdecon

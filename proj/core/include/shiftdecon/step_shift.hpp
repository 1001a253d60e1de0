#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "shiftdecon/error.hpp"
#include "shiftdecon/signal.hpp"

namespace shiftdecon {

struct TraceStep {
  Index n = 0;           ///< step index
  double a_n = 0.0;      ///< cancellation coefficient used at this step
  double max_abs_S = 0;  ///< max |S| after the step (over the working window)
  double max_abs_H = 0;  ///< max |H| after the step (over the working window)
};

struct IterationTrace {
  std::vector<TraceStep> steps;
  bool diverged = false;
  Index reconstructed_len = 0;
};

struct StepOptions {
  Index target_len = 1;             ///< how many coefficients of h to reconstruct
  double divergence_factor = 1e6;   ///< stop once max|H^n| exceeds this times max|H^0|
  bool normalize = true;            ///< divide the result by s0
};

struct DoublingOptions {
  double divergence_factor = 1e6;
  bool normalize = true;
  std::optional<Index> extent;  ///< coefficients to produce; default len(H) - l
};

struct StepResult {
  Signal1D estimate;         ///< h (or s0*h when not normalized), starting at H.offset - S.offset
  IterationTrace trace;
  Signal1D residual_kernel;  ///< S^n after the last accepted step, kernel-local frame
};

/// Raised when an iteration blows up before it has produced anything usable.
class DivergentError : public Error {
 public:
  DivergentError(const std::string& detail, IterationTrace trace)
      : Error(ErrorKind::Divergent, detail), trace_(std::move(trace)) {}
  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

/// Step-by-step shifts: S^{n+1} = S^n - a_n S^n_(n+1), H^{n+1} = H^n - a_n H^n_(n+1)
/// with a_n = s^n_{n+1} / s0. After n steps S^n = s0*delta_0 on [0, n], so H^n
/// equals s0*h there.
///
/// Only the first target_len coefficients are carried; shifts move mass to the
/// right, so nothing past the window can feed back into it. Steps with a_n == 0
/// leave both iterates unchanged and are not recorded in the trace.
///
/// When the stop rule fires (max|H^n| > divergence_factor * max|H^0| or a
/// non-finite a_n) the confirmed prefix is returned with trace.diverged set.
/// If it fires on the very first step a DivergentError is thrown instead.
StepResult step_by_step(const Signal1D& H, const Signal1D& S, const StepOptions& opts);

/// Doubling variant for a two-term kernel S = s0 delta_0 + s_l delta_l:
/// S^1 = S^0 - a S^0_(l), then S^{n+1} = S^n + a^{2^n} S^n_(2^n l), a = s_l / s0.
/// After n steps the residual kernel is s0 (delta_0 - a^{2^n} delta_{2^n l}),
/// and the trace records a^{2^n} for step n.
///
/// The estimate covers the implied extent len(H) - l (or opts.extent); only the first
/// trace.reconstructed_len = min(2^n l, extent) coefficients are exact.
/// Throws KernelShape for other kernels and DivergentError when |a| > 1 pushes
/// the iterate past the divergence factor.
StepResult modified_doubling(const Signal1D& H, const Signal1D& S, int n_steps,
                             const DoublingOptions& opts = {});

/// Number of doubling steps needed to clear `extent` coefficients with a pair
/// spacing of l: ceil(log2(extent / l)), zero when extent <= l.
int doubling_steps(Index extent, Index l);

struct FlipResult {
  Signal1D H;
  Signal1D S;
  bool flipped = false;
};

/// Mirrors the problem when the trailing term of a two-term kernel dominates,
/// so the effective ratio a = s0 / s_l satisfies |a| < 1. Un-mirror the result
/// with mirror() when `flipped` is set.
FlipResult flip_to_dominant(const Signal1D& H, const Signal1D& S);

/// flip_to_dominant + modified_doubling + un-mirroring. `n_steps` defaults to
/// doubling_steps(len(H) - l, l).
StepResult deconvolve_two_term(const Signal1D& H, const Signal1D& S,
                               std::optional<int> n_steps = std::nullopt,
                               const DoublingOptions& opts = {});

/// Reconstruction horizon M_max ~ l * ln(N_max) / ln(s_max / s0). Returns
/// +infinity when the ratio does not exceed 1.
double estimate_m_max(double s_max_over_s0, Index l, double ln_n_max);

/// CSV with columns n,a_n,max_abs_S,max_abs_H.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace shiftdecon

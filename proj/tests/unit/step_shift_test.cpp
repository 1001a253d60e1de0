#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "shiftdecon/step_shift.hpp"

namespace shiftdecon {
namespace {

Signal1D sig(Index offset, std::vector<double> v) { return Signal1D(offset, std::move(v)); }

TEST(StepByStep, ScalingKernelNeedsNoIterations) {
  const StepResult r = step_by_step(sig(0, {2, 4, 6}), sig(0, {2}), {3, 1e6, true});
  EXPECT_EQ(r.estimate, sig(0, {1, 2, 3}));
  EXPECT_TRUE(r.trace.steps.empty());
  EXPECT_FALSE(r.trace.diverged);
}

TEST(StepByStep, HandRunOfTwoSteps) {
  const Signal1D H = sig(0, {1, 2.5, 4, 1.5});
  const Signal1D S = sig(0, {1, 0.5});
  const StepResult r = step_by_step(H, S, {3, 1e6, true});
  EXPECT_EQ(r.estimate, sig(0, {1, 2, 3}));
  ASSERT_EQ(r.trace.steps.size(), 2u);
  EXPECT_EQ(r.trace.steps[0].a_n, 0.5);
  EXPECT_EQ(r.trace.steps[1].a_n, -0.25);
  EXPECT_EQ(r.trace.reconstructed_len, 3);

  // the same two steps without the window
  Signal1D h2 = axpy(H, -0.5, shift(H, 1));
  h2 = axpy(h2, 0.25, shift(h2, 2));
  EXPECT_EQ(h2, sig(0, {1, 2, 3, 0, -0.0625, -0.125, -0.1875}));
}

TEST(StepByStep, RisingKernelWithSmallLeadingTerm) {
  // s0 = 0.1 with the maximum 1 at the far end
  testing::Gen g(5);
  const Signal1D h = g.signal(20);
  const Signal1D S = sig(0, {0.1, 0.05, 0.1, 0.2, 0.5, 1.0});
  const StepResult r = step_by_step(convolve(h, S), S, {20, 1e6, true});
  EXPECT_FALSE(r.trace.diverged);
  EXPECT_LE(max_abs_error(r.estimate, h, IndexRange{0, 19}), 1e-9);
}

TEST(StepByStep, WithoutNormalizationReturnsScaledResponse) {
  const StepResult r = step_by_step(sig(0, {2, 4, 6}), sig(0, {2}), {3, 1e6, false});
  EXPECT_EQ(r.estimate, sig(0, {2, 4, 6}));
}

TEST(StepByStep, KernelOffsetShiftsTheEstimate) {
  const Signal1D h = sig(4, {1, 2, 3});
  const Signal1D S = sig(-2, {1, 0.5});
  const StepResult r = step_by_step(convolve(h, S), S, {3, 1e6, true});
  EXPECT_EQ(r.estimate.offset(), 4);
  EXPECT_LE(max_abs_error(r.estimate, h), 1e-15);
}

TEST(StepByStep, PrefixOfRunningKernelIsZero) {
  testing::Gen g(9);
  const Signal1D S = g.leading_kernel(5, 0.8);
  const StepResult r = step_by_step(convolve(g.signal(12), S), S, {12, 1e12, true});
  for (Index i = 1; i < 12; ++i) EXPECT_EQ(r.residual_kernel.at(i), 0.0) << i;
}

TEST(StepByStep, ZeroCoefficientStepsAreSkipped) {
  const StepResult r = step_by_step(sig(0, {1, 0, 0.5}), sig(0, {1, 0, 0.5}), {3, 1e6, true});
  ASSERT_EQ(r.trace.steps.size(), 1u);
  EXPECT_EQ(r.trace.steps[0].n, 1);
}

TEST(StepByStep, DivergesEarlyAndKeepsPrefix) {
  // a = 10 per step: the window blows up quickly
  testing::Gen g(3);
  const Signal1D S = sig(0, {0.1, 1.0});
  const Signal1D h = g.signal(40);
  const StepResult r = step_by_step(convolve(h, S), S, {40, 1e6, true});
  EXPECT_TRUE(r.trace.diverged);
  EXPECT_LT(r.trace.reconstructed_len, 40);
  EXPECT_GT(r.trace.reconstructed_len, 0);
  EXPECT_LE(static_cast<Index>(r.estimate.size()), r.trace.reconstructed_len);
  EXPECT_LE(max_abs_error(r.estimate, h, IndexRange{0, r.trace.reconstructed_len - 1}), 1e-6);
}

TEST(StepByStep, DivergenceOnFirstStepThrows) {
  try {
    step_by_step(sig(0, {1, 1}), sig(0, {1e-9, 1}), {10, 1e6, true});
    FAIL() << "expected DivergentError";
  } catch (const DivergentError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergent);
    EXPECT_TRUE(e.trace().diverged);
    EXPECT_EQ(e.trace().steps.size(), 1u);
  }
}

TEST(StepByStep, RejectsBadOptions) {
  EXPECT_THROW(step_by_step(sig(0, {1}), sig(0, {1}), {0, 1e6, true}), Error);
  EXPECT_THROW(step_by_step(sig(0, {1}), sig(0, {1}), {1, 1.0, true}), Error);
  try {
    step_by_step(sig(0, {1}), Signal1D(), {1, 1e6, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LeadingZeroKernel);
  }
}

TEST(ModifiedDoubling, ResidualKernelAfterOneAndTwoSteps) {
  const Signal1D S = sig(0, {1, 0.5});
  const Signal1D H = convolve(sig(0, {1, 2, 3, 4}), S);
  EXPECT_EQ(modified_doubling(H, S, 1).residual_kernel, sig(0, {1, 0, -0.25}));
  EXPECT_EQ(modified_doubling(H, S, 2).residual_kernel, sig(0, {1, 0, 0, 0, -0.0625}));
}

TEST(ModifiedDoubling, StepCountForSixtyFourSamples) { EXPECT_EQ(doubling_steps(64, 1), 6); }

TEST(ModifiedDoubling, StepCountEdges) {
  EXPECT_EQ(doubling_steps(1, 1), 0);
  EXPECT_EQ(doubling_steps(100, 20), 3);
  EXPECT_EQ(doubling_steps(65, 1), 7);
  EXPECT_EQ(doubling_steps(5, 5), 0);
}

TEST(ModifiedDoubling, LeftShiftCoefficientDecay) {
  const Signal1D S = sig(0, {0.99, 1.0});
  const Signal1D H = convolve(sig(0, {1, 2}), S);
  const FlipResult f = flip_to_dominant(H, S);
  ASSERT_TRUE(f.flipped);
  const StepResult r = modified_doubling(f.H, f.S, 10);
  EXPECT_NEAR(r.trace.steps[8].a_n, std::pow(0.99, 512), 1e-12 * std::pow(0.99, 512));
  EXPECT_NEAR(r.trace.steps[8].a_n, 0.0058, 1e-4);
  EXPECT_NEAR(r.trace.steps[9].a_n, 3.4e-5, 0.1e-5);
}

TEST(ModifiedDoubling, ExactOnceTheSpanCoversTheData) {
  testing::Gen g(21);
  const Signal1D h = g.signal(30);
  const Signal1D S = sig(0, {1.0, 0, 0, -0.7});
  const StepResult r = deconvolve_two_term(convolve(h, S), S);
  EXPECT_EQ(r.trace.steps.size(), 4u);  // 3 * 2^4 >= 30
  EXPECT_EQ(r.trace.reconstructed_len, 30);
  EXPECT_LE(max_abs_error(r.estimate, h), 1e-12);
}

TEST(ModifiedDoubling, RejectsOtherKernelShapes) {
  try {
    modified_doubling(sig(0, {1, 2, 3}), sig(0, {1, 0.5, 0.25}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KernelShape);
  }
  EXPECT_THROW(modified_doubling(sig(0, {1, 2, 3}), sig(0, {1}), 1), Error);
}

TEST(ModifiedDoubling, GrowingRatioDiverges) {
  const Signal1D S = sig(0, {1, 3});
  try {
    modified_doubling(convolve(sig(0, std::vector<double>(64, 0.5)), S), S, 6, {1e6, true, {}});
    FAIL();
  } catch (const DivergentError& e) {
    EXPECT_TRUE(e.trace().diverged);
  }
}

TEST(FlipToDominant, InvertsTheRatio) {
  const Signal1D H = sig(0, {1, 2});
  const FlipResult f = flip_to_dominant(H, sig(0, {1, 2}));
  EXPECT_TRUE(f.flipped);
  EXPECT_DOUBLE_EQ(f.S.values().back() / f.S.values().front(), 0.5);
  const FlipResult g = flip_to_dominant(H, sig(0, {1, 0.5}));
  EXPECT_FALSE(g.flipped);
  EXPECT_EQ(g.S, sig(0, {1, 0.5}));
}

TEST(FlipToDominant, RoundTripThroughTheMirror) {
  testing::Gen g(77);
  for (int c = 0; c < 20; ++c) {
    const Signal1D h = g.signal(g.integer(1, 10), 0.0, 1.0, g.integer(-5, 5));
    const Index l = g.integer(1, 4);
    std::vector<double> sv(static_cast<std::size_t>(l + 1), 0.0);
    sv.front() = g.uniform(0.2, 1.0);
    sv.back() = g.uniform(1.2, 3.0) * (g.coin() ? 1 : -1);
    const Signal1D S(g.integer(-3, 3), sv);
    const StepResult r = deconvolve_two_term(convolve(h, S), S);
    EXPECT_LE(max_abs_error(r.estimate, h), 1e-9) << "case " << c;
  }
}

TEST(EstimateMMax, ReproducesTheQuotedHorizons) {
  const double c = 59.87;
  EXPECT_NEAR(estimate_m_max(10, 1, c), 26.0, 0.01);
  EXPECT_NEAR(estimate_m_max(100, 1, c), 13.0, 0.01);
  EXPECT_NEAR(estimate_m_max(20, 1, c), 19.98, 0.01);
  EXPECT_EQ(estimate_m_max(1.0, 1, c), std::numeric_limits<double>::infinity());
  EXPECT_EQ(estimate_m_max(0.5, 1, c), std::numeric_limits<double>::infinity());
}

TEST(TraceCsv, HeaderAndRows) {
  const StepResult r = step_by_step(sig(0, {1, 2.5, 4, 1.5}), sig(0, {1, 0.5}), {3, 1e6, true});
  std::ostringstream out;
  write_trace_csv(out, r.trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,a_n,max_abs_S,max_abs_H");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 6), "0,0.5,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 8), "1,-0.25,");
}

}  // namespace
}  // namespace shiftdecon

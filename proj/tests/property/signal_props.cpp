#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "shiftdecon/signal_io.hpp"

namespace shiftdecon {
namespace {

constexpr int kCases = 200;

TEST(SignalProps, ConvolutionIsLinearInTheKernel) {
  testing::Gen g(101);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D h = g.signal(g.integer(1, 20), -1, 1, g.integer(-5, 5));
    const Signal1D s1 = g.signal(g.integer(1, 8), -1, 1, g.integer(-3, 3));
    const Signal1D s2 = g.signal(g.integer(1, 8), -1, 1, g.integer(-3, 3));
    const double a = g.uniform(-2, 2);
    const double b = g.uniform(-2, 2);
    const Signal1D lhs = convolve(h, axpy(scale(s1, a), b, s2));
    const Signal1D rhs = axpy(scale(convolve(h, s1), a), b, convolve(h, s2));
    ASSERT_LE(max_abs_error(lhs, rhs), 1e-12) << "case " << c;
  }
}

TEST(SignalProps, ConvolutionIsShiftEquivariant) {
  testing::Gen g(102);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D h = g.signal(g.integer(1, 20), -1, 1, g.integer(-5, 5));
    const Signal1D s = g.signal(g.integer(1, 8), -1, 1, g.integer(-3, 3));
    const Index l = g.integer(-10, 10);
    ASSERT_EQ(convolve(h, shift(s, l)), shift(convolve(h, s), l)) << "case " << c;
  }
}

TEST(SignalProps, ConvolutionCommutes) {
  testing::Gen g(103);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D h = g.signal(g.integer(1, 20), -1, 1, g.integer(-5, 5));
    const Signal1D s = g.signal(g.integer(1, 8), -1, 1, g.integer(-3, 3));
    const Signal1D a = convolve(h, s);
    const Signal1D b = convolve(s, h);
    ASSERT_EQ(a.offset(), b.offset());
    ASSERT_EQ(a.size(), b.size());
    ASSERT_LE(max_abs_error(a, b), 1e-12) << "case " << c;
  }
}

TEST(SignalProps, SupportWidthAddsUp) {
  testing::Gen g(104);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D h = g.signal(g.integer(1, 30), -1, 1);
    const Signal1D s = g.signal(g.integer(1, 10), -1, 1);
    ASSERT_EQ(convolve(h, s).size(), h.size() + s.size() - 1);
  }
}

TEST(SignalProps, ShiftHasAnInverse) {
  testing::Gen g(105);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D x = g.signal(g.integer(1, 10), -1, 1, g.integer(-50, 50));
    const Index a = g.integer(-1000, 1000);
    ASSERT_EQ(shift(shift(x, a), -a), x);
  }
}

TEST(SignalProps, FileFormatRoundTripsExactly) {
  testing::Gen g(106);
  for (int c = 0; c < kCases; ++c) {
    const Signal1D x = g.signal(g.integer(1, 30), -1e3, 1e3, g.integer(-50, 50));
    std::stringstream ss;
    write_signal(ss, x);
    ASSERT_EQ(read_signal(ss), x);
  }
}

TEST(SignalProps, NoiseIsDeterministicPerSeed) {
  testing::Gen g(107);
  for (int c = 0; c < 50; ++c) {
    const Signal1D x = g.signal(g.integer(1, 30));
    const NoiseSpec spec{g.uniform(0, 0.2), g.seed()};
    ASSERT_EQ(add_noise(x, spec), add_noise(x, spec));
  }
}

}  // namespace
}  // namespace shiftdecon

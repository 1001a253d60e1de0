#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "shiftdecon/error.hpp"
#include "shiftdecon/image.hpp"
#include "shiftdecon/step_shift.hpp"

namespace shiftdecon {
namespace {

Signal1D sig(Index offset, std::vector<double> v) { return Signal1D(offset, std::move(v)); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

TEST(ImageRaster, InterleavedRowMajorLayout) {
  ImageRaster img(2, 2, 3);
  img.at(1, 0, 2) = 0.5;
  img.at(0, 1, 0) = 0.25;
  EXPECT_EQ(img.samples()[(0 * 2 + 1) * 3 + 2], 0.5);
  EXPECT_EQ(img.samples()[(1 * 2 + 0) * 3 + 0], 0.25);
  EXPECT_EQ(img.line(Axis::Y, 0, 0), (std::vector<double>{0, 0.25}));
  EXPECT_EQ(img.line(Axis::X, 0, 2), (std::vector<double>{0, 0.5}));
}

TEST(ImageRaster, RejectsBadShapes) {
  EXPECT_THROW(ImageRaster(0, 1, 1), Error);
  EXPECT_THROW(ImageRaster(1, 1, 2), Error);
  EXPECT_THROW(ImageRaster(2, 1, 1, {0.1}), Error);
  EXPECT_THROW(ImageRaster(1, 1, 1, {NAN}), Error);
}

TEST(BlurAxis, DeltaIsIdentity) {
  testing::Gen g(1);
  const ImageRaster img = g.image(5, 4, 3);
  EXPECT_EQ(blur_axis(img, Signal1D::delta(), Axis::X), img);
  EXPECT_EQ(blur_axis(img, Signal1D::delta(3), Axis::Y), img);
}

TEST(BlurAxis, RowReusesTheOneDimensionalHandCase) {
  const ImageRaster img(3, 1, 1, {0.1, 0.2, 0.3});
  const ImageRaster out = blur_axis(img, sig(0, {1, 0.5}), Axis::X);
  ASSERT_EQ(out.width(), 4);
  const std::vector<double> want{0.1, 0.25, 0.4, 0.15};
  for (Index x = 0; x < 4; ++x) EXPECT_NEAR(out.at(x, 0, 0), want[static_cast<std::size_t>(x)], 1e-16);
}

TEST(BlurAxis, AxesCommute) {
  testing::Gen g(2);
  const ImageRaster img = g.image(7, 5, 3);
  const Signal1D sx = sig(0, {1, 0.3, 0.2});
  const Signal1D sy = sig(0, {0.4, 1});
  const ImageRaster a = blur_axis(blur_axis(img, sx, Axis::X), sy, Axis::Y);
  const ImageRaster b = blur_axis(blur_axis(img, sy, Axis::Y), sx, Axis::X);
  EXPECT_LE(max_abs_error(a, b), 1e-12);
}

TEST(DeblurAxis, StepMethodOnAColorImage) {
  testing::Gen g(3);
  const ImageRaster img = g.image(100, 79, 3);
  const Signal1D S = sig(0, {1, 0.8, 0.6, 0.4, 0.2, 0.1});
  const ImageRaster out = deblur_axis(blur_axis(img, S, Axis::X), S, Axis::X, Method::Step);
  EXPECT_LE(max_abs_error(out, img), 1e-9);
}

TEST(DeblurAxis, CombinedRoundTrip) {
  testing::Gen g(4);
  const ImageRaster img = g.image(12, 9, 3);
  const Signal1D S = sig(-1, {0.2, 1, 0.5, 0.1});
  for (Axis axis : {Axis::X, Axis::Y}) {
    const ImageRaster out = deblur_axis(blur_axis(img, S, axis), S, axis, Method::Combined);
    EXPECT_LE(max_abs_error(out, img), 1e-9);
  }
}

TEST(DeblurAxis, ModifiedTwoTermRoundTrip) {
  testing::Gen g(5);
  const ImageRaster img = g.image(20, 6, 1);
  for (const Signal1D& S : {sig(0, {1, 0, -0.6}), sig(0, {0.5, 0, 0, 1})}) {
    const ImageRaster out = deblur_axis(blur_axis(img, S, Axis::X), S, Axis::X, Method::Modified);
    EXPECT_LE(max_abs_error(out, img), 1e-9);
  }
}

TEST(DeblurAxis, DeltaIsIdentity) {
  testing::Gen g(6);
  const ImageRaster img = g.image(6, 5, 3);
  for (Method m : {Method::Step, Method::Combined}) {
    EXPECT_LE(max_abs_error(deblur_axis(img, Signal1D::delta(), Axis::Y, m), img), 1e-15);
  }
}

TEST(DeblurAxis, ZeroLinesStayZero) {
  ImageRaster img(8, 3, 1);
  img.at(2, 1, 0) = 1.0;
  const Signal1D S = sig(0, {1, 0.5});
  const ImageRaster out = deblur_axis(img, S, Axis::X, Method::Step);
  for (Index x = 0; x < out.width(); ++x) {
    EXPECT_EQ(out.at(x, 0, 0), 0.0);
    EXPECT_EQ(out.at(x, 2, 0), 0.0);
  }
}

TEST(DeblurAxis, ShorterThanKernel) {
  EXPECT_EQ(kind_of([] { deblur_axis(ImageRaster(2, 2, 1), sig(0, {1, 1, 1}), Axis::X, Method::Combined); }),
            ErrorKind::IncompleteResponse);
}

TEST(DeblurAxis, DivergentLineReportsCoordinates) {
  testing::Gen g(7);
  const ImageRaster img = g.image(60, 3, 3);
  const Signal1D S = sig(0, {0.1, 1});
  try {
    deblur_axis(blur_axis(img, S, Axis::X), S, Axis::X, Method::Step);
    FAIL();
  } catch (const DivergentError& e) {
    EXPECT_NE(std::string(e.what()).find("row 0, channel 0"), std::string::npos) << e.what();
  }
}

TEST(DeblurAxis, ModifiedRejectsGeneralKernels) {
  EXPECT_EQ(kind_of([] {
              deblur_axis(ImageRaster(9, 2, 1), sig(0, {1, 0.5, 0.2}), Axis::X, Method::Modified);
            }),
            ErrorKind::KernelShape);
}

TEST(MotionDeblur, FourStepsForTwentyPixelMotion) {
  testing::Gen g(8);
  const ImageRaster img = g.image(100, 10, 3);
  const MotionDeblurResult r = motion_deblur_uniform(blur_axis(img, make_boxcar_kernel(20), Axis::X), 20, Axis::X);
  EXPECT_EQ(r.steps_used, 4);
  EXPECT_LE(max_abs_error(r.image, img), 1e-9);
}

TEST(MotionDeblur, TwoPixelHandCase) {
  const double a = 0.3;
  const double b = 0.8;
  const ImageRaster blurred(3, 1, 1, {a / 2, (a + b) / 2, b / 2});
  const MotionDeblurResult r = motion_deblur_uniform(blurred, 2, Axis::X);
  ASSERT_EQ(r.image.width(), 2);
  EXPECT_NEAR(r.image.at(0, 0, 0), a, 1e-15);
  EXPECT_NEAR(r.image.at(1, 0, 0), b, 1e-15);
}

TEST(MotionDeblur, RoundTripsOverLengths) {
  testing::Gen g(9);
  for (Index l : {2, 5, 20}) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      const ImageRaster img = g.image(32, 24, 3);
      const MotionDeblurResult r = motion_deblur_uniform(blur_axis(img, make_boxcar_kernel(l), axis), l, axis);
      EXPECT_LE(max_abs_error(r.image, img), 1e-9) << "l=" << l;
      EXPECT_EQ(r.steps_used, 1 + doubling_steps(img.extent(axis), l));
    }
  }
}

TEST(MotionDeblur, Errors) {
  EXPECT_EQ(kind_of([] { motion_deblur_uniform(ImageRaster(5, 2, 1), 5, Axis::X); }),
            ErrorKind::BlurWiderThanImage);
  EXPECT_EQ(kind_of([] { motion_deblur_uniform(ImageRaster(5, 2, 1), 1, Axis::X); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { motion_deblur(ImageRaster(9, 2, 1), sig(0, {1, 2}), Axis::X); }),
            ErrorKind::KernelShape);
}

TEST(DeblurSeparable, DeltaKernelsAreIdentity) {
  testing::Gen g(10);
  const ImageRaster img = g.image(5, 6, 3);
  const SeparableKernel2D k{Signal1D::delta(), Signal1D::delta()};
  for (Order o : {Order::XThenY, Order::YThenX}) {
    EXPECT_LE(max_abs_error(deblur_separable(img, k, o, Method::Combined), img), 1e-15);
  }
}

TEST(DeblurSeparable, GaussianBothOrders) {
  testing::Gen g(11);
  const ImageRaster img = g.image(24, 18, 3);
  const SeparableKernel2D k{make_gaussian_kernel(2, 6), make_gaussian_kernel(3, 9)};
  const ImageRaster H = blur_axis(blur_axis(img, k.sx, Axis::X), k.sy, Axis::Y);
  const ImageRaster xy = deblur_separable(H, k, Order::XThenY, Method::Combined);
  const ImageRaster yx = deblur_separable(H, k, Order::YThenX, Method::Combined);
  EXPECT_LE(max_abs_error(xy, img), 0.015);
  EXPECT_LE(max_abs_error(xy, yx), 2e-6);
}

TEST(DeblurSeparable, ErrorsAreTaggedWithTheStage) {
  const SeparableKernel2D k{sig(0, {1, 0.5}), sig(0, {1, 1, 1, 1, 1, 1, 1, 1})};
  try {
    deblur_separable(ImageRaster(6, 4, 1), k, Order::XThenY, Method::Combined);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompleteResponse);
    EXPECT_EQ(std::string(e.what()).rfind("second axis (y)", 0), 0u) << e.what();
  }
}

TEST(GaussianKernel, TinySigma) {
  const Signal1D s = make_gaussian_kernel(0.1, 1);
  EXPECT_EQ(s.offset(), -1);
  EXPECT_EQ(s.at(0), 1.0);
  EXPECT_NEAR(s.at(1), 1.9287e-22, 1e-25);
}

TEST(GaussianKernel, SigmaTwoRadiusSix) {
  const Signal1D s = make_gaussian_kernel(2, 6);
  EXPECT_EQ(s.size(), 13u);
  EXPECT_EQ(s.offset(), -6);
  EXPECT_DOUBLE_EQ(s.at(2), std::exp(-0.5));
  for (Index k = 0; k <= 6; ++k) EXPECT_EQ(s.at(k), s.at(-k));
}

TEST(GaussianKernel, RadiusBelowSigma) {
  EXPECT_THROW(make_gaussian_kernel(2.5, 2), Error);
  EXPECT_THROW(make_gaussian_kernel(0, 2), Error);
}

TEST(ImageNoise, DeterministicAndZeroLevelIdentity) {
  testing::Gen g(12);
  const ImageRaster img = g.image(4, 4, 1);
  EXPECT_EQ(add_noise(img, {0.0, 1}), img);
  EXPECT_EQ(add_noise(img, {0.02, 1}), add_noise(img, {0.02, 1}));
  EXPECT_NE(add_noise(img, {0.02, 1}), img);
}

TEST(ImageMetrics, ShapeMismatch) {
  EXPECT_THROW(max_abs_error(ImageRaster(2, 2, 1), ImageRaster(2, 2, 3)), Error);
  EXPECT_DOUBLE_EQ(rms_error(ImageRaster(2, 1, 1, {0, 0}), ImageRaster(2, 1, 1, {1, 1})), 1.0);
}

}  // namespace
}  // namespace shiftdecon

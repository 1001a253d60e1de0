#include <random>

#include <benchmark/benchmark.h>

#include "shiftdecon/image.hpp"

namespace sd = shiftdecon;

namespace {

sd::ImageRaster random_image(sd::Index w, sd::Index h) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(w * h * 3));
  for (double& x : v) x = u(rng);
  return sd::ImageRaster(w, h, 3, std::move(v));
}

void BM_MotionDeblur(benchmark::State& state) {
  const sd::Index l = state.range(0);
  const sd::ImageRaster H = sd::blur_axis(random_image(256, 64), sd::make_boxcar_kernel(l), sd::Axis::X);
  for (auto _ : state) benchmark::DoNotOptimize(sd::motion_deblur_uniform(H, l, sd::Axis::X));
}
BENCHMARK(BM_MotionDeblur)->Arg(5)->Arg(20)->Arg(60);

void BM_SeparableGaussian(benchmark::State& state) {
  const sd::SeparableKernel2D k{sd::make_gaussian_kernel(2.0, 6), sd::make_gaussian_kernel(3.0, 9)};
  const sd::ImageRaster img = random_image(state.range(0), state.range(0) * 3 / 4);
  const sd::ImageRaster H = sd::blur_axis(sd::blur_axis(img, k.sx, sd::Axis::X), k.sy, sd::Axis::Y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::deblur_separable(H, k, sd::Order::XThenY, sd::Method::Combined));
  }
}
BENCHMARK(BM_SeparableGaussian)->Arg(32)->Arg(64);

}  // namespace

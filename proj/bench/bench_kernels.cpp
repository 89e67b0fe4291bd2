// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to the number of cores to compare.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "holofocus/autofocus.hpp"
#include "holofocus/calibration.hpp"
#include "holofocus/morphology.hpp"
#include "holofocus/propagation.hpp"
#include "holofocus/serial_kernels.hpp"

namespace {

using namespace holofocus;

GrayImage random_image(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage img(n, n);
  for (double& v : img.values()) v = u(rng);
  return img;
}

BinaryImage random_mask(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(0.5);
  BinaryImage img(n, n);
  for (auto& v : img.values()) v = b(rng) ? 1 : 0;
  return img;
}

std::vector<GrayImage> random_slices(std::size_t n, std::size_t count) {
  std::vector<GrayImage> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_image(n, 100 + i));
  return out;
}

void BM_BlurSerial(benchmark::State& state) {
  const GrayImage img = random_image(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(serial::gaussian_blur(img, 1.0));
}

void BM_BlurParallel(benchmark::State& state) {
  const GrayImage img = random_image(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, 1.0));
}

void BM_SobelSerial(benchmark::State& state) {
  const GrayImage img = random_image(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(serial::sobel_magnitude(img));
}

void BM_SobelParallel(benchmark::State& state) {
  const GrayImage img = random_image(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(sobel_magnitude(img));
}

void BM_ErodeSerial(benchmark::State& state) {
  const BinaryImage img = random_mask(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(serial::erode(img, 2));
}

void BM_ErodeParallel(benchmark::State& state) {
  const BinaryImage img = random_mask(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(erode(img, 2));
}

void BM_MinProjectionSerial(benchmark::State& state) {
  const auto slices = random_slices(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(serial::min_projection(slices));
}

void BM_MinProjectionParallel(benchmark::State& state) {
  const auto slices = random_slices(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(min_intensity_projection(slices));
}

OpticalConfig stack_config(std::size_t n) {
  OpticalConfig c;
  c.grid_rows = c.grid_cols = n;
  c.dis1 = 31e-3;
  c.dis_end = 31.75e-3;
  c.depth_spacing = 50e-6;
  return c;
}

void reconstruct_bench(benchmark::State& state, Exec exec) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const OpticalConfig config = stack_config(n);
  ParticleField field;
  field.particles.push_back({0.5 * n * config.pixel_pitch, 0.5 * n * config.pixel_pitch, 31.4e-3,
                             56e-6});
  const HologramFrame holo = synthesize_hologram(field, config, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_stack(holo, config, exec));
}

void BM_ReconstructSerial(benchmark::State& state) { reconstruct_bench(state, Exec::serial); }
void BM_ReconstructParallel(benchmark::State& state) { reconstruct_bench(state, Exec::parallel); }

}  // namespace

BENCHMARK(BM_BlurSerial)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlurParallel)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SobelSerial)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SobelParallel)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErodeSerial)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErodeParallel)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinProjectionSerial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinProjectionParallel)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReconstructSerial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReconstructParallel)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

/*
 * usmri: under-sampled MRI simulation and reconstruction toolkit
 *
 * Copyright 2026 The usmri authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "usmri/artifacts.hpp"
#include "usmri/fft.hpp"
#include "usmri/metrics.hpp"
#include "usmri/phantom.hpp"
#include "usmri/recon.hpp"
#include "usmri/rng.hpp"

using namespace usmri;

namespace {

ComplexImage random_image(int n, std::uint64_t seed) {
  rng::Generator gen(seed);
  ComplexImage img(n, n);
  for (auto& z : img.data()) {
    z = cplx(2.0 * gen.uniform01() - 1.0, 2.0 * gen.uniform01() - 1.0);
  }
  return img;
}

void BM_fft2c(benchmark::State& state) {
  const ComplexImage img = random_image(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fft2c(img));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_fft2c)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_make_mask_gradient(benchmark::State& state) {
  MaskSpec spec;
  spec.strategy = MaskStrategy::Gradient;
  spec.num_lines = static_cast<int>(state.range(0));
  spec.acceleration = 5.0;
  spec.acs_fraction = 0.10;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    spec.seed = seed++;
    benchmark::DoNotOptimize(make_mask(spec));
  }
}
BENCHMARK(BM_make_mask_gradient)->Arg(256)->Arg(512);

void BM_ssim_map(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  rng::Generator gen(2);
  RealImage a(n, n), b(n, n);
  for (auto& v : a.data()) v = gen.uniform01();
  for (auto& v : b.data()) v = gen.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssim_map(a, b));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ssim_map)->RangeMultiplier(2)->Range(64, 256)->Complexity();

void BM_ms_ssim_256(benchmark::State& state) {
  rng::Generator gen(3);
  RealImage a(256, 256), b(256, 256);
  for (auto& v : a.data()) v = gen.uniform01();
  for (auto& v : b.data()) v = gen.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ms_ssim(a, b));
  }
}
BENCHMARK(BM_ms_ssim_256);

void BM_tv_denoise_step(benchmark::State& state) {
  const ComplexImage img = random_image(256, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tv_denoise(img, 0.05, 1));
  }
}
BENCHMARK(BM_tv_denoise_step);

void BM_cascade_iteration_256(benchmark::State& state) {
  PhantomSpec spec = default_brain_spec();
  spec.seed = 5;
  const Phantom ph = generate_phantom(spec);
  const KSpace k = fft2c(ph.image);
  MaskSpec mspec;
  mspec.strategy = MaskStrategy::Gradient;
  mspec.num_lines = 256;
  mspec.acceleration = 5.0;
  mspec.acs_fraction = 0.10;
  mspec.seed = 6;
  const SamplingMask mask = make_mask(mspec);
  const KSpace acq = apply_mask(k, mask);
  CascadeConfig cfg;
  cfg.iterations = 1;
  cfg.tv_steps = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cascade_run(acq, mask, cfg));
  }
}
BENCHMARK(BM_cascade_iteration_256);

}  // namespace

BENCHMARK_MAIN();

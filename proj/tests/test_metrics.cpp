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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "usmri/artifacts.hpp"
#include "usmri/fft.hpp"
#include "usmri/metrics.hpp"
#include "usmri/phantom.hpp"
#include "usmri/rng.hpp"

using namespace usmri;

namespace {

MaskPair half_mask(int h, int w) {
  std::vector<std::uint8_t> fg(static_cast<std::size_t>(h) * w, 0);
  for (int r = 0; r < h / 2; ++r) {
    for (int c = 0; c < w; ++c) fg[static_cast<std::size_t>(r) * w + c] = 1;
  }
  return MaskPair(h, w, std::move(fg));
}

}  // namespace

TEST_CASE("psnr caps identical images at 300 dB") {
  const RealImage x = test::random_real01(8, 8, 1);
  CHECK(psnr(x, x) == kPsnrCapDb);
}

TEST_CASE("psnr closed form: zeros vs 0.1 gives 20 dB") {
  RealImage ref(16, 16);
  RealImage tst(16, 16);
  for (auto& v : tst.data()) v = 0.1;
  CHECK(psnr(tst, ref) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("psnr matches the brute-force MSE oracle") {
  const RealImage a = test::random_real01(8, 8, 2);
  const RealImage b = test::random_real01(8, 8, 3);
  const double expect = 10.0 * std::log10(1.0 / test::mse_oracle(a, b));
  CHECK(std::abs(psnr(a, b) - expect) < 1e-12);
}

TEST_CASE("psnr validates dimensions and range") {
  CHECK_THROWS_AS(psnr(RealImage(8, 8), RealImage(8, 9)), ValidationError);
  RealImage bad(8, 8);
  bad.at(0, 0) = 1.5;
  CHECK_THROWS_AS(psnr(bad, RealImage(8, 8)), ValidationError);
}

TEST_CASE("ssim_map of identical images is 1 everywhere") {
  const RealImage x = test::random_real01(16, 16, 4);
  const RealImage map = ssim_map(x, x);
  for (const double v : map.data()) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("ssim_map of an inverted binary image drops below 1 where variance exists") {
  RealImage a(16, 16);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) a.at(r, c) = (c < 8) ? 1.0 : 0.0;
  }
  RealImage b(16, 16);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 1.0 - a[i];
  const RealImage map = ssim_map(a, b);
  // Around the edge the local variance is nonzero; SSIM must drop there.
  for (int r = 0; r < 16; ++r) {
    for (int c = 4; c < 12; ++c) CHECK(map.at(r, c) < 1.0);
  }
}

TEST_CASE("ssim_map matches the brute-force windowed oracle on 16x16") {
  const RealImage a = test::random_real01(16, 16, 5);
  const RealImage b = test::random_real01(16, 16, 6);
  const RealImage fast = ssim_map(a, b);
  const RealImage slow = test::ssim_map_oracle(a, b);
  CHECK(test::max_abs_diff(fast, slow) < 1e-10);
}

TEST_CASE("ssim_map values stay within [-1, 1]") {
  const RealImage a = test::random_real01(32, 32, 7);
  const RealImage b = test::random_real01(32, 32, 8);
  for (const double v : ssim_map(a, b).data()) {
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= -1.0 - 1e-12);
  }
}

TEST_CASE("ssim_map rejects images smaller than the window") {
  CHECK_THROWS_AS(ssim_map(RealImage(10, 16), RealImage(10, 16)), ValidationError);
}

TEST_CASE("ssimf is 1 for identical images") {
  const RealImage x = test::random_real01(16, 16, 9);
  CHECK(ssimf(x, x, half_mask(16, 16)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssimf with a full-image mask equals the mean SSIM") {
  const RealImage a = test::random_real01(16, 16, 10);
  const RealImage b = test::random_real01(16, 16, 11);
  const MaskPair full(16, 16, std::vector<std::uint8_t>(256, 1));
  const RealImage map = ssim_map(a, b);
  double mean = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) mean += map[i];
  mean /= static_cast<double>(map.size());
  CHECK(ssimf(a, b, full) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("background corruption barely moves ssimf but lowers plain SSIM") {
  PhantomSpec spec = default_brain_spec(256, 256);
  spec.seed = 17;
  const Phantom ph = generate_phantom(spec);
  const RealImage ref = normalize01(magnitude(ph.image));

  RealImage corrupted = ref;
  rng::Generator gen(99);
  for (int r = 0; r < 256; ++r) {
    for (int c = 0; c < 256; ++c) {
      if (ph.masks.background(r, c)) {
        corrupted.at(r, c) = std::min(1.0, 0.1 * gen.uniform01());
      }
    }
  }
  const double f = ssimf(corrupted, ref, ph.masks);
  const RealImage map = ssim_map(corrupted, ref);
  double plain = 0.0;
  for (const double v : map.data()) plain += v;
  plain /= static_cast<double>(map.size());

  CHECK(std::abs(f - 1.0) < 0.005);  // Gaussian window bleed only
  CHECK(plain < 0.9);                // the full-image mean drops measurably
}

TEST_CASE("ms_ssim of identical 256x256 images is 1") {
  const RealImage x = test::random_real01(256, 256, 12);
  CHECK(std::abs(ms_ssim(x, x) - 1.0) < 1e-9);
}

TEST_CASE("ms_ssim is symmetric") {
  const RealImage a = test::random_real01(64, 64, 13);
  const RealImage b = test::random_real01(64, 64, 14);
  CHECK(std::abs(ms_ssim(a, b) - ms_ssim(b, a)) < 1e-12);
}

TEST_CASE("a single-scale configuration reduces to the mean SSIM") {
  const RealImage a = test::random_real01(16, 16, 15);
  const RealImage b = test::random_real01(16, 16, 16);
  // 16x16 cannot be downsampled below the window, so only one scale runs.
  const double ms = ms_ssim(a, b);
  const RealImage map = ssim_map(a, b);
  double mean = 0.0;
  for (const double v : map.data()) mean += v;
  mean /= static_cast<double>(map.size());
  CHECK(std::abs(ms - mean) < 1e-10);
}

TEST_CASE("ms_ssim stays in [0, 1] with negative-covariance flooring") {
  RealImage a(64, 64);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) a.at(r, c) = ((r + c) % 2 == 0) ? 1.0 : 0.0;
  }
  RealImage b(64, 64);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 1.0 - a[i];
  const double v = ms_ssim(a, b);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("snr_rf reproduces a constructed fg-mean / bg-stddev ratio") {
  const int h = 64, w = 64;
  MaskPair masks = half_mask(h, w);
  RealImage img(h, w);
  rng::Generator gen(55);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      img.at(r, c) = masks.foreground(r, c) ? 10.0 : 2.0 * gen.normal();
    }
  }
  CHECK(snr_rf(img, masks) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("snr_rf is scale-invariant") {
  const int h = 32, w = 32;
  MaskPair masks = half_mask(h, w);
  RealImage img = test::random_real01(h, w, 18);
  const double base = snr_rf(img, masks);
  RealImage scaled = img;
  for (auto& v : scaled.data()) v *= 3.7;
  CHECK(std::abs(snr_rf(scaled, masks) - base) < 1e-12 * std::abs(base));
}

TEST_CASE("snr_rf rejects a noiseless background") {
  const int h = 16, w = 16;
  MaskPair masks = half_mask(h, w);
  RealImage img(h, w);
  for (int r = 0; r < h / 2; ++r) {
    for (int c = 0; c < w; ++c) img.at(r, c) = 1.0;
  }
  CHECK_THROWS_WITH_AS(snr_rf(img, masks),
                       "snr_rf: noiseless background, SNR undefined", ValidationError);
}

TEST_CASE("contrast of a constant foreground is zero") {
  MaskPair masks = half_mask(16, 16);
  RealImage img(16, 16);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 16; ++c) img.at(r, c) = 0.4;
  }
  CHECK(contrast(img, masks) < 1e-12);
}

TEST_CASE("contrast of a two-level foreground approaches 0.5") {
  const int h = 64, w = 64;
  MaskPair masks = half_mask(h, w);
  RealImage img(h, w);
  for (int r = 0; r < h / 2; ++r) {
    for (int c = 0; c < w; ++c) img.at(r, c) = (c < w / 2) ? 0.0 : 1.0;
  }
  const double n = static_cast<double>(masks.foreground_count());
  CHECK(std::abs(contrast(img, masks) - 0.5) < 1.0 / n * 10.0);
}

TEST_CASE("contrast is shift-invariant") {
  MaskPair masks = half_mask(32, 32);
  RealImage img = test::random_real01(32, 32, 19);
  const double base = contrast(img, masks);
  RealImage shifted = img;
  for (auto& v : shifted.data()) v += 2.5;
  CHECK(std::abs(contrast(shifted, masks) - base) < 1e-12);
}

TEST_CASE("noise strictly degrades ssimf and psnr on a fixed phantom") {
  PhantomSpec spec = default_brain_spec(128, 128);
  spec.seed = 20;
  const Phantom ph = generate_phantom(spec);
  const RealImage ref = normalize01(magnitude(ph.image));
  const KSpace k = fft2c(ph.image);

  double prev_ssimf = 2.0, prev_psnr = 1e9;
  for (const double sigma : {0.002, 0.01, 0.05, 0.2}) {
    const RealImage noisy = normalize01(magnitude(ifft2c(add_gaussian_noise(k, sigma, 77))));
    const double f = ssimf(noisy, ref, ph.masks);
    const double p = psnr(noisy, ref);
    CHECK(f < prev_ssimf);
    CHECK(p < prev_psnr);
    prev_ssimf = f;
    prev_psnr = p;
  }
}

TEST_CASE("report aggregates match hand-computed mean and std") {
  MetricsReport report;
  report.per_image = {{"a", 0.9, 30.0, 0.8, 10.0, 0.5},
                      {"b", 0.7, 20.0, 0.6, 20.0, 0.3}};
  const MetricsRow mean = report.mean();
  CHECK(mean.ssimf == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(mean.psnr_db == doctest::Approx(25.0).epsilon(1e-12));
  const MetricsRow sd = report.stddev();
  CHECK(sd.ssimf == doctest::Approx(std::sqrt(0.02)).epsilon(1e-9));

  // NaNs are skipped per column.
  report.per_image.push_back({"c", std::nan(""), 25.0, 0.7, 15.0, 0.4});
  CHECK(report.mean().ssimf == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(report.mean().psnr_db == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("report CSV has the documented layout") {
  MetricsReport report;
  report.per_image = {{"img0", 1.0, 300.0, 1.0, 5.0, 0.25}};
  std::ostringstream ss;
  report.write_csv(ss);
  const std::string csv = ss.str();
  CHECK(csv.rfind("image_id,ssimf,psnr_db,ms_ssim,snr,contrast\n", 0) == 0);
  CHECK(csv.find("\nimg0,1,300,1,5,0.25") != std::string::npos);
  CHECK(csv.find("\nmean,") != std::string::npos);
  CHECK(csv.find("\nstd,") != std::string::npos);
}

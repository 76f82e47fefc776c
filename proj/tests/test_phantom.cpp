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
#include <numbers>

#include "test_support.hpp"
#include "usmri/artifacts.hpp"
#include "usmri/fft.hpp"
#include "usmri/phantom.hpp"

using namespace usmri;

namespace {

PhantomSpec single_circle_spec() {
  PhantomSpec spec;
  spec.height = 64;
  spec.width = 64;
  spec.ellipses = {{0.0, 0.0, 0.5, 0.5, 0.0, 1.0}};
  return spec;
}

}  // namespace

TEST_CASE("a single centered circle renders as a binary disc") {
  const Phantom ph = generate_phantom(single_circle_spec());
  std::size_t n_fg = 0;
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      const double v = ph.image.at(r, c).real();
      if (ph.masks.foreground(r, c)) {
        CHECK(v == 1.0);
        ++n_fg;
      } else {
        CHECK(v == 0.0);
      }
      CHECK(ph.image.at(r, c).imag() == 0.0);
    }
  }
  // Disc of radius 0.5 in [-1,1]^2: area fraction pi * 0.25 / 4.
  const double frac = static_cast<double>(n_fg) / (64.0 * 64.0);
  CHECK(frac == doctest::Approx(std::numbers::pi * 0.25 / 4.0).epsilon(0.05));
}

TEST_CASE("the default brain spec has a 30-70% foreground at 256x256") {
  const Phantom ph = generate_phantom(default_brain_spec());
  const double frac = static_cast<double>(ph.masks.foreground_count()) /
                      static_cast<double>(ph.masks.size());
  CHECK(frac > 0.30);
  CHECK(frac < 0.70);

  // Analytic check: the outer ellipse has area pi*a*b out of 4 in
  // normalized coordinates.
  const auto& outer = default_brain_spec().ellipses.front();
  const double analytic = std::numbers::pi * outer.a * outer.b / 4.0;
  CHECK(frac == doctest::Approx(analytic).epsilon(0.02));
}

TEST_CASE("phantom generation is bit-deterministic") {
  PhantomSpec spec = default_brain_spec(64, 64);
  spec.seed = 77;
  spec.texture_amplitude = 0.04;
  const Phantom a = generate_phantom(spec);
  const Phantom b = generate_phantom(spec);
  CHECK(a.image == b.image);
  CHECK(a.masks == b.masks);
}

TEST_CASE("texture stays within 5% and keeps intensities in [0,1]") {
  PhantomSpec spec = default_brain_spec(128, 128);
  spec.seed = 3;
  spec.texture_amplitude = 0.05;
  const Phantom plain = generate_phantom(default_brain_spec(128, 128));
  const Phantom textured = generate_phantom(spec);
  for (std::size_t i = 0; i < textured.image.size(); ++i) {
    const double v = textured.image[i].real();
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // Texture must not move the mask.
  CHECK(plain.masks == textured.masks);
  CHECK_THROWS_AS(
      generate_phantom([] {
        PhantomSpec s = default_brain_spec(64, 64);
        s.texture_amplitude = 0.06;
        return s;
      }()),
      ValidationError);
}

TEST_CASE("zero ellipses is a validation error") {
  PhantomSpec spec;
  spec.ellipses.clear();
  CHECK_THROWS_AS(generate_phantom(spec), ValidationError);
}

TEST_CASE("negative summed intensities are rejected") {
  PhantomSpec spec = single_circle_spec();
  spec.ellipses.push_back({0.0, 0.0, 0.2, 0.2, 0.0, -2.0});
  CHECK_THROWS_AS(generate_phantom(spec), ValidationError);
}

TEST_CASE("estimate_foreground recovers the phantom mask with dice >= 0.95") {
  PhantomSpec spec = default_brain_spec();
  spec.seed = 5;
  spec.texture_amplitude = 0.03;
  const Phantom ph = generate_phantom(spec);
  const MaskPair est = estimate_foreground(normalize01(magnitude(ph.image)));
  CHECK(test::dice(est, ph.masks) >= 0.95);
}

TEST_CASE("estimate_foreground survives heavy noise with dice >= 0.90") {
  PhantomSpec spec = default_brain_spec();
  spec.seed = 6;
  const Phantom ph = generate_phantom(spec);
  KSpace k = fft2c(ph.image);
  // Baseline noise so the reference SNR is finite, then the calibrated
  // SNR-halving level on top: the strongest degradation the protocol uses.
  double rms = 0.0;
  for (const auto& z : k.data()) rms += std::norm(z);
  rms = std::sqrt(rms / static_cast<double>(k.size()));
  k = add_gaussian_noise(k, 0.02 * rms, 123);
  const double sigma = calibrate_sigma(k, ph.masks, 0.5, 9);
  const KSpace noisy = add_gaussian_noise(k, sigma, 321);
  const MaskPair est = estimate_foreground(normalize01(magnitude(ifft2c(noisy))));
  CHECK(test::dice(est, ph.masks) >= 0.90);
}

TEST_CASE("estimate_foreground rejects blank images") {
  RealImage blank(32, 32);
  CHECK_THROWS_WITH_AS(estimate_foreground(blank),
                       "estimate_foreground: no subject detected (constant image)",
                       ValidationError);
}

TEST_CASE("an image of ones with a single zero pixel has no background left") {
  RealImage img(16, 16);
  for (auto& v : img.data()) v = 1.0;
  img.at(8, 8) = 0.0;
  // Closing fills the pinhole, so the subject covers everything.
  CHECK_THROWS_AS(estimate_foreground(img), ValidationError);
}

TEST_CASE("estimate_foreground is idempotent under foreground masking") {
  PhantomSpec spec = default_brain_spec(128, 128);
  spec.seed = 8;
  spec.texture_amplitude = 0.02;
  const Phantom ph = generate_phantom(spec);
  const RealImage norm = normalize01(magnitude(ph.image));
  const MaskPair first = estimate_foreground(norm);
  RealImage masked = norm;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (!first.foreground_at(i)) masked[i] = 0.0;
  }
  const MaskPair second = estimate_foreground(masked);
  CHECK(first == second);
}

TEST_CASE("foreground and background partition every pixel") {
  const Phantom ph = generate_phantom(default_brain_spec(64, 64));
  CHECK(ph.masks.foreground_count() + ph.masks.background_count() == ph.masks.size());
  CHECK(ph.masks.foreground_count() > 0);
  CHECK(ph.masks.background_count() > 0);
}

TEST_CASE("perturbed specs stay valid and differ per seed") {
  const PhantomSpec base = default_brain_spec();
  const PhantomSpec a = perturbed(base, 1, 0.05);
  const PhantomSpec b = perturbed(base, 2, 0.05);
  CHECK(a.ellipses[0].a != b.ellipses[0].a);
  const Phantom pa = generate_phantom(a);
  const double frac = static_cast<double>(pa.masks.foreground_count()) /
                      static_cast<double>(pa.masks.size());
  CHECK(frac > 0.30);
  CHECK(frac < 0.70);
}

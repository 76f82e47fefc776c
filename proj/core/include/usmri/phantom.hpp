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

#pragma once

#include <cstdint>
#include <vector>

#include "usmri/types.hpp"

namespace usmri {

/// Additive ellipse in normalized coordinates: centers and semi-axes are
/// fractions of the half-extent, so the image spans [-1, 1] on both axes.
struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.5;   // semi-axis along x before rotation
  double b = 0.5;   // semi-axis along y before rotation
  double rotation_deg = 0.0;
  double intensity = 1.0;  // additive, may be negative as long as sums stay >= 0
};

struct PhantomSpec {
  int height = 256;
  int width = 256;
  std::vector<Ellipse> ellipses;
  std::uint64_t seed = 0;
  // Band-limited random texture added inside the subject, as a fraction of
  // the peak intensity. 0 disables; capped at 0.05 so the analytic ellipse
  // masks stay usable as ground truth.
  double texture_amplitude = 0.0;
};

/// Skull-like outer ellipse, two interior structures, and a small bright
/// lesion. Foreground covers roughly half the pixels at 256x256.
PhantomSpec default_brain_spec(int height = 256, int width = 256);

/// Deterministic jitter of ellipse geometry and intensities; `relative`
/// bounds the perturbation (0.05 = up to 5%). The outer ellipse keeps its
/// role as the subject boundary.
PhantomSpec perturbed(const PhantomSpec& base, std::uint64_t seed, double relative);

struct Phantom {
  ComplexImage image;  // real-valued, normalized to [0, 1]; imaginary part 0
  MaskPair masks;      // foreground = inside the first (outermost) ellipse
};

/// Renders the ellipse sum, adds optional seeded texture inside the
/// foreground, and normalizes intensities to [0, 1]. Bit-deterministic for a
/// given spec.
Phantom generate_phantom(const PhantomSpec& spec);

/// Subject mask from a normalized magnitude image: 256-bin between-class
/// variance threshold, 3x3 morphological closing, largest 8-connected
/// component. Throws if no subject or no background remains.
MaskPair estimate_foreground(const RealImage& img);

}  // namespace usmri

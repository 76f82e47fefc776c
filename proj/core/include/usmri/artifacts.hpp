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

struct NoiseSpec {
  enum class Mode { Sigma, TargetSnrFactor };
  Mode mode = Mode::Sigma;
  double sigma = 0.0;   // k-space intensity units; Mode::Sigma
  double factor = 1.0;  // post-noise SNR as a fraction of the original, (0, 1]
  std::uint64_t seed = 0;
};

/// A rigid pose change at a point in the acquisition timeline. Poses
/// accumulate: the subject stays in the new pose until the next event,
/// unless `transient` reverts it afterwards.
struct MotionEvent {
  double onset = 0.0;         // fraction of acquisition time, [0, 1)
  double rotation_deg = 0.0;  // about the image center, |rot| <= 45
  double dx = 0.0;            // pixels along width; |dx| <= width / 4
  double dy = 0.0;            // pixels along height; |dy| <= width / 4
  bool transient = false;
};

enum class OrderKind { Linear, Centric };

std::string to_string(OrderKind k);
OrderKind order_kind_from_string(const std::string& s);

/// permutation[line] = acquisition time index of that phase-encode line.
struct AcquisitionOrder {
  OrderKind kind = OrderKind::Linear;
  std::vector<int> permutation;
};

/// Linear: top row first. Centric: center line, then alternating outward.
AcquisitionOrder acquisition_order(int num_lines, OrderKind kind);

/// Adds i.i.d. complex Gaussian noise (real and imaginary parts each
/// N(0, sigma^2)). sigma == 0 returns the input bit-identically.
KSpace add_gaussian_noise(const KSpace& k, double sigma, std::uint64_t seed);

/// Finds sigma such that the reference-free SNR of the noisy magnitude
/// reconstruction, averaged over 8 fixed seeds, equals target_factor times
/// the SNR of the input. Bisection on [0, rms(|k|)], 60 iterations; requires
/// the input to have a finite SNR (a fluctuating background). The final
/// sigma is verified to 2% relative, else a CalibrationError reports the
/// bracketing interval.
double calibrate_sigma(const KSpace& k, const MaskPair& masks, double target_factor,
                       std::uint64_t base_seed = 0);

/// Composites k-space line by line from piecewise-constant motion states:
/// rotation by bilinear resampling about the center (zero outside),
/// translation applied exactly as a k-space phase ramp. Line `l` acquired at
/// time permutation[l] / H takes its row from the state active at that time.
KSpace simulate_motion(const ComplexImage& img, const std::vector<MotionEvent>& events,
                       const AcquisitionOrder& order);

/// The distinct transformed images the simulation composites from (state 0
/// is the untransformed input); used by the CLI preview path.
std::vector<ComplexImage> motion_states(const ComplexImage& img,
                                        const std::vector<MotionEvent>& events);

}  // namespace usmri

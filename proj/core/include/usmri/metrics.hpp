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

#include <iosfwd>
#include <string>
#include <vector>

#include "usmri/types.hpp"

namespace usmri {

/// Standard SSIM parameters: 11x11 Gaussian window (sigma 1.5),
/// k1 = 0.01, k2 = 0.03, dynamic range 1 for [0, 1] images.
struct SsimParams {
  int window_size = 11;
  double window_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// PSNR cap returned for a zero-MSE (identical) pair.
inline constexpr double kPsnrCapDb = 300.0;

/// 10 * log10(1 / MSE) for [0, 1] images; identical images return the
/// 300 dB sentinel cap.
double psnr(const RealImage& test, const RealImage& ref);

/// Per-pixel SSIM with Gaussian-weighted local statistics and symmetric
/// boundary reflection. Requires min dimension >= window size.
RealImage ssim_map(const RealImage& test, const RealImage& ref,
                   const SsimParams& params = {});

/// Mean of the SSIM map over foreground pixels only.
double ssimf(const RealImage& test, const RealImage& ref, const MaskPair& masks,
             const SsimParams& params = {});

/// Multi-scale SSIM: contrast-structure means at each scale (2x2 mean-pool
/// between scales), the full SSIM mean at the coarsest, combined with the
/// standard exponents. Scale count shrinks to the largest feasible for
/// small images, with weights renormalized to sum 1.
double ms_ssim(const RealImage& test, const RealImage& ref, int max_scales = 5);

/// Reference-free SNR: mean over foreground / stddev over background
/// (unbiased). Throws if the background has zero variance.
double snr_rf(const RealImage& img, const MaskPair& masks);

/// Unbiased standard deviation of the foreground signal.
double contrast(const RealImage& img, const MaskPair& masks);

struct MetricsRow {
  std::string image_id;
  double ssimf = 0.0;
  double psnr_db = 0.0;
  double ms_ssim = 0.0;
  double snr = 0.0;
  double contrast = 0.0;
};

/// Per-image metric rows plus mean/std aggregates. Aggregates are computed
/// per column over finite entries (a metric that was undefined for an image
/// is stored as NaN and skipped).
struct MetricsReport {
  std::vector<MetricsRow> per_image;

  MetricsRow mean() const;
  MetricsRow stddev() const;

  /// CSV with columns image_id, ssimf, psnr_db, ms_ssim, snr, contrast and
  /// trailing mean / std rows. Deterministic formatting (17 significant
  /// digits).
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// Deterministic float formatting used in every CSV writer ("%.17g").
std::string format_double(double v);

}  // namespace usmri

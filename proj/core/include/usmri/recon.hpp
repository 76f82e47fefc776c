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

#include <string>
#include <vector>

#include "usmri/metrics.hpp"
#include "usmri/sampling.hpp"
#include "usmri/types.hpp"

namespace usmri {

enum class KStage { ZeroFill, HermitianFill };
enum class IStage { None, TvDenoise, RealPositivity };

/// Dual-domain cascade configuration: a k-space stage predicts missing
/// lines, data consistency restores the acquired ones, and an image stage
/// refines the inverse transform. Iterating alternates the projections.
struct CascadeConfig {
  KStage k_stage = KStage::HermitianFill;
  IStage i_stage = IStage::TvDenoise;
  double tv_lambda = 0.05;
  int tv_steps = 10;
  int iterations = 20;
  bool record_diagnostics = false;
};

struct IterationDiag {
  int iteration = 0;
  double dc_residual = 0.0;   // ||M(k_i - k_acq)||_2 after the image stage
  double image_change = 0.0;  // ||x_i - x_{i-1}||_2 (x_0 = zero-filled)
};

struct ReconResult {
  ComplexImage image;
  KSpace final_k;  // agrees bit-exactly with the acquired lines
  std::vector<IterationDiag> diagnostics;
};

/// Inverse transform of the zero-filled k-space (the naive baseline).
ComplexImage zero_filled(const KSpace& k_acq, const SamplingMask& mask);

/// Fills each dropped line whose point-reflected partner (through DC) is
/// kept with the conjugated, reversed partner row; exact for real-valued
/// images. Kept lines are untouched; dropped lines without a kept partner
/// are left as they are.
KSpace hermitian_fill(const KSpace& k, const SamplingMask& mask);

/// Gradient descent on 1/2 ||x - |img|||^2 + lambda * TV_eps(x) over the
/// magnitude, phase preserved. The step starts at 0.1 and is halved whenever
/// it would increase the objective, so the objective is non-increasing.
/// When `objective_trace` is given it receives the objective value before
/// the first step and after every accepted step.
ComplexImage tv_denoise(const ComplexImage& img, double lambda, int steps,
                        std::vector<double>* objective_trace = nullptr);

/// Runs the cascade: k-stage, data consistency, inverse transform, image
/// stage, forward transform; a final data-consistency pass precedes the
/// output so kept lines always match the acquisition bit-exactly.
ReconResult cascade_run(const KSpace& k_acq, const SamplingMask& mask,
                        const CascadeConfig& cfg);

/// Scores externally produced reconstructions with the same metric pipeline
/// (normalized magnitudes; ssimf/psnr/ms-ssim against the reference, snr
/// and contrast on the reconstruction). Metrics undefined for an image are
/// recorded as NaN.
MetricsReport evaluate_external(const std::vector<ComplexImage>& recons,
                                const std::vector<ComplexImage>& refs,
                                const std::vector<MaskPair>& masks,
                                const std::vector<std::string>& ids = {});

void write_diagnostics_csv(const ReconResult& result, std::ostream& os);

}  // namespace usmri

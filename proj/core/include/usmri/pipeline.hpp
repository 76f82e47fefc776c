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
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "usmri/artifacts.hpp"
#include "usmri/phantom.hpp"
#include "usmri/recon.hpp"
#include "usmri/sampling.hpp"

namespace usmri {

struct MotionSpec {
  std::vector<MotionEvent> events;
  OrderKind order = OrderKind::Linear;
};

/// Declarative degradation. Order is fixed: motion (recomposited from image
/// states), then noise, then under-sampling. No mask spec means full
/// sampling (an all-true mask).
struct DegradationSpec {
  std::optional<NoiseSpec> noise;
  std::optional<MotionSpec> motion;
  std::optional<MaskSpec> mask;
};

/// Applies the degradation chain to a fully sampled k-space. SNR-targeted
/// noise needs a subject mask; when none is supplied it is estimated from
/// the input image.
std::pair<KSpace, SamplingMask> degrade(const KSpace& k_full, const DegradationSpec& spec,
                                        const MaskPair* subject_masks = nullptr);

/// Synthetic source: jittered variants of the default brain spec. A small
/// baseline noise (fraction of k-space RMS) gives the references a finite
/// SNR, mirroring the fact that acquired ground-truth images carry noise of
/// their own; SNR-targeted degradation is measured against these references.
struct PhantomSource {
  int count = 20;
  int height = 256;
  int width = 256;
  double jitter = 0.05;
  double texture_amplitude = 0.03;
  double baseline_sigma_rel = 0.02;
};

/// Directory of image-domain .kcpx files used as references; subject masks
/// are estimated from the magnitude images.
struct DatasetSource {
  std::filesystem::path dir;
};

struct ArtifactSpec {
  std::string name = "none";
  std::optional<NoiseSpec> noise;
  std::optional<MotionSpec> motion;
};

struct ReconSpec {
  std::string name = "zero_filled";
  bool is_cascade = false;
  CascadeConfig cascade;
};

struct AccelerationSpec {
  double acceleration = 5.0;
  double acs_fraction = 0.10;
};

struct ExperimentConfig {
  std::variant<PhantomSource, DatasetSource> source = PhantomSource{};
  std::vector<MaskStrategy> strategies = {MaskStrategy::Gradient};
  std::vector<AccelerationSpec> accelerations = {{5.0, 0.10}};
  bool per_image_masks = false;  // default: one mask per experiment cell
  double gradient_alpha = 2.0;
  std::vector<ArtifactSpec> artifacts = {ArtifactSpec{}};
  std::vector<ReconSpec> recons;
  std::uint64_t master_seed = 0;
  std::filesystem::path out_dir = "out";
  bool emit_images = false;
};

struct CellKey {
  MaskStrategy strategy = MaskStrategy::Gradient;
  AccelerationSpec accel;
  std::string artifact;
  std::string recon;
};

struct CellResult {
  CellKey key;
  std::string label;
  MetricsReport report;
  std::string error;  // non-empty when the cell failed; the run continues
};

struct ExperimentSummary {
  std::vector<CellResult> cells;
};

/// Runs every (strategy x acceleration x artifact x recon) cell: degrade,
/// reconstruct, score. Writes per-cell metrics.csv files plus an aggregate
/// cells.csv; reruns with the same config are byte-identical.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Strict JSON config loader; unknown keys are errors. Schema in README.md.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Default reconstructor pair used when a config lists no recons: the
/// zero-filled baseline and the hermitian + TV cascade.
std::vector<ReconSpec> default_recons();

}  // namespace usmri

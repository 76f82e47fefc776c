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

#include "usmri/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "usmri/fft.hpp"
#include "usmri/io.hpp"
#include "usmri/rng.hpp"

namespace usmri {

namespace {

// Sub-stream ids for per-image seed derivation; image_seed = master ^ index.
constexpr std::uint64_t kStreamPhantom = 1;
constexpr std::uint64_t kStreamBaselineNoise = 2;
constexpr std::uint64_t kStreamDegradeNoise = 3;
constexpr std::uint64_t kStreamPerImageMask = 4;
constexpr std::uint64_t kStreamCellMask = 0x10000;

double kspace_rms(const KSpace& k) {
  double acc = 0.0;
  for (const auto& z : k.data()) acc += std::norm(z);
  return std::sqrt(acc / static_cast<double>(k.size()));
}

std::string sanitize_label(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      out.push_back('-');
    }
  }
  return out.empty() ? "cell" : out;
}

std::string accel_label(double r) {
  char buf[32];
  if (r == std::floor(r)) {
    std::snprintf(buf, sizeof(buf), "%d", static_cast<int>(r));
  } else {
    std::snprintf(buf, sizeof(buf), "%g", r);
  }
  return buf;
}

struct ImageCase {
  std::string id;
  ComplexImage reference;
  KSpace k_reference;
  MaskPair masks;
  RealImage reference_norm;
};

std::vector<ImageCase> build_cases(const ExperimentConfig& cfg) {
  std::vector<ImageCase> cases;
  if (const auto* src = std::get_if<PhantomSource>(&cfg.source)) {
    PhantomSpec base = default_brain_spec(src->height, src->width);
    base.texture_amplitude = src->texture_amplitude;
    for (int i = 0; i < src->count; ++i) {
      const std::uint64_t image_seed = cfg.master_seed ^ static_cast<std::uint64_t>(i);
      const PhantomSpec spec =
          perturbed(base, rng::mix(image_seed, kStreamPhantom), src->jitter);
      Phantom ph = generate_phantom(spec);
      KSpace k_ref = fft2c(ph.image);
      ComplexImage reference = std::move(ph.image);
      if (src->baseline_sigma_rel > 0.0) {
        const double sigma0 = src->baseline_sigma_rel * kspace_rms(k_ref);
        k_ref = add_gaussian_noise(k_ref, sigma0,
                                   rng::mix(image_seed, kStreamBaselineNoise));
        reference = ifft2c(k_ref);
      }
      char id[32];
      std::snprintf(id, sizeof(id), "phantom_%03d", i);
      RealImage ref_norm = normalize01(magnitude(reference));
      cases.push_back(ImageCase{id, std::move(reference), std::move(k_ref),
                                std::move(ph.masks), std::move(ref_norm)});
    }
  } else {
    const auto& dataset = std::get<DatasetSource>(cfg.source);
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dataset.dir)) {
      throw IoError("dataset directory not found: " + dataset.dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dataset.dir)) {
      if (entry.path().extension() == ".kcpx") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw ValidationError("dataset directory has no .kcpx files: " +
                            dataset.dir.string());
    }
    for (const auto& f : files) {
      KcpxData data = import_kcpx(f);
      ComplexImage reference = data.domain == KcpxDomain::Image
                                   ? std::move(data).as_image()
                                   : ifft2c(std::move(data).as_kspace());
      RealImage ref_norm = normalize01(magnitude(reference));
      MaskPair masks = estimate_foreground(ref_norm);
      KSpace k_ref = fft2c(reference);
      cases.push_back(ImageCase{f.stem().string(), std::move(reference),
                                std::move(k_ref), std::move(masks),
                                std::move(ref_norm)});
    }
  }
  return cases;
}

}  // namespace

std::pair<KSpace, SamplingMask> degrade(const KSpace& k_full, const DegradationSpec& spec,
                                        const MaskPair* subject_masks) {
  require_finite(k_full, "degrade");
  KSpace k = k_full;

  if (spec.motion && !spec.motion->events.empty()) {
    const ComplexImage img = ifft2c(k);
    const AcquisitionOrder order = acquisition_order(k.height(), spec.motion->order);
    k = simulate_motion(img, spec.motion->events, order);
  }

  if (spec.noise) {
    double sigma = 0.0;
    if (spec.noise->mode == NoiseSpec::Mode::Sigma) {
      sigma = spec.noise->sigma;
    } else {
      std::optional<MaskPair> estimated;
      if (subject_masks == nullptr) {
        estimated = estimate_foreground(normalize01(magnitude(ifft2c(k_full))));
      }
      const MaskPair& masks = subject_masks ? *subject_masks : *estimated;
      // Calibrated against the pristine input, not the motion-corrupted one:
      // the target is a fraction of the original image's SNR.
      sigma = calibrate_sigma(k_full, masks, spec.noise->factor, spec.noise->seed);
    }
    k = add_gaussian_noise(k, sigma, spec.noise->seed);
  }

  SamplingMask mask = spec.mask ? make_mask(*spec.mask) : full_mask(k.height());
  return {apply_mask(k, mask), std::move(mask)};
}

std::vector<ReconSpec> default_recons() {
  ReconSpec zf;
  zf.name = "zero_filled";
  zf.is_cascade = false;
  ReconSpec cascade;
  cascade.name = "cascade";
  cascade.is_cascade = true;
  cascade.cascade = CascadeConfig{};
  return {zf, cascade};
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.strategies.empty() || cfg.accelerations.empty() || cfg.artifacts.empty() ||
      cfg.recons.empty()) {
    throw ValidationError(
        "run_experiment: the strategy x acceleration x artifact x recon matrix is empty");
  }
  std::filesystem::create_directories(cfg.out_dir);

  const std::vector<ImageCase> cases = build_cases(cfg);
  if (cases.empty()) throw ValidationError("run_experiment: no input images");
  const int num_lines = cases.front().k_reference.height();

  ExperimentSummary summary;
  // Degradation cells (strategy x acceleration x artifact) are shared by all
  // reconstructors: every recon sees the same degraded k-space and mask, so
  // per-image comparisons between reconstructors are paired.
  std::size_t deg_index = 0;
  for (const MaskStrategy strategy : cfg.strategies) {
    for (const AccelerationSpec& accel : cfg.accelerations) {
      for (const ArtifactSpec& artifact : cfg.artifacts) {
        const std::uint64_t cell_seed =
            rng::mix(cfg.master_seed, kStreamCellMask + deg_index);
        ++deg_index;

        std::vector<KSpace> degraded;
        std::vector<SamplingMask> deg_masks;
        std::string degradation_error;
        try {
          for (std::size_t i = 0; i < cases.size(); ++i) {
            const ImageCase& c = cases[i];
            const std::uint64_t image_seed =
                cfg.master_seed ^ static_cast<std::uint64_t>(i);

            DegradationSpec dspec;
            dspec.mask.emplace();
            dspec.mask->strategy = strategy;
            dspec.mask->acceleration = accel.acceleration;
            dspec.mask->acs_fraction = accel.acs_fraction;
            dspec.mask->num_lines = num_lines;
            dspec.mask->gradient_alpha = cfg.gradient_alpha;
            dspec.mask->seed = cfg.per_image_masks
                                   ? rng::mix(image_seed, kStreamPerImageMask)
                                   : cell_seed;
            dspec.motion = artifact.motion;
            if (artifact.noise) {
              dspec.noise = artifact.noise;
              dspec.noise->seed = rng::mix(image_seed, kStreamDegradeNoise);
            }
            auto [k_deg, mask] = degrade(c.k_reference, dspec, &c.masks);
            degraded.push_back(std::move(k_deg));
            deg_masks.push_back(std::move(mask));
          }
        } catch (const std::exception& e) {
          degradation_error = e.what();
        }

        for (const ReconSpec& recon : cfg.recons) {
          CellResult cell;
          cell.key = CellKey{strategy, accel, artifact.name, recon.name};
          cell.label = sanitize_label(to_string(strategy) + "_R" +
                                      accel_label(accel.acceleration) + "_" +
                                      artifact.name + "_" + recon.name);
          if (!degradation_error.empty()) {
            cell.error = degradation_error;
            summary.cells.push_back(std::move(cell));
            continue;
          }
          try {
            std::vector<ComplexImage> recon_images;
            std::vector<ComplexImage> references;
            std::vector<MaskPair> masks;
            std::vector<std::string> ids;
            const std::filesystem::path cell_dir = cfg.out_dir / cell.label;

            for (std::size_t i = 0; i < cases.size(); ++i) {
              const ImageCase& c = cases[i];
              ComplexImage image =
                  recon.is_cascade
                      ? cascade_run(degraded[i], deg_masks[i], recon.cascade).image
                      : zero_filled(degraded[i], deg_masks[i]);

              if (cfg.emit_images) {
                std::filesystem::create_directories(cell_dir);
                export_pgm(c.reference_norm, cell_dir / (c.id + "_original.pgm"));
                export_pgm(normalize01(magnitude(zero_filled(degraded[i], deg_masks[i]))),
                           cell_dir / (c.id + "_degraded.pgm"));
                export_pgm(normalize01(magnitude(image)),
                           cell_dir / (c.id + "_recon.pgm"));
              }

              recon_images.push_back(std::move(image));
              references.push_back(c.reference);
              masks.push_back(c.masks);
              ids.push_back(c.id);
            }

            cell.report = evaluate_external(recon_images, references, masks, ids);
            std::filesystem::create_directories(cell_dir);
            write_file_atomic(cell_dir / "metrics.csv", cell.report.to_csv());
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
          summary.cells.push_back(std::move(cell));
        }
      }
    }
  }

  // Aggregate table: one row per cell, mean and std per metric.
  std::ostringstream table;
  table << "strategy,acceleration,acs_fraction,artifact,recon,n_images,"
           "ssimf_mean,ssimf_std,psnr_db_mean,psnr_db_std,ms_ssim_mean,ms_ssim_std,"
           "snr_mean,snr_std,contrast_mean,contrast_std,status\n";
  for (const CellResult& cell : summary.cells) {
    table << to_string(cell.key.strategy) << ',' << format_double(cell.key.accel.acceleration)
          << ',' << format_double(cell.key.accel.acs_fraction) << ',' << cell.key.artifact
          << ',' << cell.key.recon << ',';
    if (cell.error.empty()) {
      const MetricsRow mean = cell.report.mean();
      const MetricsRow sd = cell.report.stddev();
      table << cell.report.per_image.size() << ',' << format_double(mean.ssimf) << ','
            << format_double(sd.ssimf) << ',' << format_double(mean.psnr_db) << ','
            << format_double(sd.psnr_db) << ',' << format_double(mean.ms_ssim) << ','
            << format_double(sd.ms_ssim) << ',' << format_double(mean.snr) << ','
            << format_double(sd.snr) << ',' << format_double(mean.contrast) << ','
            << format_double(sd.contrast) << ",ok\n";
    } else {
      std::string flat = cell.error;
      for (char& c : flat) {
        if (c == ',' || c == '\n') c = ';';
      }
      table << "0,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,error: " << flat << '\n';
    }
  }
  write_file_atomic(cfg.out_dir / "cells.csv", table.str());
  return summary;
}

}  // namespace usmri

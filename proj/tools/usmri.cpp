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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "usmri/artifacts.hpp"
#include "usmri/fft.hpp"
#include "usmri/io.hpp"
#include "usmri/metrics.hpp"
#include "usmri/phantom.hpp"
#include "usmri/pipeline.hpp"
#include "usmri/recon.hpp"

using namespace usmri;
namespace fs = std::filesystem;

namespace {

bool g_quiet = false;

void info(const std::string& msg) {
  if (!g_quiet) std::cerr << msg << '\n';
}

// "onset:rotation:dx:dy[:transient]" per --event occurrence.
MotionEvent parse_event(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5) {
    throw ValidationError("--event expects onset:rotation:dx:dy[:transient], got '" + s +
                          "'");
  }
  MotionEvent e;
  try {
    e.onset = std::stod(parts[0]);
    e.rotation_deg = std::stod(parts[1]);
    e.dx = std::stod(parts[2]);
    e.dy = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw ValidationError("--event has a non-numeric field: '" + s + "'");
  }
  if (parts.size() == 5) e.transient = (parts[4] == "1" || parts[4] == "true");
  return e;
}

KSpace load_kspace_any(const fs::path& path) {
  KcpxData data = import_kcpx(path);
  if (data.domain == KcpxDomain::KSpace) return std::move(data).as_kspace();
  info("input is image-domain; transforming to k-space");
  return fft2c(std::move(data).as_image());
}

struct MaskCliOptions {
  std::string strategy = "gradient";
  double acceleration = 5.0;
  double acs_fraction = 0.10;
  double alpha = 2.0;
};

void add_mask_options(CLI::App* cmd, MaskCliOptions& opts) {
  cmd->add_option("--strategy", opts.strategy, "gradient | random | uniform")
      ->check(CLI::IsMember({"gradient", "random", "uniform"}));
  cmd->add_option("--accel", opts.acceleration, "acceleration factor R (> 1)");
  cmd->add_option("--acs", opts.acs_fraction, "central line fraction in (0, 1)");
  cmd->add_option("--gradient-alpha", opts.alpha, "gradient density exponent");
}

MaskSpec to_mask_spec(const MaskCliOptions& opts, int num_lines, std::uint64_t seed) {
  MaskSpec spec;
  spec.strategy = mask_strategy_from_string(opts.strategy);
  spec.acceleration = opts.acceleration;
  spec.acs_fraction = opts.acs_fraction;
  spec.gradient_alpha = opts.alpha;
  spec.num_lines = num_lines;
  spec.seed = seed;
  return spec;
}

struct CascadeCliOptions {
  std::string recon = "cascade";
  std::string k_stage = "hermitian";
  std::string i_stage = "tv";
  double tv_lambda = 0.05;
  int tv_steps = 10;
  int iterations = 20;
};

void add_recon_options(CLI::App* cmd, CascadeCliOptions& opts) {
  cmd->add_option("--recon", opts.recon, "zero_filled | cascade")
      ->check(CLI::IsMember({"zero_filled", "cascade"}));
  cmd->add_option("--k-stage", opts.k_stage, "zero_fill | hermitian")
      ->check(CLI::IsMember({"zero_fill", "hermitian"}));
  cmd->add_option("--i-stage", opts.i_stage, "none | tv | real_positivity")
      ->check(CLI::IsMember({"none", "tv", "real_positivity"}));
  cmd->add_option("--tv-lambda", opts.tv_lambda, "TV regularization weight");
  cmd->add_option("--tv-steps", opts.tv_steps, "TV gradient steps per iteration");
  cmd->add_option("--iterations", opts.iterations, "cascade iterations");
}

CascadeConfig to_cascade_config(const CascadeCliOptions& opts, bool diagnostics) {
  CascadeConfig cfg;
  cfg.k_stage = opts.k_stage == "hermitian" ? KStage::HermitianFill : KStage::ZeroFill;
  cfg.i_stage = opts.i_stage == "tv"
                    ? IStage::TvDenoise
                    : (opts.i_stage == "none" ? IStage::None : IStage::RealPositivity);
  cfg.tv_lambda = opts.tv_lambda;
  cfg.tv_steps = opts.tv_steps;
  cfg.iterations = opts.iterations;
  cfg.record_diagnostics = diagnostics;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"under-sampled MRI simulation, reconstruction, and scoring toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string config_path;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_flag("--quiet", g_quiet, "suppress progress messages");

  // phantom -----------------------------------------------------------------
  auto* cmd_phantom = app.add_subcommand(
      "phantom", "emit a synthetic phantom (kcpx + magnitude and mask PGMs)");
  int ph_height = 256, ph_width = 256;
  double ph_texture = 0.03, ph_jitter = 0.0;
  cmd_phantom->add_option("--height", ph_height, "image height");
  cmd_phantom->add_option("--width", ph_width, "image width");
  cmd_phantom->add_option("--texture", ph_texture, "texture amplitude in [0, 0.05]");
  cmd_phantom->add_option("--jitter", ph_jitter, "geometry jitter in [0, 0.5]");

  // mask --------------------------------------------------------------------
  auto* cmd_mask = app.add_subcommand("mask", "emit a sampling mask as 0/1 lines");
  int mask_lines = 256;
  std::string mask_out = "mask.txt";
  MaskCliOptions mask_opts;
  cmd_mask->add_option("--lines", mask_lines, "number of phase-encode lines");
  cmd_mask->add_option("--out", mask_out, "output file name");
  add_mask_options(cmd_mask, mask_opts);

  // degrade -----------------------------------------------------------------
  auto* cmd_degrade = app.add_subcommand(
      "degrade", "apply motion, noise, and under-sampling to a kcpx input");
  std::string deg_input;
  double deg_noise_sigma = -1.0, deg_noise_target = -1.0;
  std::vector<std::string> deg_events;
  std::string deg_order = "linear";
  bool deg_preview = false;
  bool deg_no_mask = false;
  MaskCliOptions deg_mask_opts;
  cmd_degrade->add_option("input", deg_input, "input .kcpx (image or k-space)")
      ->required();
  cmd_degrade->add_option("--noise-sigma", deg_noise_sigma,
                          "additive complex Gaussian noise sigma");
  cmd_degrade->add_option("--noise-target", deg_noise_target,
                          "target post-noise SNR as a fraction of the original");
  cmd_degrade->add_option("--event", deg_events,
                          "motion event onset:rotation:dx:dy[:transient]; repeatable");
  cmd_degrade->add_option("--order", deg_order, "linear | centric")
      ->check(CLI::IsMember({"linear", "centric"}));
  cmd_degrade->add_flag("--preview", deg_preview,
                        "emit per-state magnitude PGMs for motion debugging");
  cmd_degrade->add_flag("--no-mask", deg_no_mask, "skip under-sampling");
  add_mask_options(cmd_degrade, deg_mask_opts);

  // recon -------------------------------------------------------------------
  auto* cmd_recon =
      app.add_subcommand("recon", "reconstruct a degraded k-space (kcpx + PGM out)");
  std::string rec_input, rec_mask_path, rec_diag_path;
  CascadeCliOptions rec_opts;
  cmd_recon->add_option("input", rec_input, "degraded k-space .kcpx")->required();
  cmd_recon->add_option("--mask", rec_mask_path, "sampling mask file")->required();
  cmd_recon->add_option("--diagnostics", rec_diag_path,
                        "write per-iteration diagnostics CSV here");
  add_recon_options(cmd_recon, rec_opts);

  // eval --------------------------------------------------------------------
  auto* cmd_eval = app.add_subcommand(
      "eval", "score a reconstruction against a reference (CSV out)");
  std::string eval_recon, eval_ref, eval_out = "metrics.csv";
  cmd_eval->add_option("--recon", eval_recon, "reconstructed image .kcpx")->required();
  cmd_eval->add_option("--ref", eval_ref, "reference image .kcpx")->required();
  cmd_eval->add_option("--out", eval_out, "output CSV name");

  // run ---------------------------------------------------------------------
  auto* cmd_run =
      app.add_subcommand("run", "run a full experiment matrix from --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
               ? 0
               : (code == 0 ? 0 : 1);
  }

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);

    if (cmd_phantom->parsed()) {
      PhantomSpec spec = default_brain_spec(ph_height, ph_width);
      spec.texture_amplitude = ph_texture;
      spec.seed = seed;
      if (ph_jitter > 0.0) spec = perturbed(spec, seed, ph_jitter);
      const Phantom ph = generate_phantom(spec);
      export_kcpx(ph.image, out / "phantom.kcpx");
      export_pgm(normalize01(magnitude(ph.image)), out / "phantom.pgm");
      RealImage fg(ph_height, ph_width);
      for (std::size_t i = 0; i < fg.size(); ++i) {
        fg[i] = ph.masks.foreground_at(i) ? 1.0 : 0.0;
      }
      export_pgm(fg, out / "foreground.pgm");
      info("wrote phantom.kcpx, phantom.pgm, foreground.pgm to " + out.string());
    }

    if (cmd_mask->parsed()) {
      const SamplingMask mask = make_mask(to_mask_spec(mask_opts, mask_lines, seed));
      export_mask(mask, out / mask_out);
      info("wrote " + (out / mask_out).string() + " (" +
           std::to_string(mask.kept_count()) + "/" + std::to_string(mask_lines) +
           " lines kept)");
    }

    if (cmd_degrade->parsed()) {
      const KSpace k_full = load_kspace_any(deg_input);
      DegradationSpec spec;
      if (deg_noise_sigma >= 0.0 && deg_noise_target >= 0.0) {
        throw ValidationError("choose one of --noise-sigma and --noise-target");
      }
      if (deg_noise_sigma >= 0.0) {
        spec.noise = NoiseSpec{NoiseSpec::Mode::Sigma, deg_noise_sigma, 1.0, seed};
      } else if (deg_noise_target >= 0.0) {
        spec.noise =
            NoiseSpec{NoiseSpec::Mode::TargetSnrFactor, 0.0, deg_noise_target, seed};
      }
      if (!deg_events.empty()) {
        spec.motion.emplace();
        spec.motion->order = order_kind_from_string(deg_order);
        for (const auto& s : deg_events) spec.motion->events.push_back(parse_event(s));
      }
      if (!deg_no_mask) {
        spec.mask = to_mask_spec(deg_mask_opts, k_full.height(), seed);
      }

      if (deg_preview && spec.motion) {
        const std::vector<ComplexImage> states =
            motion_states(ifft2c(k_full), spec.motion->events);
        for (std::size_t s = 0; s < states.size(); ++s) {
          char name[32];
          std::snprintf(name, sizeof(name), "state_%02zu.pgm", s);
          export_pgm(normalize01(magnitude(states[s])), out / name);
        }
        info("wrote " + std::to_string(states.size()) + " motion-state previews");
      }

      const auto [k_deg, mask] = degrade(k_full, spec);
      export_kcpx(k_deg, out / "degraded.kcpx");
      export_mask(mask, out / "mask.txt");
      info("wrote degraded.kcpx and mask.txt to " + out.string());
    }

    if (cmd_recon->parsed()) {
      const KSpace k = import_kcpx(rec_input).as_kspace();
      const SamplingMask mask = import_mask(rec_mask_path);
      ComplexImage image(k.height(), k.width());
      if (rec_opts.recon == "zero_filled") {
        image = zero_filled(k, mask);
      } else {
        const CascadeConfig cfg = to_cascade_config(rec_opts, !rec_diag_path.empty());
        const ReconResult result = cascade_run(k, mask, cfg);
        image = result.image;
        if (!rec_diag_path.empty()) {
          std::ostringstream ss;
          write_diagnostics_csv(result, ss);
          write_file_atomic(out / rec_diag_path, ss.str());
        }
      }
      export_kcpx(image, out / "recon.kcpx");
      export_pgm(normalize01(magnitude(image)), out / "recon.pgm");
      info("wrote recon.kcpx and recon.pgm to " + out.string());
    }

    if (cmd_eval->parsed()) {
      const ComplexImage recon = import_kcpx(eval_recon).as_image();
      const ComplexImage ref = import_kcpx(eval_ref).as_image();
      const MaskPair masks = estimate_foreground(normalize01(magnitude(ref)));
      const MetricsReport report =
          evaluate_external({recon}, {ref}, {masks}, {fs::path(eval_recon).stem().string()});
      write_file_atomic(out / eval_out, report.to_csv());
      info("wrote " + (out / eval_out).string());
    }

    if (cmd_run->parsed()) {
      if (config_path.empty()) {
        throw ValidationError("run requires --config");
      }
      ExperimentConfig cfg = load_config(config_path);
      if (app.count("--out-dir") > 0) cfg.out_dir = out;
      if (app.count("--seed") > 0) cfg.master_seed = seed;
      const ExperimentSummary summary = run_experiment(cfg);
      std::size_t failed = 0;
      for (const auto& cell : summary.cells) {
        if (!cell.error.empty()) {
          ++failed;
          info("cell " + cell.label + " failed: " + cell.error);
        }
      }
      info("experiment finished: " + std::to_string(summary.cells.size()) +
           " cells, " + std::to_string(failed) + " failed; outputs in " +
           cfg.out_dir.string());
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

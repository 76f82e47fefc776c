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

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "usmri/pipeline.hpp"

namespace usmri {

namespace {

using nlohmann::json;

// Unknown keys are configuration errors: a typo must fail loudly instead of
// silently running with defaults.
void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ValidationError("config: unknown key '" + key + "' in " + context);
    }
  }
}

const json& require_key(const json& obj, const std::string& key,
                        const std::string& context) {
  if (!obj.contains(key)) {
    throw ValidationError("config: missing key '" + key + "' in " + context);
  }
  return obj.at(key);
}

NoiseSpec parse_noise(const json& obj) {
  check_keys(obj, {"mode", "sigma", "factor"}, "artifact noise");
  NoiseSpec spec;
  const std::string mode = require_key(obj, "mode", "artifact noise").get<std::string>();
  if (mode == "sigma") {
    spec.mode = NoiseSpec::Mode::Sigma;
    spec.sigma = require_key(obj, "sigma", "artifact noise").get<double>();
    if (!(spec.sigma >= 0.0)) {
      throw ValidationError("config: noise sigma must be non-negative");
    }
  } else if (mode == "target_snr") {
    spec.mode = NoiseSpec::Mode::TargetSnrFactor;
    spec.factor = require_key(obj, "factor", "artifact noise").get<double>();
    if (!(spec.factor > 0.0) || !(spec.factor <= 1.0)) {
      throw ValidationError("config: noise factor must be in (0, 1]");
    }
  } else {
    throw ValidationError("config: noise mode must be 'sigma' or 'target_snr'");
  }
  return spec;
}

MotionSpec parse_motion(const json& obj) {
  check_keys(obj, {"order", "events"}, "artifact motion");
  MotionSpec spec;
  if (obj.contains("order")) {
    spec.order = order_kind_from_string(obj.at("order").get<std::string>());
  }
  for (const json& ev : require_key(obj, "events", "artifact motion")) {
    check_keys(ev, {"onset", "rotation", "dx", "dy", "transient"}, "motion event");
    MotionEvent e;
    e.onset = require_key(ev, "onset", "motion event").get<double>();
    if (ev.contains("rotation")) e.rotation_deg = ev.at("rotation").get<double>();
    if (ev.contains("dx")) e.dx = ev.at("dx").get<double>();
    if (ev.contains("dy")) e.dy = ev.at("dy").get<double>();
    if (ev.contains("transient")) e.transient = ev.at("transient").get<bool>();
    spec.events.push_back(e);
  }
  return spec;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + std::string(e.what()));
  }

  check_keys(root,
             {"master_seed", "output_dir", "emit_images", "images", "masks",
              "artifacts", "recons"},
             "top level");

  ExperimentConfig cfg;
  cfg.master_seed = require_key(root, "master_seed", "top level").get<std::uint64_t>();
  if (root.contains("output_dir")) {
    cfg.out_dir = root.at("output_dir").get<std::string>();
  }
  if (root.contains("emit_images")) {
    cfg.emit_images = root.at("emit_images").get<bool>();
  }

  if (root.contains("images")) {
    const json& images = root.at("images");
    check_keys(images,
               {"source", "count", "height", "width", "jitter", "texture_amplitude",
                "baseline_sigma_rel", "dataset_dir"},
               "images");
    const std::string source =
        images.contains("source") ? images.at("source").get<std::string>() : "phantom";
    if (source == "phantom") {
      PhantomSource src;
      if (images.contains("count")) src.count = images.at("count").get<int>();
      if (images.contains("height")) src.height = images.at("height").get<int>();
      if (images.contains("width")) src.width = images.at("width").get<int>();
      if (images.contains("jitter")) src.jitter = images.at("jitter").get<double>();
      if (images.contains("texture_amplitude")) {
        src.texture_amplitude = images.at("texture_amplitude").get<double>();
      }
      if (images.contains("baseline_sigma_rel")) {
        src.baseline_sigma_rel = images.at("baseline_sigma_rel").get<double>();
      }
      if (src.count < 1) throw ValidationError("config: images.count must be >= 1");
      cfg.source = src;
    } else if (source == "dataset") {
      DatasetSource src;
      src.dir = require_key(images, "dataset_dir", "images").get<std::string>();
      cfg.source = src;
    } else {
      throw ValidationError("config: images.source must be 'phantom' or 'dataset'");
    }
  }

  if (root.contains("masks")) {
    const json& masks = root.at("masks");
    check_keys(masks, {"strategies", "accelerations", "per_image", "gradient_alpha"},
               "masks");
    if (masks.contains("strategies")) {
      cfg.strategies.clear();
      for (const json& s : masks.at("strategies")) {
        cfg.strategies.push_back(mask_strategy_from_string(s.get<std::string>()));
      }
    }
    if (masks.contains("accelerations")) {
      cfg.accelerations.clear();
      for (const json& a : masks.at("accelerations")) {
        check_keys(a, {"r", "acs_fraction"}, "masks.accelerations");
        AccelerationSpec spec;
        spec.acceleration = require_key(a, "r", "masks.accelerations").get<double>();
        spec.acs_fraction =
            require_key(a, "acs_fraction", "masks.accelerations").get<double>();
        cfg.accelerations.push_back(spec);
      }
    }
    if (masks.contains("per_image")) {
      cfg.per_image_masks = masks.at("per_image").get<bool>();
    }
    if (masks.contains("gradient_alpha")) {
      cfg.gradient_alpha = masks.at("gradient_alpha").get<double>();
    }
  }

  if (root.contains("artifacts")) {
    cfg.artifacts.clear();
    for (const json& a : root.at("artifacts")) {
      check_keys(a, {"name", "noise", "motion"}, "artifacts");
      ArtifactSpec spec;
      spec.name = require_key(a, "name", "artifacts").get<std::string>();
      if (a.contains("noise")) spec.noise = parse_noise(a.at("noise"));
      if (a.contains("motion")) spec.motion = parse_motion(a.at("motion"));
      cfg.artifacts.push_back(std::move(spec));
    }
  }

  if (root.contains("recons")) {
    cfg.recons.clear();
    for (const json& r : root.at("recons")) {
      check_keys(r,
                 {"name", "kind", "k_stage", "i_stage", "tv_lambda", "tv_steps",
                  "iterations", "record_diagnostics"},
                 "recons");
      ReconSpec spec;
      spec.name = require_key(r, "name", "recons").get<std::string>();
      const std::string kind = require_key(r, "kind", "recons").get<std::string>();
      if (kind == "zero_filled") {
        spec.is_cascade = false;
      } else if (kind == "cascade") {
        spec.is_cascade = true;
        if (r.contains("k_stage")) {
          const std::string k = r.at("k_stage").get<std::string>();
          if (k == "zero_fill") {
            spec.cascade.k_stage = KStage::ZeroFill;
          } else if (k == "hermitian") {
            spec.cascade.k_stage = KStage::HermitianFill;
          } else {
            throw ValidationError("config: k_stage must be 'zero_fill' or 'hermitian'");
          }
        }
        if (r.contains("i_stage")) {
          const std::string i = r.at("i_stage").get<std::string>();
          if (i == "none") {
            spec.cascade.i_stage = IStage::None;
          } else if (i == "tv") {
            spec.cascade.i_stage = IStage::TvDenoise;
          } else if (i == "real_positivity") {
            spec.cascade.i_stage = IStage::RealPositivity;
          } else {
            throw ValidationError(
                "config: i_stage must be 'none', 'tv', or 'real_positivity'");
          }
        }
        if (r.contains("tv_lambda")) spec.cascade.tv_lambda = r.at("tv_lambda").get<double>();
        if (r.contains("tv_steps")) spec.cascade.tv_steps = r.at("tv_steps").get<int>();
        if (r.contains("iterations")) {
          spec.cascade.iterations = r.at("iterations").get<int>();
        }
        if (r.contains("record_diagnostics")) {
          spec.cascade.record_diagnostics = r.at("record_diagnostics").get<bool>();
        }
      } else {
        throw ValidationError("config: recon kind must be 'zero_filled' or 'cascade'");
      }
      cfg.recons.push_back(std::move(spec));
    }
  }
  if (cfg.recons.empty()) cfg.recons = default_recons();
  return cfg;
}

}  // namespace usmri

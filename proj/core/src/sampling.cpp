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

#include "usmri/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "usmri/rng.hpp"

namespace usmri {

std::string to_string(MaskStrategy s) {
  switch (s) {
    case MaskStrategy::Gradient: return "gradient";
    case MaskStrategy::Random: return "random";
    case MaskStrategy::Uniform: return "uniform";
  }
  return "unknown";
}

MaskStrategy mask_strategy_from_string(const std::string& s) {
  if (s == "gradient") return MaskStrategy::Gradient;
  if (s == "random") return MaskStrategy::Random;
  if (s == "uniform") return MaskStrategy::Uniform;
  throw ValidationError("unknown mask strategy: " + s);
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

void validate_spec(const MaskSpec& spec) {
  if (spec.num_lines < 1) throw ValidationError("MaskSpec: num_lines must be positive");
  if (!(spec.acceleration > 1.0)) {
    throw ValidationError("MaskSpec: acceleration must exceed 1");
  }
  if (!(spec.acs_fraction > 0.0) || !(spec.acs_fraction < 1.0)) {
    throw ValidationError("MaskSpec: acs_fraction must be in (0, 1)");
  }
  if (!(spec.gradient_alpha >= 0.0)) {
    throw ValidationError("MaskSpec: gradient_alpha must be non-negative");
  }
}

}  // namespace

LineBudget line_budget(int num_lines, double acceleration, double acs_fraction) {
  if (num_lines < 1) throw ValidationError("line_budget: num_lines must be positive");
  if (!(acceleration > 1.0)) {
    throw ValidationError("line_budget: acceleration must exceed 1");
  }
  if (!(acs_fraction > 0.0) || !(acs_fraction < 1.0)) {
    throw ValidationError("line_budget: acs_fraction must be in (0, 1)");
  }
  LineBudget b;
  b.budget = round_half_up(num_lines / acceleration);
  b.acs_count = round_half_up(acs_fraction * num_lines);
  if (b.acs_count > b.budget) {
    throw ValidationError("line_budget: ACS block (" + std::to_string(b.acs_count) +
                          " lines) exceeds budget (" + std::to_string(b.budget) + ")");
  }
  return b;
}

int acs_start(int num_lines, int acs_count) {
  return num_lines / 2 - acs_count / 2;
}

SamplingMask full_mask(int num_lines) {
  if (num_lines < 1) throw ValidationError("full_mask: num_lines must be positive");
  SamplingMask m;
  m.keep.assign(static_cast<std::size_t>(num_lines), 1);
  return m;
}

SamplingMask make_mask(const MaskSpec& spec) {
  validate_spec(spec);
  const LineBudget b = line_budget(spec.num_lines, spec.acceleration, spec.acs_fraction);
  const int h = spec.num_lines;

  SamplingMask mask;
  mask.keep.assign(static_cast<std::size_t>(h), 0);
  mask.provenance = spec;

  const int start = acs_start(h, b.acs_count);
  for (int i = 0; i < b.acs_count; ++i) mask.keep[start + i] = 1;

  const int extra = b.budget - b.acs_count;
  if (extra == 0) return mask;  // ACS-only mask

  std::vector<int> candidates;
  candidates.reserve(h - b.acs_count);
  for (int i = 0; i < h; ++i) {
    if (!mask.keep[i]) candidates.push_back(i);
  }

  switch (spec.strategy) {
    case MaskStrategy::Uniform: {
      // floor(j * (H - acs) / (budget - acs)) indexes the non-ACS positions
      // in increasing order; consecutive picks differ by >= 1, so exactly
      // `extra` distinct lines are selected.
      const std::size_t n = candidates.size();
      for (int j = 0; j < extra; ++j) {
        const std::size_t idx =
            static_cast<std::size_t>(j) * n / static_cast<std::size_t>(extra);
        mask.keep[candidates[idx]] = 1;
      }
      break;
    }
    case MaskStrategy::Random: {
      rng::Generator gen(spec.seed);
      // Partial Fisher-Yates: the first `extra` entries become the sample.
      for (int j = 0; j < extra; ++j) {
        const std::size_t pick =
            j + gen.uniform_index(candidates.size() - static_cast<std::size_t>(j));
        std::swap(candidates[j], candidates[pick]);
        mask.keep[candidates[j]] = 1;
      }
      break;
    }
    case MaskStrategy::Gradient: {
      rng::Generator gen(spec.seed);
      const double center = h / 2;
      const double half = h / 2.0;
      std::vector<double> weight(candidates.size());
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double d = std::abs(candidates[i] - center) / half;
        weight[i] = std::pow(std::max(0.0, 1.0 - d), spec.gradient_alpha);
      }
      std::vector<std::uint8_t> taken(candidates.size(), 0);
      for (int j = 0; j < extra; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          if (!taken[i]) total += weight[i];
        }
        std::size_t chosen = candidates.size();
        if (total > 0.0) {
          const double u = gen.uniform01() * total;
          double cum = 0.0;
          for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            cum += weight[i];
            if (u < cum) {
              chosen = i;
              break;
            }
          }
          if (chosen == candidates.size()) {
            // u landed on the rounding tail; take the last free candidate.
            for (std::size_t i = candidates.size(); i-- > 0;) {
              if (!taken[i]) {
                chosen = i;
                break;
              }
            }
          }
        } else {
          // All remaining weights are zero (edge lines at d == 1); fall back
          // to a seeded uniform pick so the budget is still met exactly.
          std::vector<std::size_t> free;
          for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!taken[i]) free.push_back(i);
          }
          chosen = free[gen.uniform_index(free.size())];
        }
        taken[chosen] = 1;
        mask.keep[candidates[chosen]] = 1;
      }
      break;
    }
  }
  return mask;
}

KSpace apply_mask(const KSpace& k, const SamplingMask& mask) {
  if (mask.num_lines() != k.height()) {
    throw ValidationError("apply_mask: mask length " + std::to_string(mask.num_lines()) +
                          " does not match k-space height " + std::to_string(k.height()));
  }
  KSpace out = k;
  for (int r = 0; r < k.height(); ++r) {
    if (!mask.kept(r)) {
      for (int c = 0; c < k.width(); ++c) out.at(r, c) = cplx(0.0, 0.0);
    }
  }
  return out;
}

KSpace data_consistency(const KSpace& predicted, const KSpace& acquired,
                        const SamplingMask& mask) {
  if (!predicted.same_shape(acquired)) {
    throw ValidationError("data_consistency: predicted/acquired shape mismatch");
  }
  if (mask.num_lines() != predicted.height()) {
    throw ValidationError("data_consistency: mask length does not match k-space height");
  }
  KSpace out = predicted;
  for (int r = 0; r < out.height(); ++r) {
    if (mask.kept(r)) {
      for (int c = 0; c < out.width(); ++c) out.at(r, c) = acquired.at(r, c);
    }
  }
  return out;
}

}  // namespace usmri

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
#include <optional>
#include <string>
#include <vector>

#include "usmri/types.hpp"

namespace usmri {

enum class MaskStrategy { Gradient, Random, Uniform };

std::string to_string(MaskStrategy s);
MaskStrategy mask_strategy_from_string(const std::string& s);

/// Phase-encode lines are rows; the ACS block is a contiguous run of central
/// lines around row H/2 that is always acquired.
struct MaskSpec {
  MaskStrategy strategy = MaskStrategy::Gradient;
  double acceleration = 5.0;   // R > 1
  double acs_fraction = 0.10;  // in (0, 1)
  int num_lines = 256;
  std::uint64_t seed = 0;
  // Gradient keep-density exponent: weight (1 - d)^alpha with d the
  // normalized distance from the center line.
  double gradient_alpha = 2.0;
};

struct LineBudget {
  int budget = 0;     // total lines acquired, ACS included
  int acs_count = 0;  // central lines always acquired
};

/// budget = round-half-up(H / R), acs = round-half-up(acs_fraction * H).
/// Throws when the ACS block alone would exceed the budget.
LineBudget line_budget(int num_lines, double acceleration, double acs_fraction);

/// First row of the ACS block: the acs_count lines centered on row H/2.
int acs_start(int num_lines, int acs_count);

struct SamplingMask {
  std::vector<std::uint8_t> keep;  // keep[i] != 0 <=> line i acquired
  std::optional<MaskSpec> provenance;

  int num_lines() const { return static_cast<int>(keep.size()); }
  int kept_count() const {
    int n = 0;
    for (auto v : keep) n += (v != 0);
    return n;
  }
  bool kept(int line) const { return keep[static_cast<std::size_t>(line)] != 0; }
};

/// All-true mask (full sampling) of the given length.
SamplingMask full_mask(int num_lines);

/// Builds a mask with exactly line_budget(...).budget kept lines. The ACS
/// block is always kept; the remainder is chosen by strategy. Gradient and
/// Random draw from the seeded generator; Uniform is deterministic spacing
/// and ignores the seed.
SamplingMask make_mask(const MaskSpec& spec);

/// Zeroes the rows with keep == false; kept rows are copied bit-exactly.
KSpace apply_mask(const KSpace& k, const SamplingMask& mask);

/// Row i of the output comes from `acquired` where keep[i], from `predicted`
/// otherwise. Kept rows are bit-exact copies of `acquired`.
KSpace data_consistency(const KSpace& predicted, const KSpace& acquired,
                        const SamplingMask& mask);

}  // namespace usmri

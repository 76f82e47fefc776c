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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"
#include "usmri/sampling.hpp"

using namespace usmri;

TEST_CASE("line budgets use round-half-up arithmetic") {
  const LineBudget a = line_budget(256, 2.0, 0.25);
  CHECK(a.budget == 128);
  CHECK(a.acs_count == 64);

  const LineBudget b = line_budget(256, 5.0, 0.10);
  CHECK(b.budget == 51);  // 51.2 rounds to 51
  CHECK(b.acs_count == 26);  // 25.6 rounds to 26

  const LineBudget c = line_budget(256, 10.0, 0.04);
  CHECK(c.budget == 26);   // 25.6 rounds to 26
  CHECK(c.acs_count == 10);  // 10.24 rounds to 10
}

TEST_CASE("an ACS block larger than the budget is rejected") {
  CHECK_THROWS_AS(line_budget(128, 10.0, 0.25), ValidationError);
  CHECK_THROWS_AS(line_budget(256, 1.0, 0.10), ValidationError);
  CHECK_THROWS_AS(line_budget(256, 2.0, 0.0), ValidationError);
  CHECK_THROWS_AS(line_budget(256, 2.0, 1.0), ValidationError);
}

TEST_CASE("uniform mask: H=16, R=2, acs=0.25 keeps 8 lines, central 4 contiguous") {
  MaskSpec spec;
  spec.strategy = MaskStrategy::Uniform;
  spec.num_lines = 16;
  spec.acceleration = 2.0;
  spec.acs_fraction = 0.25;
  const SamplingMask mask = make_mask(spec);
  CHECK(mask.kept_count() == 8);
  for (int i = 6; i <= 9; ++i) CHECK(mask.kept(i));
  // By the stated index formula: the non-ACS positions in order are
  // {0,1,2,3,4,5,10,11,12,13,14,15}; picks at floor(j * 12 / 4) = 0, 3, 6, 9
  // select lines 0, 3, 10, 13.
  const std::set<int> expected = {0, 3, 6, 7, 8, 9, 10, 13};
  for (int i = 0; i < 16; ++i) CHECK(mask.kept(i) == (expected.count(i) > 0));
}

TEST_CASE("gradient masks hit the exact budget with a common ACS block") {
  MaskSpec spec;
  spec.strategy = MaskStrategy::Gradient;
  spec.num_lines = 256;
  spec.acceleration = 5.0;
  spec.acs_fraction = 0.10;
  spec.seed = 1;
  const SamplingMask a = make_mask(spec);
  spec.seed = 2;
  const SamplingMask b = make_mask(spec);
  CHECK(a.kept_count() == 51);
  CHECK(b.kept_count() == 51);
  const int start = acs_start(256, 26);
  for (int i = start; i < start + 26; ++i) {
    CHECK(a.kept(i));
    CHECK(b.kept(i));
  }
  CHECK(a.keep != b.keep);  // different seeds explore different lines
}

TEST_CASE("gradient density decays with distance from the center") {
  MaskSpec spec;
  spec.strategy = MaskStrategy::Gradient;
  spec.num_lines = 256;
  spec.acceleration = 5.0;
  spec.acs_fraction = 0.10;
  // d = |i - 128| / 128: lines at 0.2 and 0.8 normalized distance.
  const int near = 128 + 26;
  const int far = 128 + 102;
  int keep_near = 0, keep_far = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    spec.seed = seed;
    const SamplingMask m = make_mask(spec);
    keep_near += m.kept(near);
    keep_far += m.kept(far);
  }
  CHECK(keep_near > keep_far);
}

TEST_CASE("all strategies are deterministic in the seed") {
  for (const MaskStrategy strategy :
       {MaskStrategy::Gradient, MaskStrategy::Random, MaskStrategy::Uniform}) {
    MaskSpec spec;
    spec.strategy = strategy;
    spec.num_lines = 128;
    spec.acceleration = 4.0;
    spec.acs_fraction = 0.10;
    spec.seed = 9;
    CHECK(make_mask(spec).keep == make_mask(spec).keep);
  }
}

TEST_CASE("budget == acs yields the ACS-only mask") {
  MaskSpec spec;
  spec.strategy = MaskStrategy::Gradient;
  spec.num_lines = 256;
  spec.acceleration = 10.0;
  spec.acs_fraction = 0.10;  // acs 26 == budget 26
  const SamplingMask mask = make_mask(spec);
  CHECK(mask.kept_count() == 26);
  const int start = acs_start(256, 26);
  for (int i = 0; i < 256; ++i) {
    CHECK(mask.kept(i) == (i >= start && i < start + 26));
  }
}

TEST_CASE("apply_mask zeroes dropped rows and copies kept rows bit-exactly") {
  const KSpace k = test::random_kspace(8, 8, 4);

  SUBCASE("all-true mask is the identity") {
    const KSpace out = apply_mask(k, full_mask(8));
    CHECK(out == k);
  }

  SUBCASE("every 8-line mask pattern") {
    for (int bits = 0; bits < 256; ++bits) {
      SamplingMask m;
      for (int i = 0; i < 8; ++i) m.keep.push_back((bits >> i) & 1);
      const KSpace out = apply_mask(k, m);
      double kept_energy = 0.0, expected = 0.0;
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
          if (m.kept(r)) {
            CHECK(out.at(r, c) == k.at(r, c));
            expected += std::norm(k.at(r, c));
          } else {
            CHECK(out.at(r, c) == cplx(0.0, 0.0));
          }
          kept_energy += std::norm(out.at(r, c));
        }
      }
      CHECK(kept_energy == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(apply_mask(k, full_mask(9)), ValidationError);
  }
}

TEST_CASE("data_consistency picks rows from the right source") {
  const KSpace predicted = test::random_kspace(8, 8, 10);
  const KSpace acquired = test::random_kspace(8, 8, 11);

  SUBCASE("predicted == acquired is a fixed point") {
    SamplingMask m;
    for (int i = 0; i < 8; ++i) m.keep.push_back(i % 2);
    const KSpace out = data_consistency(acquired, acquired, m);
    CHECK(out == acquired);
  }

  SUBCASE("boundary masks") {
    SamplingMask none;
    none.keep.assign(8, 0);
    CHECK(data_consistency(predicted, acquired, none) == predicted);
    CHECK(data_consistency(predicted, acquired, full_mask(8)) == acquired);
  }

  SUBCASE("random mask, per-row equality checked exhaustively") {
    SamplingMask m;
    for (int i = 0; i < 8; ++i) m.keep.push_back((i * 5 + 1) % 3 == 0);
    const KSpace out = data_consistency(predicted, acquired, m);
    for (int r = 0; r < 8; ++r) {
      const KSpace& src = m.kept(r) ? acquired : predicted;
      for (int c = 0; c < 8; ++c) CHECK(out.at(r, c) == src.at(r, c));
    }
  }

  SUBCASE("projection: applying twice equals applying once") {
    SamplingMask m;
    for (int i = 0; i < 8; ++i) m.keep.push_back(i < 4);
    const KSpace once = data_consistency(predicted, acquired, m);
    const KSpace twice = data_consistency(once, acquired, m);
    CHECK(once == twice);
  }

  SUBCASE("masked acquisition restores kept rows of the source") {
    SamplingMask m;
    for (int i = 0; i < 8; ++i) m.keep.push_back(i % 3 != 1);
    const KSpace masked = apply_mask(acquired, m);
    const KSpace out = data_consistency(predicted, masked, m);
    for (int r = 0; r < 8; ++r) {
      if (!m.kept(r)) continue;
      for (int c = 0; c < 8; ++c) CHECK(out.at(r, c) == acquired.at(r, c));
    }
  }
}

TEST_CASE("exact budget and ACS containment across strategies and seeds") {
  for (const MaskStrategy strategy :
       {MaskStrategy::Gradient, MaskStrategy::Random, MaskStrategy::Uniform}) {
    for (const auto [r, acs] : {std::pair{2.0, 0.25}, std::pair{5.0, 0.10}}) {
      MaskSpec spec;
      spec.strategy = strategy;
      spec.num_lines = 128;
      spec.acceleration = r;
      spec.acs_fraction = acs;
      const LineBudget b = line_budget(128, r, acs);
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        spec.seed = seed;
        const SamplingMask m = make_mask(spec);
        CHECK(m.kept_count() == b.budget);
        const int start = acs_start(128, b.acs_count);
        for (int i = start; i < start + b.acs_count; ++i) CHECK(m.kept(i));
      }
    }
  }
}

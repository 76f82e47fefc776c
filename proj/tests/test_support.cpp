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

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "usmri/rng.hpp"

namespace usmri::test {

namespace {

// exp(-2*pi*i * f) without going through std::polar, to keep the oracle
// self-contained.
cplx unit_phase(double f) {
  const double t = -2.0 * std::numbers::pi * f;
  return cplx(std::cos(t), std::sin(t));
}

}  // namespace

KSpace dft2c_oracle(const ComplexImage& x) {
  const int h = x.height(), w = x.width();
  const int ch = h / 2, cw = w / 2;
  const double scale = 1.0 / std::sqrt(static_cast<double>(h) * w);
  KSpace out(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      cplx acc(0.0, 0.0);
      for (int m = 0; m < h; ++m) {
        for (int n = 0; n < w; ++n) {
          const double f = static_cast<double>((u - ch) * (m - ch)) / h +
                           static_cast<double>((v - cw) * (n - cw)) / w;
          acc += x.at(m, n) * unit_phase(f);
        }
      }
      out.at(u, v) = acc * scale;
    }
  }
  return out;
}

ComplexImage idft2c_oracle(const KSpace& k) {
  const int h = k.height(), w = k.width();
  const int ch = h / 2, cw = w / 2;
  const double scale = 1.0 / std::sqrt(static_cast<double>(h) * w);
  ComplexImage out(h, w);
  for (int m = 0; m < h; ++m) {
    for (int n = 0; n < w; ++n) {
      cplx acc(0.0, 0.0);
      for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
          const double f = static_cast<double>((u - ch) * (m - ch)) / h +
                           static_cast<double>((v - cw) * (n - cw)) / w;
          acc += k.at(u, v) * std::conj(unit_phase(f));
        }
      }
      out.at(m, n) = acc * scale;
    }
  }
  return out;
}

namespace {

int reflect_idx(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

}  // namespace

RealImage ssim_map_oracle(const RealImage& a, const RealImage& b) {
  constexpr int kSize = 11;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  const int h = a.height(), w = a.width();

  double win[kSize][kSize];
  double sum = 0.0;
  for (int i = 0; i < kSize; ++i) {
    for (int j = 0; j < kSize; ++j) {
      const double di = i - 5.0, dj = j - 5.0;
      win[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * kSigma * kSigma));
      sum += win[i][j];
    }
  }
  for (auto& row : win) {
    for (auto& v : row) v /= sum;
  }

  RealImage out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
      for (int i = 0; i < kSize; ++i) {
        for (int j = 0; j < kSize; ++j) {
          const int rr = reflect_idx(r + i - 5, h);
          const int cc = reflect_idx(c + j - 5, w);
          const double va = a.at(rr, cc), vb = b.at(rr, cc);
          mx += win[i][j] * va;
          my += win[i][j] * vb;
          xx += win[i][j] * va * va;
          yy += win[i][j] * vb * vb;
          xy += win[i][j] * va * vb;
        }
      }
      const double var_a = xx - mx * mx;
      const double var_b = yy - my * my;
      const double cov = xy - mx * my;
      out.at(r, c) = ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                     ((mx * mx + my * my + kC1) * (var_a + var_b + kC2));
    }
  }
  return out;
}

double mse_oracle(const RealImage& a, const RealImage& b) {
  double acc = 0.0;
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      const double d = a.at(r, c) - b.at(r, c);
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(a.height()) * a.width());
}

double dice(const MaskPair& a, const MaskPair& b) {
  std::size_t inter = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.foreground_at(i) && b.foreground_at(i)) ++inter;
  }
  return 2.0 * static_cast<double>(inter) /
         static_cast<double>(a.foreground_count() + b.foreground_count());
}

double ks_rayleigh_pvalue(std::vector<double> samples, double sigma) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    const double cdf = 1.0 - std::exp(-x * x / (2.0 * sigma * sigma));
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    p += (j % 2 == 1) ? term : -term;
  }
  return std::clamp(p, 0.0, 1.0);
}

ComplexImage random_image(int h, int w, std::uint64_t seed) {
  rng::Generator gen(seed);
  ComplexImage out(h, w);
  for (auto& z : out.data()) {
    z = cplx(2.0 * gen.uniform01() - 1.0, 2.0 * gen.uniform01() - 1.0);
  }
  return out;
}

KSpace random_kspace(int h, int w, std::uint64_t seed) {
  rng::Generator gen(seed);
  KSpace out(h, w);
  for (auto& z : out.data()) {
    z = cplx(2.0 * gen.uniform01() - 1.0, 2.0 * gen.uniform01() - 1.0);
  }
  return out;
}

RealImage random_real01(int h, int w, std::uint64_t seed) {
  rng::Generator gen(seed);
  RealImage out(h, w);
  for (auto& v : out.data()) v = gen.uniform01();
  return out;
}

namespace {

template <typename GridT>
double max_abs_diff_impl(const GridT& a, const GridT& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace

double max_abs_diff(const ComplexImage& a, const ComplexImage& b) {
  return max_abs_diff_impl(a, b);
}
double max_abs_diff(const KSpace& a, const KSpace& b) { return max_abs_diff_impl(a, b); }
double max_abs_diff(const RealImage& a, const RealImage& b) {
  return max_abs_diff_impl(a, b);
}

double max_rel_diff(const ComplexImage& a, const ComplexImage& b) {
  double peak = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) peak = std::max(peak, std::abs(b[i]));
  if (peak == 0.0) return max_abs_diff(a, b);
  return max_abs_diff(a, b) / peak;
}

}  // namespace usmri::test

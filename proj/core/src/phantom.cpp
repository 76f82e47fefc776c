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

#include "usmri/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "usmri/fft.hpp"
#include "usmri/rng.hpp"

namespace usmri {

namespace {

constexpr std::uint64_t kTextureStream = 0x7465787475726531ULL;

struct EllipseGeom {
  double cx, cy, cos_t, sin_t, inv_a2, inv_b2;
};

EllipseGeom precompute(const Ellipse& e) {
  const double t = e.rotation_deg * std::numbers::pi / 180.0;
  return {e.cx, e.cy, std::cos(t), std::sin(t), 1.0 / (e.a * e.a), 1.0 / (e.b * e.b)};
}

bool inside(const EllipseGeom& g, double x, double y) {
  const double dx = x - g.cx;
  const double dy = y - g.cy;
  const double u = g.cos_t * dx + g.sin_t * dy;
  const double v = -g.sin_t * dx + g.cos_t * dy;
  return u * u * g.inv_a2 + v * v * g.inv_b2 <= 1.0;
}

void validate_spec(const PhantomSpec& spec) {
  if (spec.ellipses.empty()) {
    throw ValidationError("PhantomSpec: at least one ellipse required");
  }
  for (const auto& e : spec.ellipses) {
    if (std::abs(e.cx) > 1.0 || std::abs(e.cy) > 1.0) {
      throw ValidationError("PhantomSpec: ellipse center outside [-1, 1]");
    }
    if (!(e.a > 0.0) || !(e.b > 0.0)) {
      throw ValidationError("PhantomSpec: non-positive semi-axis");
    }
  }
  if (spec.texture_amplitude < 0.0 || spec.texture_amplitude > 0.05) {
    throw ValidationError("PhantomSpec: texture amplitude must be in [0, 0.05]");
  }
}

// Smooth seeded field in [-1, 1]: random complex coefficients on a small
// central k-space block, transformed back and rescaled.
RealImage band_limited_texture(int h, int w, std::uint64_t seed) {
  rng::Generator gen(rng::mix(seed, kTextureStream));
  KSpace k(h, w);
  const int ch = h / 2, cw = w / 2;
  const int band = std::max(2, std::min(h, w) / 32);
  for (int dr = -band; dr <= band; ++dr) {
    for (int dc = -band; dc <= band; ++dc) {
      k.at(ch + dr, cw + dc) = cplx(gen.normal(), gen.normal());
    }
  }
  const ComplexImage field = ifft2c(k);
  RealImage tex(h, w);
  double peak = 0.0;
  for (std::size_t i = 0; i < tex.size(); ++i) {
    tex[i] = field[i].real();
    peak = std::max(peak, std::abs(tex[i]));
  }
  if (peak > 0.0) {
    for (auto& v : tex.data()) v /= peak;
  }
  return tex;
}

}  // namespace

PhantomSpec default_brain_spec(int height, int width) {
  PhantomSpec spec;
  spec.height = height;
  spec.width = width;
  spec.ellipses = {
      {0.0, 0.0, 0.72, 0.85, 0.0, 0.80},     // skull / subject boundary
      {-0.22, -0.05, 0.24, 0.40, 15.0, -0.25},  // left ventricle
      {0.22, -0.05, 0.24, 0.40, -15.0, -0.25},  // right ventricle
      {0.15, 0.38, 0.12, 0.09, 0.0, 0.40},   // lesion
  };
  return spec;
}

PhantomSpec perturbed(const PhantomSpec& base, std::uint64_t seed, double relative) {
  if (relative < 0.0 || relative > 0.5) {
    throw ValidationError("perturbed: relative jitter must be in [0, 0.5]");
  }
  rng::Generator gen(rng::mix(seed, 0x6a69747465720aULL));
  PhantomSpec out = base;
  out.seed = seed;
  for (auto& e : out.ellipses) {
    auto u = [&] { return 2.0 * gen.uniform01() - 1.0; };
    e.cx = std::clamp(e.cx + relative * 0.2 * u(), -1.0, 1.0);
    e.cy = std::clamp(e.cy + relative * 0.2 * u(), -1.0, 1.0);
    e.a = std::max(0.02, e.a * (1.0 + relative * u()));
    e.b = std::max(0.02, e.b * (1.0 + relative * u()));
    e.rotation_deg += relative * 20.0 * u();
    e.intensity *= 1.0 + relative * u();
  }
  return out;
}

Phantom generate_phantom(const PhantomSpec& spec) {
  validate_spec(spec);
  const int h = spec.height, w = spec.width;

  std::vector<EllipseGeom> geoms;
  geoms.reserve(spec.ellipses.size());
  for (const auto& e : spec.ellipses) geoms.push_back(precompute(e));

  RealImage intensity(h, w);
  std::vector<std::uint8_t> fg(static_cast<std::size_t>(h) * w, 0);
  double peak = 0.0;
  for (int r = 0; r < h; ++r) {
    const double y = (2.0 * r + 1.0 - h) / h;
    for (int c = 0; c < w; ++c) {
      const double x = (2.0 * c + 1.0 - w) / w;
      double v = 0.0;
      for (std::size_t i = 0; i < geoms.size(); ++i) {
        if (inside(geoms[i], x, y)) {
          v += spec.ellipses[i].intensity;
          if (i == 0) fg[static_cast<std::size_t>(r) * w + c] = 1;
        }
      }
      if (v < 0.0) {
        throw ValidationError("generate_phantom: negative summed intensity");
      }
      intensity.at(r, c) = v;
      peak = std::max(peak, v);
    }
  }

  if (spec.texture_amplitude > 0.0 && peak > 0.0) {
    const RealImage tex = band_limited_texture(h, w, spec.seed);
    const double amp = spec.texture_amplitude * peak;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
      if (fg[i]) intensity[i] = std::max(0.0, intensity[i] + amp * tex[i]);
    }
    peak = *std::max_element(intensity.data().begin(), intensity.data().end());
  }

  ComplexImage image(h, w);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < image.size(); ++i) {
      image[i] = cplx(intensity[i] / peak, 0.0);
    }
  }
  return Phantom{std::move(image), MaskPair(h, w, std::move(fg))};
}

namespace {

// Between-class-variance-maximizing threshold on a 256-bin histogram.
// Returns the bin index k; foreground are bins > k. Ties keep the lowest k.
int otsu_threshold_bin(const RealImage& img) {
  constexpr int kBins = 256;
  std::vector<std::int64_t> hist(kBins, 0);
  for (const double v : img.data()) {
    int b = static_cast<int>(v * kBins);
    b = std::clamp(b, 0, kBins - 1);
    ++hist[b];
  }
  const double total = static_cast<double>(img.size());
  double sum_all = 0.0;
  for (int b = 0; b < kBins; ++b) sum_all += b * static_cast<double>(hist[b]);

  double best = -1.0;
  int best_k = 0;
  double w0 = 0.0, sum0 = 0.0;
  for (int k = 0; k < kBins - 1; ++k) {
    w0 += static_cast<double>(hist[k]);
    sum0 += k * static_cast<double>(hist[k]);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_k = k;
    }
  }
  if (best < 0.0) {
    throw ValidationError("estimate_foreground: no subject detected");
  }
  return best_k;
}

std::vector<std::uint8_t> dilate3x3(const std::vector<std::uint8_t>& in, int h, int w) {
  std::vector<std::uint8_t> out(in.size(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::uint8_t v = 0;
      for (int dr = -1; dr <= 1 && !v; ++dr) {
        for (int dc = -1; dc <= 1 && !v; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < h && cc >= 0 && cc < w) {
            v = in[static_cast<std::size_t>(rr) * w + cc];
          }
        }
      }
      out[static_cast<std::size_t>(r) * w + c] = v;
    }
  }
  return out;
}

// Erosion treats out-of-image neighbors as foreground, so a subject touching
// the border survives; paired with zero-padded dilation this makes closing
// fill pinholes without shaving the frame.
std::vector<std::uint8_t> erode3x3(const std::vector<std::uint8_t>& in, int h, int w) {
  std::vector<std::uint8_t> out(in.size(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::uint8_t v = 1;
      for (int dr = -1; dr <= 1 && v; ++dr) {
        for (int dc = -1; dc <= 1 && v; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < h && cc >= 0 && cc < w) {
            v = in[static_cast<std::size_t>(rr) * w + cc];
          }
        }
      }
      out[static_cast<std::size_t>(r) * w + c] = v;
    }
  }
  return out;
}

std::vector<std::uint8_t> largest_component_8(const std::vector<std::uint8_t>& in,
                                              int h, int w) {
  std::vector<std::int32_t> label(in.size(), -1);
  std::int32_t next = 0;
  std::vector<std::size_t> count;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (!in[idx] || label[idx] >= 0) continue;
      const std::int32_t id = next++;
      count.push_back(0);
      std::queue<std::pair<int, int>> q;
      q.emplace(r, c);
      label[idx] = id;
      while (!q.empty()) {
        const auto [cr, cc] = q.front();
        q.pop();
        ++count[id];
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = cr + dr, c2 = cc + dc;
            if (rr < 0 || rr >= h || c2 < 0 || c2 >= w) continue;
            const std::size_t j = static_cast<std::size_t>(rr) * w + c2;
            if (in[j] && label[j] < 0) {
              label[j] = id;
              q.emplace(rr, c2);
            }
          }
        }
      }
    }
  }
  if (next == 0) return std::vector<std::uint8_t>(in.size(), 0);
  std::int32_t best = 0;
  for (std::int32_t id = 1; id < next; ++id) {
    if (count[id] > count[best]) best = id;  // ties keep the earlier label
  }
  std::vector<std::uint8_t> out(in.size(), 0);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = (label[i] == best) ? 1 : 0;
  return out;
}

}  // namespace

MaskPair estimate_foreground(const RealImage& img) {
  require_finite(img, "estimate_foreground");
  const auto [lo, hi] =
      std::minmax_element(img.data().begin(), img.data().end());
  if (*lo == *hi) {
    throw ValidationError("estimate_foreground: no subject detected (constant image)");
  }

  const int h = img.height(), w = img.width();
  const int k = otsu_threshold_bin(img);
  std::vector<std::uint8_t> binary(img.size(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    int b = static_cast<int>(img[i] * 256.0);
    b = std::clamp(b, 0, 255);
    binary[i] = (b > k) ? 1 : 0;
  }

  auto closed = erode3x3(dilate3x3(binary, h, w), h, w);
  auto fg = largest_component_8(closed, h, w);

  std::size_t n_fg = 0;
  for (auto v : fg) n_fg += v;
  if (n_fg == 0) {
    throw ValidationError("estimate_foreground: no subject detected");
  }
  if (n_fg == fg.size()) {
    throw ValidationError("estimate_foreground: no background (subject fills image)");
  }
  return MaskPair(h, w, std::move(fg));
}

}  // namespace usmri

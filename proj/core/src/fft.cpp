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

#include "usmri/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace usmri {

namespace {

// FFTW planning is not thread-safe and the cached buffers are shared, so the
// whole transform runs under one lock. Plans use FFTW_ESTIMATE: plan choice
// is then a pure function of (size, direction), which keeps results
// bit-reproducible across runs of the same binary.
struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, entry] : cache_) {
      fftw_destroy_plan(entry.plan);
      fftw_free(entry.in);
      fftw_free(entry.out);
    }
  }

  PlanEntry& get(int h, int w, int sign) {
    const auto key = std::make_tuple(h, w, sign);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    PlanEntry entry;
    const std::size_t n = static_cast<std::size_t>(h) * w;
    entry.in = fftw_alloc_complex(n);
    entry.out = fftw_alloc_complex(n);
    entry.plan = fftw_plan_dft_2d(h, w, entry.in, entry.out, sign, FFTW_ESTIMATE);
    return cache_.emplace(key, entry).first->second;
  }

private:
  std::map<std::tuple<int, int, int>, PlanEntry> cache_;
};

std::mutex g_fft_mutex;

// Shifted, scaled transform shared by both directions:
//   dst = fftshift(FFT_sign(ifftshift(src))) / sqrt(H*W)
void transform_centered(const cplx* src, cplx* dst, int h, int w, int sign) {
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  static PlanCache cache;
  PlanEntry& e = cache.get(h, w, sign);

  const int sh = h / 2, sw = w / 2;        // ifftshift offsets
  const int uh = (h + 1) / 2, uw = (w + 1) / 2;  // fftshift offsets

  for (int r = 0; r < h; ++r) {
    const int rs = (r + sh) % h;
    for (int c = 0; c < w; ++c) {
      const cplx& z = src[static_cast<std::size_t>(rs) * w + (c + sw) % w];
      fftw_complex& t = e.in[static_cast<std::size_t>(r) * w + c];
      t[0] = z.real();
      t[1] = z.imag();
    }
  }

  fftw_execute(e.plan);

  const double scale = 1.0 / std::sqrt(static_cast<double>(h) * w);
  for (int r = 0; r < h; ++r) {
    const int rs = (r + uh) % h;
    for (int c = 0; c < w; ++c) {
      const fftw_complex& t = e.out[static_cast<std::size_t>(rs) * w + (c + uw) % w];
      dst[static_cast<std::size_t>(r) * w + c] = cplx(t[0] * scale, t[1] * scale);
    }
  }
}

}  // namespace

KSpace fft2c(const ComplexImage& image) {
  require_finite(image, "fft2c");
  KSpace out(image.height(), image.width());
  transform_centered(image.data().data(), out.data().data(), image.height(),
                     image.width(), FFTW_FORWARD);
  return out;
}

ComplexImage ifft2c(const KSpace& k) {
  require_finite(k, "ifft2c");
  ComplexImage out(k.height(), k.width());
  transform_centered(k.data().data(), out.data().data(), k.height(), k.width(),
                     FFTW_BACKWARD);
  return out;
}

RealImage magnitude(const ComplexImage& image) {
  require_finite(image, "magnitude");
  RealImage out(image.height(), image.width());
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = std::abs(image[i]);
  return out;
}

RealImage normalize01(const RealImage& image) {
  require_finite(image, "normalize01");
  const auto [lo_it, hi_it] = std::minmax_element(image.data().begin(), image.data().end());
  const double lo = *lo_it, hi = *hi_it;
  RealImage out(image.height(), image.width());
  if (hi == lo) return out;  // constant image maps to zeros
  const double span = hi - lo;
  // Division (not reciprocal multiplication) so the max lands on 1 exactly.
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = (image[i] - lo) / span;
  return out;
}

}  // namespace usmri

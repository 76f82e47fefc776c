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

#include "usmri/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace usmri {

namespace {

void require_normalized(const RealImage& img, const char* what) {
  for (const double v : img.data()) {
    if (!(v >= -1e-9) || !(v <= 1.0 + 1e-9)) {
      throw ValidationError(std::string(what) + ": image not normalized to [0, 1]");
    }
  }
}

// Symmetric (half-sample) reflection: ... 1 0 | 0 1 2 ... N-1 | N-1 N-2 ...
int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(size);
  const double c = 0.5 * (size - 1);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    w[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Separable Gaussian filtering with symmetric reflection at the borders.
RealImage gauss_filter(const RealImage& img, const std::vector<double>& w) {
  const int h = img.height(), width = img.width();
  const int half = static_cast<int>(w.size()) / 2;
  RealImage tmp(h, width), out(h, width);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int t = 0; t < static_cast<int>(w.size()); ++t) {
        acc += w[t] * img.at(r, reflect(c + t - half, width));
      }
      tmp.at(r, c) = acc;
    }
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int t = 0; t < static_cast<int>(w.size()); ++t) {
        acc += w[t] * tmp.at(reflect(r + t - half, h), c);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

RealImage pointwise_product(const RealImage& a, const RealImage& b) {
  RealImage out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

struct SsimFields {
  RealImage luminance;  // (2 mu_x mu_y + C1) / (mu_x^2 + mu_y^2 + C1)
  RealImage cs;         // (2 sigma_xy + C2) / (sigma_x^2 + sigma_y^2 + C2)
};

SsimFields ssim_fields(const RealImage& x, const RealImage& y, const SsimParams& p) {
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const auto w = gaussian_window(p.window_size, p.window_sigma);

  const RealImage mu_x = gauss_filter(x, w);
  const RealImage mu_y = gauss_filter(y, w);
  const RealImage xx = gauss_filter(pointwise_product(x, x), w);
  const RealImage yy = gauss_filter(pointwise_product(y, y), w);
  const RealImage xy = gauss_filter(pointwise_product(x, y), w);

  SsimFields f{RealImage(x.height(), x.width()), RealImage(x.height(), x.width())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mx = mu_x[i], my = mu_y[i];
    const double var_x = xx[i] - mx * mx;
    const double var_y = yy[i] - my * my;
    const double cov = xy[i] - mx * my;
    f.luminance[i] = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
    f.cs[i] = (2.0 * cov + c2) / (var_x + var_y + c2);
  }
  return f;
}

void validate_pair(const RealImage& test, const RealImage& ref, const SsimParams& p,
                   const char* what) {
  require_same_shape(test.height(), test.width(), ref.height(), ref.width(), what);
  require_finite(test, what);
  require_finite(ref, what);
  require_normalized(test, what);
  require_normalized(ref, what);
  if (std::min(test.height(), test.width()) < p.window_size) {
    throw ValidationError(std::string(what) + ": min dimension below window size " +
                          std::to_string(p.window_size));
  }
  if (p.window_size % 2 == 0) {
    throw ValidationError(std::string(what) + ": window size must be odd");
  }
}

RealImage downsample2(const RealImage& img) {
  const int h = img.height() / 2, w = img.width() / 2;
  RealImage out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out.at(r, c) = 0.25 * (img.at(2 * r, 2 * c) + img.at(2 * r, 2 * c + 1) +
                             img.at(2 * r + 1, 2 * c) + img.at(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

double mean_of(const RealImage& img) {
  double acc = 0.0;
  for (const double v : img.data()) acc += v;
  return acc / static_cast<double>(img.size());
}

}  // namespace

double psnr(const RealImage& test, const RealImage& ref) {
  require_same_shape(test.height(), test.width(), ref.height(), ref.width(), "psnr");
  require_finite(test, "psnr");
  require_finite(ref, "psnr");
  require_normalized(test, "psnr");
  require_normalized(ref, "psnr");
  double acc = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double d = test[i] - ref[i];
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(test.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

RealImage ssim_map(const RealImage& test, const RealImage& ref, const SsimParams& params) {
  validate_pair(test, ref, params, "ssim_map");
  const SsimFields f = ssim_fields(test, ref, params);
  RealImage out(test.height(), test.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.luminance[i] * f.cs[i];
  return out;
}

double ssimf(const RealImage& test, const RealImage& ref, const MaskPair& masks,
             const SsimParams& params) {
  require_same_shape(test.height(), test.width(), masks.height(), masks.width(),
                     "ssimf");
  const RealImage map = ssim_map(test, ref, params);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (masks.foreground_at(i)) {
      acc += map[i];
      ++n;
    }
  }
  if (n == 0) throw ValidationError("ssimf: empty foreground");
  return acc / static_cast<double>(n);
}

double ms_ssim(const RealImage& test, const RealImage& ref, int max_scales) {
  const SsimParams params;
  validate_pair(test, ref, params, "ms_ssim");
  if (max_scales < 1 || max_scales > 5) {
    throw ValidationError("ms_ssim: scale count must be in [1, 5]");
  }

  // Largest scale count the image supports: each scale halves the grid and
  // still needs one full SSIM window.
  int feasible = 1;
  int min_dim = std::min(test.height(), test.width());
  while (feasible < max_scales && (min_dim / 2) >= params.window_size) {
    min_dim /= 2;
    ++feasible;
  }
  const int scales = feasible;

  static constexpr double kWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  std::vector<double> weights(kWeights, kWeights + scales);
  if (scales < 5) {
    double sum = 0.0;
    for (const double w : weights) sum += w;
    for (double& w : weights) w /= sum;
  }

  RealImage a = test, b = ref;
  double value = 1.0;
  for (int s = 0; s < scales; ++s) {
    const SsimFields f = ssim_fields(a, b, params);
    if (s + 1 < scales) {
      const double mcs = std::max(0.0, mean_of(f.cs));
      value *= std::pow(mcs, weights[s]);
      a = downsample2(a);
      b = downsample2(b);
    } else {
      const double mssim = std::max(0.0, mean_of(pointwise_product(f.luminance, f.cs)));
      value *= std::pow(mssim, weights[s]);
    }
  }
  return value;
}

double snr_rf(const RealImage& img, const MaskPair& masks) {
  require_same_shape(img.height(), img.width(), masks.height(), masks.width(),
                     "snr_rf");
  require_finite(img, "snr_rf");
  double fg_sum = 0.0;
  std::size_t n_fg = 0;
  double bg_sum = 0.0;
  std::size_t n_bg = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (masks.foreground_at(i)) {
      fg_sum += img[i];
      ++n_fg;
    } else {
      bg_sum += img[i];
      ++n_bg;
    }
  }
  if (n_fg == 0) throw ValidationError("snr_rf: empty foreground");
  if (n_bg < 2) throw ValidationError("snr_rf: background too small for a stddev");
  const double bg_mean = bg_sum / static_cast<double>(n_bg);
  double bg_ss = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (!masks.foreground_at(i)) {
      const double d = img[i] - bg_mean;
      bg_ss += d * d;
    }
  }
  const double bg_std = std::sqrt(bg_ss / static_cast<double>(n_bg - 1));
  if (bg_std == 0.0) {
    throw ValidationError("snr_rf: noiseless background, SNR undefined");
  }
  return (fg_sum / static_cast<double>(n_fg)) / bg_std;
}

double contrast(const RealImage& img, const MaskPair& masks) {
  require_same_shape(img.height(), img.width(), masks.height(), masks.width(),
                     "contrast");
  require_finite(img, "contrast");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (masks.foreground_at(i)) {
      sum += img[i];
      ++n;
    }
  }
  if (n < 2) {
    throw ValidationError("contrast: foreground too small for a stddev");
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (masks.foreground_at(i)) {
      const double d = img[i] - mean;
      ss += d * d;
    }
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// Column-wise aggregation over finite entries only.
MetricsRow aggregate(const std::vector<MetricsRow>& rows, bool want_std) {
  MetricsRow out;
  out.image_id = want_std ? "std" : "mean";
  auto column = [&](auto getter) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      const double v = getter(r);
      if (std::isfinite(v)) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) return std::nan("");
    const double mean = sum / static_cast<double>(n);
    if (!want_std) return mean;
    if (n < 2) return 0.0;
    double ss = 0.0;
    for (const auto& r : rows) {
      const double v = getter(r);
      if (std::isfinite(v)) {
        const double d = v - mean;
        ss += d * d;
      }
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
  };
  out.ssimf = column([](const MetricsRow& r) { return r.ssimf; });
  out.psnr_db = column([](const MetricsRow& r) { return r.psnr_db; });
  out.ms_ssim = column([](const MetricsRow& r) { return r.ms_ssim; });
  out.snr = column([](const MetricsRow& r) { return r.snr; });
  out.contrast = column([](const MetricsRow& r) { return r.contrast; });
  return out;
}

void write_row(std::ostream& os, const MetricsRow& r) {
  os << r.image_id << ',' << format_double(r.ssimf) << ',' << format_double(r.psnr_db)
     << ',' << format_double(r.ms_ssim) << ',' << format_double(r.snr) << ','
     << format_double(r.contrast) << '\n';
}

}  // namespace

MetricsRow MetricsReport::mean() const { return aggregate(per_image, false); }

MetricsRow MetricsReport::stddev() const { return aggregate(per_image, true); }

void MetricsReport::write_csv(std::ostream& os) const {
  os << "image_id,ssimf,psnr_db,ms_ssim,snr,contrast\n";
  for (const auto& r : per_image) write_row(os, r);
  write_row(os, mean());
  write_row(os, stddev());
}

std::string MetricsReport::to_csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

}  // namespace usmri

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

#include "usmri/recon.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "usmri/fft.hpp"

namespace usmri {

ComplexImage zero_filled(const KSpace& k_acq, const SamplingMask& mask) {
  return ifft2c(apply_mask(k_acq, mask));
}

KSpace hermitian_fill(const KSpace& k, const SamplingMask& mask) {
  if (mask.num_lines() != k.height()) {
    throw ValidationError("hermitian_fill: mask length does not match k-space height");
  }
  const int h = k.height(), w = k.width();
  // Point reflection through the DC sample at (H/2, W/2); derived from the
  // standard-order conjugate partner (N - i) mod N.
  const int rh = 2 * (h / 2), rw = 2 * (w / 2);
  KSpace out = k;
  for (int r = 0; r < h; ++r) {
    if (mask.kept(r)) continue;
    const int rp = ((rh - r) % h + h) % h;
    if (rp == r || !mask.kept(rp)) continue;
    for (int c = 0; c < w; ++c) {
      const int cp = ((rw - c) % w + w) % w;
      out.at(r, c) = std::conj(k.at(rp, cp));
    }
  }
  return out;
}

namespace {

double tv_objective(const std::vector<double>& x, const std::vector<double>& data,
                    int h, int w, double lambda, double eps) {
  double fidelity = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - data[i];
    fidelity += d * d;
  }
  double tv = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const double gx = (c + 1 < w) ? x[i + 1] - x[i] : 0.0;
      const double gy = (r + 1 < h) ? x[i + w] - x[i] : 0.0;
      tv += std::sqrt(gx * gx + gy * gy + eps * eps);
    }
  }
  return 0.5 * fidelity + lambda * tv;
}

void tv_gradient(const std::vector<double>& x, const std::vector<double>& data,
                 int h, int w, double lambda, double eps, std::vector<double>& grad) {
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] = x[i] - data[i];
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const double gx = (c + 1 < w) ? x[i + 1] - x[i] : 0.0;
      const double gy = (r + 1 < h) ? x[i + w] - x[i] : 0.0;
      const double t = std::sqrt(gx * gx + gy * gy + eps * eps);
      grad[i] += lambda * (-gx - gy) / t;
      if (c + 1 < w) grad[i + 1] += lambda * gx / t;
      if (r + 1 < h) grad[i + w] += lambda * gy / t;
    }
  }
}

}  // namespace

ComplexImage tv_denoise(const ComplexImage& img, double lambda, int steps,
                        std::vector<double>* objective_trace) {
  require_finite(img, "tv_denoise");
  if (!(lambda >= 0.0)) throw ValidationError("tv_denoise: lambda must be >= 0");
  if (steps < 1) throw ValidationError("tv_denoise: steps must be >= 1");

  const int h = img.height(), w = img.width();
  constexpr double kEps = 1e-6;
  constexpr double kStep0 = 0.1;

  std::vector<double> data(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) data[i] = std::abs(img[i]);
  std::vector<double> x = data;
  std::vector<double> grad(x.size());
  std::vector<double> cand(x.size());

  double fx = tv_objective(x, data, h, w, lambda, kEps);
  if (objective_trace) objective_trace->push_back(fx);
  for (int s = 0; s < steps; ++s) {
    tv_gradient(x, data, h, w, lambda, kEps, grad);
    double step = kStep0;
    bool accepted = false;
    // Halve the step until the objective does not increase; the raw step
    // overshoots near TV kinks where the smoothed curvature is ~1/eps.
    for (int half = 0; half < 40; ++half) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] - step * grad[i];
      const double fc = tv_objective(cand, data, h, w, lambda, kEps);
      if (fc <= fx) {
        x.swap(cand);
        fx = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stationary to machine precision
    if (objective_trace) objective_trace->push_back(fx);
  }

  ComplexImage out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = std::abs(img[i]);
    out[i] = (m > 0.0) ? img[i] * (x[i] / m) : cplx(x[i], 0.0);
  }
  return out;
}

namespace {

double masked_residual(const KSpace& k, const KSpace& acq, const SamplingMask& mask) {
  double acc = 0.0;
  for (int r = 0; r < k.height(); ++r) {
    if (!mask.kept(r)) continue;
    for (int c = 0; c < k.width(); ++c) {
      acc += std::norm(k.at(r, c) - acq.at(r, c));
    }
  }
  return std::sqrt(acc);
}

double change_norm(const ComplexImage& a, const ComplexImage& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

ReconResult cascade_run(const KSpace& k_acq, const SamplingMask& mask,
                        const CascadeConfig& cfg) {
  if (!(cfg.tv_lambda >= 0.0)) {
    throw ValidationError("CascadeConfig: tv_lambda must be >= 0");
  }
  if (cfg.iterations < 1 || cfg.iterations > 500) {
    throw ValidationError("CascadeConfig: iterations must be in [1, 500]");
  }
  if (cfg.tv_steps < 1) throw ValidationError("CascadeConfig: tv_steps must be >= 1");

  const KSpace acq = apply_mask(k_acq, mask);
  KSpace k = acq;
  ComplexImage prev = ifft2c(acq);

  ReconResult result{ComplexImage(k.height(), k.width()), acq, {}};
  double initial_change = -1.0;

  for (int it = 1; it <= cfg.iterations; ++it) {
    if (cfg.k_stage == KStage::HermitianFill) k = hermitian_fill(k, mask);
    k = data_consistency(k, acq, mask);
    ComplexImage x = ifft2c(k);
    switch (cfg.i_stage) {
      case IStage::None:
        break;
      case IStage::TvDenoise:
        x = tv_denoise(x, cfg.tv_lambda, cfg.tv_steps);
        break;
      case IStage::RealPositivity:
        for (auto& z : x.data()) z = cplx(std::max(0.0, z.real()), 0.0);
        break;
    }
    k = fft2c(x);

    const double change = change_norm(x, prev);
    if (it == 1) initial_change = change;
    if (initial_change > 0.0 && change > 1e6 * initial_change) {
      throw NumericalError("cascade_run: diverged at iteration " + std::to_string(it) +
                           " (image change " + format_double(change) + " vs initial " +
                           format_double(initial_change) + ")");
    }
    if (cfg.record_diagnostics) {
      result.diagnostics.push_back({it, masked_residual(k, acq, mask), change});
    }
    prev = std::move(x);
  }

  result.final_k = data_consistency(k, acq, mask);
  result.image = ifft2c(result.final_k);
  return result;
}

MetricsReport evaluate_external(const std::vector<ComplexImage>& recons,
                                const std::vector<ComplexImage>& refs,
                                const std::vector<MaskPair>& masks,
                                const std::vector<std::string>& ids) {
  if (recons.size() != refs.size() || recons.size() != masks.size()) {
    throw ValidationError("evaluate_external: batch size mismatch");
  }
  if (!ids.empty() && ids.size() != recons.size()) {
    throw ValidationError("evaluate_external: id count mismatch");
  }
  MetricsReport report;
  for (std::size_t i = 0; i < recons.size(); ++i) {
    const RealImage test = normalize01(magnitude(recons[i]));
    const RealImage ref = normalize01(magnitude(refs[i]));
    MetricsRow row;
    row.image_id = ids.empty() ? "image_" + std::to_string(i) : ids[i];
    auto guarded = [](auto&& fn) {
      try {
        return fn();
      } catch (const ValidationError&) {
        return std::nan("");
      }
    };
    row.ssimf = guarded([&] { return ssimf(test, ref, masks[i]); });
    row.psnr_db = guarded([&] { return psnr(test, ref); });
    row.ms_ssim = guarded([&] { return ms_ssim(test, ref); });
    row.snr = guarded([&] { return snr_rf(test, masks[i]); });
    row.contrast = guarded([&] { return contrast(test, masks[i]); });
    report.per_image.push_back(std::move(row));
  }
  return report;
}

void write_diagnostics_csv(const ReconResult& result, std::ostream& os) {
  os << "iteration,dc_residual,image_change\n";
  for (const auto& d : result.diagnostics) {
    os << d.iteration << ',' << format_double(d.dc_residual) << ','
       << format_double(d.image_change) << '\n';
  }
}

}  // namespace usmri

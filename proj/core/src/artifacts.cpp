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

#include "usmri/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "usmri/fft.hpp"
#include "usmri/metrics.hpp"
#include "usmri/rng.hpp"

namespace usmri {

std::string to_string(OrderKind k) {
  return k == OrderKind::Linear ? "linear" : "centric";
}

OrderKind order_kind_from_string(const std::string& s) {
  if (s == "linear") return OrderKind::Linear;
  if (s == "centric") return OrderKind::Centric;
  throw ValidationError("unknown acquisition order: " + s);
}

AcquisitionOrder acquisition_order(int num_lines, OrderKind kind) {
  if (num_lines < 1) {
    throw ValidationError("acquisition_order: num_lines must be positive");
  }
  AcquisitionOrder order;
  order.kind = kind;
  order.permutation.resize(num_lines);
  if (kind == OrderKind::Linear) {
    for (int i = 0; i < num_lines; ++i) order.permutation[i] = i;
    return order;
  }
  // Centric: center, center-1, center+1, center-2, ... clipped to range.
  const int center = num_lines / 2;
  int time = 0;
  order.permutation[center] = time++;
  for (int step = 1; time < num_lines; ++step) {
    if (center - step >= 0) order.permutation[center - step] = time++;
    if (center + step < num_lines && time < num_lines) {
      order.permutation[center + step] = time++;
    }
  }
  return order;
}

KSpace add_gaussian_noise(const KSpace& k, double sigma, std::uint64_t seed) {
  require_finite(k, "add_gaussian_noise");
  if (!(sigma >= 0.0)) {
    throw ValidationError("add_gaussian_noise: sigma must be non-negative");
  }
  if (sigma == 0.0) return k;
  rng::Generator gen(seed);
  KSpace out = k;
  for (auto& z : out.data()) {
    z += cplx(gen.normal(sigma), gen.normal(sigma));
  }
  return out;
}

double calibrate_sigma(const KSpace& k, const MaskPair& masks, double target_factor,
                       std::uint64_t base_seed) {
  require_finite(k, "calibrate_sigma");
  if (!(target_factor > 0.0) || !(target_factor <= 1.0)) {
    throw ValidationError("calibrate_sigma: target_factor must be in (0, 1]");
  }
  require_same_shape(k.height(), k.width(), masks.height(), masks.width(),
                     "calibrate_sigma");

  const ComplexImage img0 = ifft2c(k);
  const double snr0 = snr_rf(magnitude(img0), masks);
  if (target_factor == 1.0) return 0.0;  // no degradation requested
  const double target = target_factor * snr0;

  // Unit-sigma noise reconstructions for 8 fixed seeds. The transform is
  // linear, so ifft2c(k + sigma * n) = img0 + sigma * ifft2c(n); the
  // objective is then evaluated at any sigma without further transforms.
  constexpr int kSeeds = 8;
  std::vector<ComplexImage> unit;
  unit.reserve(kSeeds);
  const KSpace zero(k.height(), k.width());
  for (int j = 0; j < kSeeds; ++j) {
    unit.push_back(
        ifft2c(add_gaussian_noise(zero, 1.0, rng::mix(base_seed, 0xca1b5eed + j))));
  }

  RealImage mag(k.height(), k.width());
  auto measured_snr = [&](double sigma) {
    double acc = 0.0;
    for (const auto& u : unit) {
      for (std::size_t i = 0; i < mag.size(); ++i) {
        mag[i] = std::abs(img0[i] + sigma * u[i]);
      }
      acc += snr_rf(mag, masks);
    }
    return acc / kSeeds;
  };

  double energy = 0.0;
  for (const auto& z : k.data()) energy += std::norm(z);
  const double sigma_hi = std::sqrt(energy / static_cast<double>(k.size()));

  double lo = 0.0, hi = sigma_hi;
  if (measured_snr(hi) > target) {
    throw CalibrationError("calibrate_sigma: target SNR not reachable in [0, " +
                           std::to_string(sigma_hi) + "]");
  }
  constexpr int kMaxIters = 60;
  for (int it = 0; it < kMaxIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (measured_snr(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double sigma = 0.5 * (lo + hi);
  const double achieved = measured_snr(sigma);
  if (std::abs(achieved - target) > 0.02 * target) {
    throw CalibrationError(
        "calibrate_sigma: no convergence after 60 iterations; bracket [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "], achieved SNR " +
        std::to_string(achieved) + " vs target " + std::to_string(target));
  }
  return sigma;
}

namespace {

struct Pose {
  double theta = 0.0;  // radians, accumulated rotation about the center
  double tx = 0.0;     // pixels along width
  double ty = 0.0;     // pixels along height

  bool is_identity() const { return theta == 0.0 && tx == 0.0 && ty == 0.0; }
};

// Compose an event on top of a carried pose: rotate first, then translate,
// i.e. p -> R_e (C p) + t_e with the previous translation rotated along.
Pose compose(const Pose& carried, const MotionEvent& e) {
  const double th = e.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(th), s = std::sin(th);
  Pose out;
  out.theta = carried.theta + th;
  out.tx = c * carried.tx - s * carried.ty + e.dx;
  out.ty = s * carried.tx + c * carried.ty + e.dy;
  return out;
}

void validate_events(const std::vector<MotionEvent>& events, int width) {
  double prev = -1.0;
  for (const auto& e : events) {
    if (!(e.onset >= 0.0) || !(e.onset < 1.0)) {
      throw ValidationError("MotionEvent: onset must lie in [0, 1)");
    }
    if (e.onset <= prev) {
      throw ValidationError("MotionEvent: onsets must be strictly increasing");
    }
    prev = e.onset;
    if (std::abs(e.rotation_deg) > 45.0) {
      throw ValidationError("MotionEvent: |rotation| must not exceed 45 degrees");
    }
    const double limit = 0.25 * width;
    if (std::abs(e.dx) > limit || std::abs(e.dy) > limit) {
      throw ValidationError("MotionEvent: |shift| must not exceed width / 4");
    }
  }
}

// Active pose per segment of the acquisition timeline. poses[0] is the
// identity (before any event); poses[j] is active on [onset_j, onset_{j+1}).
std::vector<Pose> build_poses(const std::vector<MotionEvent>& events) {
  std::vector<Pose> poses;
  poses.reserve(events.size() + 1);
  poses.emplace_back();
  Pose carried;
  for (const auto& e : events) {
    const Pose active = compose(carried, e);
    poses.push_back(active);
    if (!e.transient) carried = active;
  }
  return poses;
}

ComplexImage rotate_bilinear(const ComplexImage& img, double theta) {
  const int h = img.height(), w = img.width();
  const double cy = 0.5 * (h - 1), cx = 0.5 * (w - 1);
  const double c = std::cos(theta), s = std::sin(theta);
  ComplexImage out(h, w);
  for (int r = 0; r < h; ++r) {
    const double y = r - cy;
    for (int col = 0; col < w; ++col) {
      const double x = col - cx;
      // Inverse map: sample the input at R(-theta) * (x, y).
      const double xs = c * x + s * y + cx;
      const double ys = -s * x + c * y + cy;
      const int x0 = static_cast<int>(std::floor(xs));
      const int y0 = static_cast<int>(std::floor(ys));
      if (x0 < -1 || x0 > w - 1 || y0 < -1 || y0 > h - 1) continue;
      const double fx = xs - x0, fy = ys - y0;
      auto sample = [&](int rr, int cc) -> cplx {
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) return cplx(0.0, 0.0);
        return img.at(rr, cc);
      };
      const cplx v00 = sample(y0, x0), v01 = sample(y0, x0 + 1);
      const cplx v10 = sample(y0 + 1, x0), v11 = sample(y0 + 1, x0 + 1);
      out.at(r, col) = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                       fy * ((1.0 - fx) * v10 + fx * v11);
    }
  }
  return out;
}

KSpace pose_kspace(const ComplexImage& img, const Pose& pose) {
  const ComplexImage rotated =
      pose.theta == 0.0 ? img : rotate_bilinear(img, pose.theta);
  KSpace k = fft2c(rotated);
  if (pose.tx == 0.0 && pose.ty == 0.0) return k;
  const int h = k.height(), w = k.width();
  const int ch = h / 2, cw = w / 2;
  for (int r = 0; r < h; ++r) {
    const double fy = static_cast<double>(r - ch) / h;
    for (int c = 0; c < w; ++c) {
      const double fx = static_cast<double>(c - cw) / w;
      const double phase = -2.0 * std::numbers::pi * (fx * pose.tx + fy * pose.ty);
      k.at(r, c) *= cplx(std::cos(phase), std::sin(phase));
    }
  }
  return k;
}

}  // namespace

KSpace simulate_motion(const ComplexImage& img, const std::vector<MotionEvent>& events,
                       const AcquisitionOrder& order) {
  require_finite(img, "simulate_motion");
  validate_events(events, img.width());
  const int h = img.height();
  if (static_cast<int>(order.permutation.size()) != h) {
    throw ValidationError("simulate_motion: acquisition order does not match image height");
  }

  const std::vector<Pose> poses = build_poses(events);

  // Segment index per line: the last event with onset <= acquisition time.
  std::vector<int> state_of_line(h, 0);
  for (int line = 0; line < h; ++line) {
    const double t = static_cast<double>(order.permutation[line]) / h;
    int s = 0;
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (events[j].onset <= t) s = static_cast<int>(j) + 1;
    }
    state_of_line[line] = s;
  }

  // Transform lazily: states never sampled by a line are not rendered.
  std::vector<std::unique_ptr<KSpace>> state_k(poses.size());
  auto state = [&](int s) -> const KSpace& {
    if (!state_k[s]) state_k[s] = std::make_unique<KSpace>(pose_kspace(img, poses[s]));
    return *state_k[s];
  };

  KSpace out(h, img.width());
  for (int line = 0; line < h; ++line) {
    const KSpace& src = state(state_of_line[line]);
    for (int c = 0; c < img.width(); ++c) out.at(line, c) = src.at(line, c);
  }
  return out;
}

std::vector<ComplexImage> motion_states(const ComplexImage& img,
                                        const std::vector<MotionEvent>& events) {
  require_finite(img, "motion_states");
  validate_events(events, img.width());
  std::vector<ComplexImage> states;
  for (const Pose& pose : build_poses(events)) {
    states.push_back(pose.is_identity() ? img : ifft2c(pose_kspace(img, pose)));
  }
  return states;
}

}  // namespace usmri

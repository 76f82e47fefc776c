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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace usmri {

using cplx = std::complex<double>;

/// Bad arguments or malformed domain objects. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File system and format failures. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown (divergence, failed calibration). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

namespace detail {

// Row-major H x W sample grid. The Tag parameter only distinguishes the
// domain at the type level; MinDim is the smallest legal edge length.
template <typename T, typename Tag, int MinDim>
class Grid {
public:
  Grid(int height, int width) : height_(height), width_(width) {
    check_dims(height, width);
    data_.assign(static_cast<std::size_t>(height) * width, T{});
  }

  Grid(int height, int width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width) {
      throw ValidationError(std::string(Tag::name) + ": data length " +
                            std::to_string(data_.size()) + " does not match " +
                            std::to_string(height) + "x" + std::to_string(width));
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  T& at(int r, int c) { return data_[static_cast<std::size_t>(r) * width_ + c]; }
  const T& at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * width_ + c];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
  }

private:
  static void check_dims(int height, int width) {
    if (height < MinDim || width < MinDim) {
      throw ValidationError(std::string(Tag::name) + ": dimensions " +
                            std::to_string(height) + "x" + std::to_string(width) +
                            " below minimum " + std::to_string(MinDim));
    }
  }

  int height_;
  int width_;
  std::vector<T> data_;
};

struct ImageTag {
  static constexpr const char* name = "ComplexImage";
};
struct KSpaceTag {
  static constexpr const char* name = "KSpace";
};
struct RealTag {
  static constexpr const char* name = "RealImage";
};

}  // namespace detail

/// Complex samples in the image domain.
using ComplexImage = detail::Grid<cplx, detail::ImageTag, 8>;

/// Complex samples in the frequency domain, DC at (H/2, W/2).
using KSpace = detail::Grid<cplx, detail::KSpaceTag, 8>;

/// Real-valued samples (magnitudes, metric maps, mask weights).
using RealImage = detail::Grid<double, detail::RealTag, 1>;

/// Subject/background partition of a pixel grid. Foreground and background
/// are disjoint and cover every pixel; the foreground is never empty. A
/// whole-image foreground (empty background) is legal so reference-based
/// metrics can reduce to their unmasked forms; operations that need
/// background statistics validate its size themselves.
class MaskPair {
public:
  MaskPair(int height, int width, std::vector<std::uint8_t> foreground)
      : height_(height), width_(width), fg_(std::move(foreground)) {
    if (height < 1 || width < 1) {
      throw ValidationError("MaskPair: non-positive dimensions");
    }
    if (fg_.size() != static_cast<std::size_t>(height) * width) {
      throw ValidationError("MaskPair: mask length does not match dimensions");
    }
    std::size_t n_fg = 0;
    for (auto v : fg_) n_fg += (v != 0);
    if (n_fg == 0) throw ValidationError("MaskPair: empty foreground");
    fg_count_ = n_fg;
  }

  int height() const { return height_; }
  int width() const { return width_; }

  bool foreground(int r, int c) const {
    return fg_[static_cast<std::size_t>(r) * width_ + c] != 0;
  }
  bool background(int r, int c) const { return !foreground(r, c); }

  bool foreground_at(std::size_t i) const { return fg_[i] != 0; }

  std::size_t foreground_count() const { return fg_count_; }
  std::size_t background_count() const { return fg_.size() - fg_count_; }
  std::size_t size() const { return fg_.size(); }

  const std::vector<std::uint8_t>& foreground_mask() const { return fg_; }

  friend bool operator==(const MaskPair& a, const MaskPair& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.fg_ == b.fg_;
  }

private:
  int height_;
  int width_;
  std::vector<std::uint8_t> fg_;
  std::size_t fg_count_ = 0;
};

template <typename GridT>
void require_finite(const GridT& g, const char* what) {
  for (const auto& v : g.data()) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, cplx>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ValidationError(std::string(what) + ": non-finite sample");
      }
    } else {
      if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + ": non-finite sample");
      }
    }
  }
}

inline void require_same_shape(int h1, int w1, int h2, int w2, const char* what) {
  if (h1 != h2 || w1 != w2) {
    throw ValidationError(std::string(what) + ": shape mismatch " +
                          std::to_string(h1) + "x" + std::to_string(w1) + " vs " +
                          std::to_string(h2) + "x" + std::to_string(w2));
  }
}

}  // namespace usmri

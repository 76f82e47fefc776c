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

#include "usmri/types.hpp"

namespace usmri {

/// Centered unitary 2D DFT: half-grid circular shifts before and after the
/// transform place DC at (H/2, W/2); 1/sqrt(H*W) scaling in both directions
/// so that Parseval holds exactly and ifft2c(fft2c(x)) == x.
KSpace fft2c(const ComplexImage& image);

/// Exact inverse of fft2c.
ComplexImage ifft2c(const KSpace& k);

/// Per-pixel modulus sqrt(re^2 + im^2).
RealImage magnitude(const ComplexImage& image);

/// Affine rescale to [0, 1]: (x - min) / (max - min). A constant image maps
/// to all zeros.
RealImage normalize01(const RealImage& image);

}  // namespace usmri

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

#include <filesystem>
#include <string>
#include <vector>

#include "usmri/sampling.hpp"
#include "usmri/types.hpp"

namespace usmri {

enum class KcpxDomain { Image, KSpace };

/// kcpx interchange payload: "KCPX1\n<height>\n<width>\n<domain>\n" followed
/// by row-major little-endian f64 (real, imag) pairs, 16 bytes per sample.
struct KcpxData {
  KcpxDomain domain = KcpxDomain::Image;
  int height = 0;
  int width = 0;
  std::vector<cplx> data;

  ComplexImage as_image() const&;
  ComplexImage as_image() &&;
  KSpace as_kspace() const&;
  KSpace as_kspace() &&;
};

void export_kcpx(const ComplexImage& x, const std::filesystem::path& path);
void export_kcpx(const KSpace& x, const std::filesystem::path& path);

/// Parses a kcpx file; malformed input raises IoError naming the byte
/// offset of the problem.
KcpxData import_kcpx(const std::filesystem::path& path);

/// Binary PGM (P5), maxval 65535, big-endian samples, value = round(v * 65535).
void export_pgm(const RealImage& img, const std::filesystem::path& path);

/// One '0' or '1' character per line, one line per phase-encode line.
void export_mask(const SamplingMask& mask, const std::filesystem::path& path);
SamplingMask import_mask(const std::filesystem::path& path);

/// Writes via a temp file + rename so partially written outputs never
/// appear under the final name.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace usmri

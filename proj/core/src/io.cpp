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

#include "usmri/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace usmri {

namespace {

constexpr char kMagic[] = "KCPX1";
// Header dimensions are capped so the payload size fits comfortably in 63
// bits and a hostile header cannot trigger a huge allocation.
constexpr std::int64_t kMaxDim = 1 << 20;

void append_le_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

double read_le_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return bytes;
}

std::string kcpx_bytes(KcpxDomain domain, int h, int w, const std::vector<cplx>& data) {
  std::string out;
  out.reserve(32 + data.size() * 16);
  out += kMagic;
  out += '\n';
  out += std::to_string(h);
  out += '\n';
  out += std::to_string(w);
  out += '\n';
  out += (domain == KcpxDomain::Image) ? "image" : "kspace";
  out += '\n';
  for (const cplx& z : data) {
    append_le_f64(out, z.real());
    append_le_f64(out, z.imag());
  }
  return out;
}

// Reads the next newline-terminated token; advances `offset` past the '\n'.
std::string next_line(const std::string& bytes, std::size_t& offset,
                      const std::string& file) {
  const std::size_t nl = bytes.find('\n', offset);
  if (nl == std::string::npos) {
    throw IoError(file + ": truncated header at offset " + std::to_string(offset));
  }
  std::string line = bytes.substr(offset, nl - offset);
  offset = nl + 1;
  return line;
}

std::int64_t parse_dim(const std::string& line, std::size_t line_offset,
                       const std::string& file) {
  if (line.empty() || line.find_first_not_of("0123456789") != std::string::npos) {
    throw IoError(file + ": malformed dimension at offset " +
                  std::to_string(line_offset));
  }
  if (line.size() > 12) {
    throw IoError(file + ": dimension overflow at offset " +
                  std::to_string(line_offset));
  }
  const std::int64_t v = std::stoll(line);
  if (v < 1 || v > kMaxDim) {
    throw IoError(file + ": dimension overflow at offset " +
                  std::to_string(line_offset));
  }
  return v;
}

}  // namespace

ComplexImage KcpxData::as_image() const& { return KcpxData(*this).as_image(); }

ComplexImage KcpxData::as_image() && {
  if (domain != KcpxDomain::Image) {
    throw ValidationError("kcpx payload is k-space, expected an image");
  }
  return ComplexImage(height, width, std::move(data));
}

KSpace KcpxData::as_kspace() const& { return KcpxData(*this).as_kspace(); }

KSpace KcpxData::as_kspace() && {
  if (domain != KcpxDomain::KSpace) {
    throw ValidationError("kcpx payload is an image, expected k-space");
  }
  return KSpace(height, width, std::move(data));
}

void export_kcpx(const ComplexImage& x, const std::filesystem::path& path) {
  write_file_atomic(path, kcpx_bytes(KcpxDomain::Image, x.height(), x.width(), x.data()));
}

void export_kcpx(const KSpace& x, const std::filesystem::path& path) {
  write_file_atomic(path, kcpx_bytes(KcpxDomain::KSpace, x.height(), x.width(), x.data()));
}

KcpxData import_kcpx(const std::filesystem::path& path) {
  const std::string bytes = read_all(path);
  const std::string file = path.string();
  std::size_t offset = 0;

  const std::string magic = next_line(bytes, offset, file);
  if (magic != kMagic) {
    throw IoError(file + ": bad magic at offset 0 (expected KCPX1)");
  }
  std::size_t line_offset = offset;
  const std::int64_t h = parse_dim(next_line(bytes, offset, file), line_offset, file);
  line_offset = offset;
  const std::int64_t w = parse_dim(next_line(bytes, offset, file), line_offset, file);
  line_offset = offset;
  const std::string domain_str = next_line(bytes, offset, file);
  KcpxDomain domain;
  if (domain_str == "image") {
    domain = KcpxDomain::Image;
  } else if (domain_str == "kspace") {
    domain = KcpxDomain::KSpace;
  } else {
    throw IoError(file + ": unknown domain tag at offset " +
                  std::to_string(line_offset));
  }

  const std::uint64_t expected = static_cast<std::uint64_t>(h) * w * 16;
  const std::uint64_t available = bytes.size() - offset;
  if (available < expected) {
    throw IoError(file + ": truncated payload at offset " +
                  std::to_string(offset + available) + " (expected " +
                  std::to_string(expected) + " payload bytes, got " +
                  std::to_string(available) + ")");
  }
  if (available > expected) {
    throw IoError(file + ": trailing bytes at offset " +
                  std::to_string(offset + expected));
  }

  KcpxData out;
  out.domain = domain;
  out.height = static_cast<int>(h);
  out.width = static_cast<int>(w);
  out.data.resize(static_cast<std::size_t>(h) * w);
  const char* p = bytes.data() + offset;
  for (auto& z : out.data) {
    z = cplx(read_le_f64(p), read_le_f64(p + 8));
    p += 16;
  }
  return out;
}

void export_pgm(const RealImage& img, const std::filesystem::path& path) {
  require_finite(img, "export_pgm");
  std::string out;
  out += "P5\n";
  out += std::to_string(img.width());
  out += ' ';
  out += std::to_string(img.height());
  out += "\n65535\n";
  out.reserve(out.size() + img.size() * 2);
  for (const double v : img.data()) {
    const double scaled = std::floor(v * 65535.0 + 0.5);
    const int s = static_cast<int>(std::clamp(scaled, 0.0, 65535.0));
    out.push_back(static_cast<char>((s >> 8) & 0xff));  // big-endian per PGM
    out.push_back(static_cast<char>(s & 0xff));
  }
  write_file_atomic(path, out);
}

void export_mask(const SamplingMask& mask, const std::filesystem::path& path) {
  std::string out;
  out.reserve(mask.keep.size() * 2);
  for (const auto v : mask.keep) {
    out.push_back(v ? '1' : '0');
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

SamplingMask import_mask(const std::filesystem::path& path) {
  const std::string bytes = read_all(path);
  SamplingMask mask;
  std::size_t i = 0;
  while (i < bytes.size()) {
    const std::size_t nl = bytes.find('\n', i);
    const std::string line =
        bytes.substr(i, nl == std::string::npos ? std::string::npos : nl - i);
    if (line != "0" && line != "1") {
      throw IoError(path.string() + ": mask line at offset " + std::to_string(i) +
                    " must be '0' or '1'");
    }
    mask.keep.push_back(line == "1" ? 1 : 0);
    if (nl == std::string::npos) break;
    i = nl + 1;
  }
  if (mask.keep.empty()) throw IoError(path.string() + ": empty mask file");
  return mask;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace usmri

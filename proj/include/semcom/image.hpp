// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Raster type shared by every stage of the pipeline, binary PGM I/O and the
// two resampling kernels used by the codec (box average down, bilinear up).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "semcom/errors.hpp"

namespace semcom {

enum class MapKindTag : std::uint8_t { kSoft = 0, kBinary = 1, kLabels = 2 };

// Soft: any value in [0,1]. Binary: values in {0,1}. Labels(K): values on the
// grid {0, 1/(K-1), ..., 1}.
struct MapKind {
  MapKindTag tag = MapKindTag::kSoft;
  int levels = 0;  // K for kLabels, 0 otherwise

  static constexpr MapKind soft() { return {MapKindTag::kSoft, 0}; }
  static constexpr MapKind binary() { return {MapKindTag::kBinary, 0}; }
  static MapKind labels(int k) {
    if (k < 2) throw DomainError("label map needs K >= 2, got " + std::to_string(k));
    return {MapKindTag::kLabels, k};
  }

  bool is_soft() const { return tag == MapKindTag::kSoft; }
  bool is_binary() const { return tag == MapKindTag::kBinary; }
  bool is_labels() const { return tag == MapKindTag::kLabels; }

  friend bool operator==(const MapKind&, const MapKind&) = default;
};

inline std::string to_string(const MapKind& kind) {
  switch (kind.tag) {
    case MapKindTag::kSoft: return "soft";
    case MapKindTag::kBinary: return "binary";
    case MapKindTag::kLabels: return "labels(" + std::to_string(kind.levels) + ")";
  }
  return "?";
}

struct Resolution {
  int width = 1;
  int height = 1;

  std::size_t area() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

// Snaps a value to the nearest level of a K-level grid.
inline double snap_to_level(double v, int levels) {
  const double steps = static_cast<double>(levels - 1);
  return std::clamp(std::round(v * steps), 0.0, steps) / steps;
}

// Immutable W x H raster of intensities in [0,1], row-major, top row first.
class SemanticMap {
 public:
  // A 1x1 black Soft map.
  SemanticMap() : SemanticMap(1, 1, {0.0}) {}

  SemanticMap(int width, int height, std::vector<double> data,
              MapKind kind = MapKind::soft())
      : width_(width), height_(height), data_(std::move(data)), kind_(kind) {
    if (width < 1 || height < 1) {
      throw DomainError("map dimensions must be >= 1, got " +
                        std::to_string(width) + "x" + std::to_string(height));
    }
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw ShapeError("map data length " + std::to_string(data_.size()) +
                       " != " + std::to_string(width) + "*" +
                       std::to_string(height));
    }
    for (double& v : data_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("map value out of [0,1]: " + std::to_string(v));
      }
      switch (kind_.tag) {
        case MapKindTag::kSoft:
          break;
        case MapKindTag::kBinary:
          if (v != 0.0 && v != 1.0) {
            throw DomainError("binary map value not in {0,1}: " + std::to_string(v));
          }
          break;
        case MapKindTag::kLabels: {
          const double snapped = snap_to_level(v, kind_.levels);
          if (std::abs(snapped - v) > 1e-9) {
            throw DomainError("label map value off the " +
                              std::to_string(kind_.levels) +
                              "-level grid: " + std::to_string(v));
          }
          v = snapped;
          break;
        }
      }
    }
  }

  static SemanticMap filled(int width, int height, double value,
                            MapKind kind = MapKind::soft()) {
    return SemanticMap(width, height,
                       std::vector<double>(static_cast<std::size_t>(width) * height, value),
                       kind);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  Resolution resolution() const { return {width_, height_}; }
  std::size_t size() const { return data_.size(); }
  MapKind kind() const { return kind_; }
  std::span<const double> pixels() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  double at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  // Coordinate-clamped access; the border policy used by every filter.
  double clamped(int x, int y) const {
    return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  double mean() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s / static_cast<double>(data_.size());
  }
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (double v : data_) s += (v - m) * (v - m);
    return s / static_cast<double>(data_.size());
  }

  // Same pixels, different kind; the invariants of the new kind are checked.
  SemanticMap with_kind(MapKind kind) const {
    return SemanticMap(width_, height_, data_, kind);
  }

  friend bool operator==(const SemanticMap&, const SemanticMap&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> data_;
  MapKind kind_;
};

inline std::uint8_t quantize_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// ---------------------------------------------------------------------------
// PGM I/O

namespace detail {

inline std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace detail

// Parses a binary PGM (P5) held in memory. Pixels map to p / maxval.
inline SemanticMap parse_pgm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("not a binary PGM (magic must be P5)", 0);
  }
  std::size_t pos = 2;
  auto is_space = [](std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  auto skip = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (is_space(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* field) -> long {
    skip();
    const std::size_t start = pos;
    long value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L) throw ParseError(std::string("PGM ") + field + " too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError(std::string("PGM header: expected ") + field, pos);
    return value;
  };

  if (pos < bytes.size() && !is_space(bytes[pos]) && bytes[pos] != '#') {
    throw ParseError("PGM header: expected whitespace after magic", pos);
  }
  const long width = read_uint("width");
  const long height = read_uint("height");
  const long maxval = read_uint("maxval");
  if (width < 1 || height < 1) throw ParseError("PGM dimensions must be >= 1", pos);
  if (maxval < 1 || maxval > 65535) throw ParseError("PGM maxval must be in [1,65535]", pos);
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw ParseError("PGM header: expected whitespace after maxval", pos);
  }
  ++pos;

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  const std::size_t need = count * bytes_per_sample;
  if (bytes.size() - pos < need) {
    throw TruncatedError("PGM payload truncated: need " + std::to_string(need) +
                         " bytes, have " + std::to_string(bytes.size() - pos));
  }
  std::vector<double> data(count);
  const double scale = static_cast<double>(maxval);
  for (std::size_t i = 0; i < count; ++i) {
    long p;
    if (bytes_per_sample == 1) {
      p = bytes[pos + i];
    } else {
      p = (static_cast<long>(bytes[pos + 2 * i]) << 8) | bytes[pos + 2 * i + 1];
    }
    if (p > maxval) throw ParseError("PGM sample exceeds maxval", pos + i * bytes_per_sample);
    data[i] = static_cast<double>(p) / scale;
  }
  return SemanticMap(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

inline SemanticMap read_pgm(const std::filesystem::path& path) {
  return parse_pgm(detail::read_all(path));
}

// 8-bit binary PGM, maxval 255, samples round(v * 255).
inline std::vector<std::uint8_t> format_pgm(const SemanticMap& map) {
  const std::string header = "P5\n" + std::to_string(map.width()) + " " +
                             std::to_string(map.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + map.size());
  for (double v : map.pixels()) out.push_back(quantize_byte(v));
  return out;
}

inline void write_bytes(const std::filesystem::path& path,
                        const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_pgm(const SemanticMap& map, const std::filesystem::path& path) {
  write_bytes(path, format_pgm(map));
}

// ---------------------------------------------------------------------------
// Resampling

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Output pixel = mean of its d x d source block; edge blocks average only the
// pixels present. Output is Soft, except that d = 1 returns the input as is.
inline SemanticMap box_downscale(const SemanticMap& map, int d) {
  if (d < 1) throw DomainError("downscale factor must be >= 1, got " + std::to_string(d));
  if (d == 1) return map;
  const int ow = ceil_div(map.width(), d);
  const int oh = ceil_div(map.height(), d);
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int by = 0; by < oh; ++by) {
    const int y1 = std::min(map.height(), (by + 1) * d);
    for (int bx = 0; bx < ow; ++bx) {
      const int x1 = std::min(map.width(), (bx + 1) * d);
      double sum = 0.0;
      int n = 0;
      for (int y = by * d; y < y1; ++y) {
        for (int x = bx * d; x < x1; ++x) {
          sum += map.at(x, y);
          ++n;
        }
      }
      out[static_cast<std::size_t>(by) * ow + bx] = std::clamp(sum / n, 0.0, 1.0);
    }
  }
  return SemanticMap(ow, oh, std::move(out));
}

namespace detail {

// Corner-aligned sample position of target index i in a source axis. A
// single-sample target axis samples the source centre.
inline double source_coord(int i, int target_len, int source_len) {
  if (source_len == 1) return 0.0;
  if (target_len == 1) return 0.5 * (source_len - 1);
  return static_cast<double>(i) * (source_len - 1) / (target_len - 1);
}

}  // namespace detail

// Bilinear interpolation on a corner-aligned grid: target corners coincide
// with source corners. Kind is preserved only when the target resolution is
// the source resolution; otherwise the result is Soft.
inline SemanticMap bilinear_upscale(const SemanticMap& map, Resolution target) {
  if (target.width < 1 || target.height < 1) {
    throw DomainError("target resolution must be >= 1x1");
  }
  if (target == map.resolution()) return map;
  std::vector<double> out(target.area());
  for (int ty = 0; ty < target.height; ++ty) {
    const double sy = detail::source_coord(ty, target.height, map.height());
    const int y0 = std::min(static_cast<int>(std::floor(sy)), map.height() - 1);
    const int y1 = std::min(y0 + 1, map.height() - 1);
    const double fy = sy - y0;
    for (int tx = 0; tx < target.width; ++tx) {
      const double sx = detail::source_coord(tx, target.width, map.width());
      const int x0 = std::min(static_cast<int>(std::floor(sx)), map.width() - 1);
      const int x1 = std::min(x0 + 1, map.width() - 1);
      const double fx = sx - x0;
      const double top = std::lerp(map.at(x0, y0), map.at(x1, y0), fx);
      const double bottom = std::lerp(map.at(x0, y1), map.at(x1, y1), fx);
      out[static_cast<std::size_t>(ty) * target.width + tx] =
          std::clamp(std::lerp(top, bottom, fy), 0.0, 1.0);
    }
  }
  return SemanticMap(target.width, target.height, std::move(out));
}

}  // namespace semcom

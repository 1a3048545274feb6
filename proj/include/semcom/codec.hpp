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

// Downscale codec: a semantic map is compressed by box-downscaling with
// factor d per dimension and sent as one byte per encoded pixel behind a
// fixed 16-byte header.
//
// Wire format (all multi-byte fields big-endian):
//   0  "SMAP"
//   4  original width  (u16)   6  original height (u16)
//   8  encoded width   (u16)  10  encoded height  (u16)
//  12  factor d (u8)  13  kind tag (u8: 0 soft, 1 binary, 2 labels)
//  14  K (u8, 0 unless labels)  15  reserved, zero
//  16  payload, row-major, encoded width * height bytes

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/image.hpp"

namespace semcom {

inline constexpr std::size_t kPayloadHeaderBytes = 16;

struct EncodedPayload {
  Resolution original;
  Resolution encoded;
  int factor = 1;
  MapKind kind;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const EncodedPayload&, const EncodedPayload&) = default;
};

struct CostModel {
  std::size_t header_bytes = kPayloadHeaderBytes;
  std::size_t bytes_per_pixel = 1;
};

inline std::size_t cost_bytes(const EncodedPayload& p, const CostModel& model = {}) {
  return model.header_bytes + p.payload.size() * model.bytes_per_pixel;
}

// Cost of sending a map of resolution `res` at factor d, without encoding it.
inline std::size_t cost_bytes(Resolution res, int d, const CostModel& model = {}) {
  if (d < 1) throw DomainError("factor must be >= 1");
  const std::size_t pixels = static_cast<std::size_t>(ceil_div(res.width, d)) *
                             static_cast<std::size_t>(ceil_div(res.height, d));
  return model.header_bytes + pixels * model.bytes_per_pixel;
}

inline EncodedPayload encode(const SemanticMap& map, int d) {
  if (d < 1) throw DomainError("encode factor must be >= 1, got " + std::to_string(d));
  if (d > 255) throw DomainError("encode factor must fit in one byte, got " + std::to_string(d));
  if (map.width() > 0xFFFF || map.height() > 0xFFFF) {
    throw DomainError("map too large for the 16-bit wire header");
  }
  if (map.kind().is_labels() && map.kind().levels > 255) {
    throw DomainError("label count must fit in one byte");
  }
  const SemanticMap small = box_downscale(map, d);
  EncodedPayload out;
  out.original = map.resolution();
  out.encoded = small.resolution();
  out.factor = d;
  out.kind = map.kind();
  out.payload.reserve(small.size());
  for (double v : small.pixels()) out.payload.push_back(quantize_byte(v));
  return out;
}

// Re-imposes a kind on a soft reconstruction: binary maps are thresholded at
// 0.5, label maps snapped to the nearest of their K levels.
inline SemanticMap restore_kind(std::vector<double> data, int width, int height, MapKind kind) {
  switch (kind.tag) {
    case MapKindTag::kSoft:
      break;
    case MapKindTag::kBinary:
      for (double& v : data) v = v >= 0.5 ? 1.0 : 0.0;
      break;
    case MapKindTag::kLabels:
      for (double& v : data) v = snap_to_level(v, kind.levels);
      break;
  }
  return SemanticMap(width, height, std::move(data), kind);
}

inline SemanticMap decode(const EncodedPayload& p) {
  if (p.factor < 1) throw CorruptPayloadError("payload factor must be >= 1");
  if (p.original.width < 1 || p.original.height < 1) {
    throw CorruptPayloadError("payload original resolution must be >= 1x1");
  }
  const Resolution expect{ceil_div(p.original.width, p.factor),
                          ceil_div(p.original.height, p.factor)};
  if (!(p.encoded == expect)) {
    throw CorruptPayloadError("encoded resolution does not match original / factor");
  }
  if (p.payload.size() != p.encoded.area()) {
    throw CorruptPayloadError("payload holds " + std::to_string(p.payload.size()) +
                              " bytes, header implies " + std::to_string(p.encoded.area()));
  }
  std::vector<double> small(p.payload.size());
  for (std::size_t i = 0; i < small.size(); ++i) small[i] = p.payload[i] / 255.0;
  const SemanticMap up = bilinear_upscale(
      SemanticMap(p.encoded.width, p.encoded.height, std::move(small)), p.original);
  return restore_kind(up.data(), up.width(), up.height(), p.kind);
}

inline std::vector<std::uint8_t> serialize(const EncodedPayload& p) {
  std::vector<std::uint8_t> out(kPayloadHeaderBytes + p.payload.size(), 0);
  auto u16 = [&out](std::size_t at, int v) {
    out[at] = static_cast<std::uint8_t>((v >> 8) & 0xFF);
    out[at + 1] = static_cast<std::uint8_t>(v & 0xFF);
  };
  out[0] = 'S';
  out[1] = 'M';
  out[2] = 'A';
  out[3] = 'P';
  u16(4, p.original.width);
  u16(6, p.original.height);
  u16(8, p.encoded.width);
  u16(10, p.encoded.height);
  out[12] = static_cast<std::uint8_t>(p.factor);
  out[13] = static_cast<std::uint8_t>(p.kind.tag);
  out[14] = static_cast<std::uint8_t>(p.kind.is_labels() ? p.kind.levels : 0);
  std::copy(p.payload.begin(), p.payload.end(), out.begin() + kPayloadHeaderBytes);
  return out;
}

inline EncodedPayload parse_payload(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kPayloadHeaderBytes) throw CorruptPayloadError("payload shorter than header");
  if (bytes[0] != 'S' || bytes[1] != 'M' || bytes[2] != 'A' || bytes[3] != 'P') {
    throw CorruptPayloadError("bad payload magic");
  }
  auto u16 = [&bytes](std::size_t at) { return (bytes[at] << 8) | bytes[at + 1]; };
  EncodedPayload p;
  p.original = {u16(4), u16(6)};
  p.encoded = {u16(8), u16(10)};
  p.factor = bytes[12];
  switch (bytes[13]) {
    case 0: p.kind = MapKind::soft(); break;
    case 1: p.kind = MapKind::binary(); break;
    case 2:
      if (bytes[14] < 2) throw CorruptPayloadError("label payload with K < 2");
      p.kind = MapKind::labels(bytes[14]);
      break;
    default: throw CorruptPayloadError("unknown kind tag " + std::to_string(bytes[13]));
  }
  if (bytes[13] != 2 && bytes[14] != 0) throw CorruptPayloadError("K set for non-label payload");
  if (bytes[15] != 0) throw CorruptPayloadError("reserved header byte is not zero");
  p.payload.assign(bytes.begin() + kPayloadHeaderBytes, bytes.end());
  if (p.payload.size() != p.encoded.area()) {
    throw CorruptPayloadError("payload length does not match encoded resolution");
  }
  return p;
}

}  // namespace semcom

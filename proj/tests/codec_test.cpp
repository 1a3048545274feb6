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

#include "semcom/codec.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "semcom/extractors.hpp"

namespace semcom {
namespace {

TEST(EncodeTest, FactorFourCompressesSixteenTimes) {
  const SemanticMap m = SemanticMap::filled(512, 512, 0.2);
  const EncodedPayload full = encode(m, 1);
  const EncodedPayload small = encode(m, 4);
  EXPECT_EQ(small.payload.size(), 128u * 128u);
  EXPECT_EQ(full.payload.size(), 512u * 512u);
  EXPECT_EQ(full.payload.size(), 16 * small.payload.size());
  EXPECT_EQ(cost_bytes(small), 16400u);
  EXPECT_EQ(cost_bytes(m.resolution(), 4), 16400u);
}

TEST(EncodeTest, CeilingArithmetic) {
  const EncodedPayload p = encode(SemanticMap::filled(10, 10, 0.0), 3);
  EXPECT_EQ(p.encoded, (Resolution{4, 4}));
  EXPECT_EQ(p.payload.size(), 16u);
  EXPECT_EQ(cost_bytes(encode(SemanticMap(), 1)), 17u);
}

TEST(EncodeTest, RejectsBadFactor) {
  EXPECT_THROW(encode(SemanticMap(), 0), DomainError);
  EXPECT_THROW(cost_bytes(Resolution{4, 4}, 0), DomainError);
}

TEST(EncodeTest, CostNonIncreasingInFactor) {
  for (const Resolution res : {Resolution{512, 512}, Resolution{37, 91}, Resolution{1, 5}}) {
    for (int d = 1; d < 40; ++d) EXPECT_GE(cost_bytes(res, d), cost_bytes(res, d + 1));
  }
}

TEST(EncodeTest, PayloadRatioBounds) {
  for (const Resolution res : {Resolution{48, 48}, Resolution{50, 33}, Resolution{7, 64}}) {
    const double full = static_cast<double>(res.area());
    for (int d = 1; d <= 8; ++d) {
      const double ratio = full / (static_cast<double>(ceil_div(res.width, d)) *
                                   ceil_div(res.height, d));
      if (res.width % d == 0 && res.height % d == 0) {
        EXPECT_EQ(ratio, static_cast<double>(d * d));
      } else {
        EXPECT_LE(ratio, d * d);
        EXPECT_GE(ratio * (1.0 + static_cast<double>(d) / res.width) *
                      (1.0 + static_cast<double>(d) / res.height),
                  d * d);
      }
    }
  }
}

TEST(DecodeTest, FactorOneWithinQuantizationStep) {
  Rng rng(1);
  const SemanticMap m = oracle::random_map(9, 13, rng);
  const SemanticMap back = decode(encode(m, 1));
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_LE(std::abs(back.pixels()[i] - m.pixels()[i]), 1.0 / 255.0);
  }
}

TEST(DecodeTest, ConstantSurvivesAnyFactor) {
  const SemanticMap m = SemanticMap::filled(17, 11, 0.5);
  for (int d = 1; d <= 6; ++d) {
    const SemanticMap out = decode(encode(m, d));
    for (double v : out.pixels()) EXPECT_NEAR(v, 0.5, 1.0 / 255.0);
  }
}

TEST(DecodeTest, RestoresResolutionAndKind) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(30)), h = 1 + static_cast<int>(rng.index(30));
    const SemanticMap soft = oracle::random_map(w, h, rng);
    const int d = 1 + static_cast<int>(rng.index(8));
    const MapKind kinds[] = {MapKind::soft(), MapKind::binary(), MapKind::labels(5)};
    for (const MapKind kind : kinds) {
      SemanticMap m = soft;
      if (kind.is_binary()) m = restore_kind(soft.data(), w, h, kind);
      if (kind.is_labels()) m = quantize_segmentation(soft, 5);
      const SemanticMap out = decode(encode(m, d));
      ASSERT_EQ(out.resolution(), m.resolution());
      ASSERT_EQ(out.kind(), m.kind());
    }
  }
}

TEST(DecodeTest, BinaryStaysBinary) {
  const SemanticMap m(4, 4, {0, 0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1}, MapKind::binary());
  for (int d = 1; d <= 4; ++d) {
    const SemanticMap out = decode(encode(m, d));
    EXPECT_TRUE(out.kind().is_binary());
    for (double v : out.pixels()) EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
}

TEST(DecodeTest, LengthMismatchIsCorrupt) {
  EncodedPayload p = encode(SemanticMap::filled(8, 8, 0.1), 2);
  p.payload.pop_back();
  EXPECT_THROW(decode(p), CorruptPayloadError);
  p = encode(SemanticMap::filled(8, 8, 0.1), 2);
  p.encoded.width = 5;
  EXPECT_THROW(decode(p), CorruptPayloadError);
}

TEST(WireFormatTest, HeaderLayout) {
  const EncodedPayload p = encode(quantize_segmentation(SemanticMap::filled(300, 2, 0.9), 3), 2);
  const auto bytes = serialize(p);
  ASSERT_EQ(bytes.size(), 16u + 150u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SMAP");
  EXPECT_EQ(bytes[4], 0x01);
  EXPECT_EQ(bytes[5], 0x2C);
  EXPECT_EQ(bytes[7], 2);
  EXPECT_EQ(bytes[9], 150);
  EXPECT_EQ(bytes[11], 1);
  EXPECT_EQ(bytes[12], 2);
  EXPECT_EQ(bytes[13], 2);
  EXPECT_EQ(bytes[14], 3);
  EXPECT_EQ(bytes[15], 0);
}

TEST(WireFormatTest, SerializationRoundTripIsExact) {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(40)), h = 1 + static_cast<int>(rng.index(40));
    SemanticMap m = oracle::random_map(w, h, rng);
    if (trial % 3 == 1) m = restore_kind(m.data(), w, h, MapKind::binary());
    if (trial % 3 == 2) m = quantize_segmentation(m, 2 + static_cast<int>(rng.index(10)));
    const EncodedPayload p = encode(m, 1 + static_cast<int>(rng.index(6)));
    EXPECT_EQ(parse_payload(serialize(p)), p);
  }
}

TEST(WireFormatTest, RejectsMalformedBytes) {
  auto bytes = serialize(encode(SemanticMap::filled(4, 4, 0.3), 2));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(parse_payload(bad), CorruptPayloadError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(parse_payload(bad), CorruptPayloadError);
  bad = bytes;
  bad[13] = 7;
  EXPECT_THROW(parse_payload(bad), CorruptPayloadError);
  bad = bytes;
  bad[15] = 1;
  EXPECT_THROW(parse_payload(bad), CorruptPayloadError);
  EXPECT_THROW(parse_payload({'S', 'M'}), CorruptPayloadError);
}

}  // namespace
}  // namespace semcom

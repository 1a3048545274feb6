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

#include "semcom/image.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace semcom {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "semcom_image_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_raw(const fs::path& path, const std::string& header, const std::vector<std::uint8_t>& payload) {
  std::ofstream out(path, std::ios::binary);
  out << header;
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
}

TEST(SemanticMapTest, RejectsInvariantViolations) {
  EXPECT_THROW(SemanticMap(0, 1, {}), DomainError);
  EXPECT_THROW(SemanticMap(2, 2, {0.0, 0.0, 0.0}), ShapeError);
  EXPECT_THROW(SemanticMap(1, 1, {1.5}), DomainError);
  EXPECT_THROW(SemanticMap(1, 1, {0.5}, MapKind::binary()), DomainError);
  EXPECT_THROW(SemanticMap(1, 1, {0.4}, MapKind::labels(3)), DomainError);
  EXPECT_NO_THROW(SemanticMap(1, 3, {0.0, 0.5, 1.0}, MapKind::labels(3)));
  EXPECT_THROW(MapKind::labels(1), DomainError);
}

TEST(PgmTest, ReadsScaledByMaxval) {
  const auto path = temp_path("checker.pgm");
  write_raw(path, "P5\n2 2\n255\n", {0, 255, 255, 0});
  const SemanticMap m = read_pgm(path);
  ASSERT_EQ(m.width(), 2);
  ASSERT_EQ(m.height(), 2);
  EXPECT_EQ(m.data(), (std::vector<double>{0, 1, 1, 0}));
  EXPECT_TRUE(m.kind().is_soft());
}

TEST(PgmTest, HandlesCommentsAndSixteenBitSamples) {
  const auto path = temp_path("wide.pgm");
  write_raw(path, "P5 # a comment\n2 1\n# another\n1000\n", {0x01, 0xF4, 0x03, 0xE8});
  const SemanticMap m = read_pgm(path);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(m.at(1, 0), 1.0);
}

TEST(PgmTest, AsciiMagicIsParseError) {
  const auto path = temp_path("ascii.pgm");
  write_raw(path, "P2\n2 2\n255\n0 1 2 3\n", {});
  try {
    read_pgm(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(PgmTest, MalformedHeaderReportsOffset) {
  const auto path = temp_path("bad_header.pgm");
  write_raw(path, "P5\n4 x\n255\n", {});
  try {
    read_pgm(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
}

TEST(PgmTest, ShortPayloadIsTruncated) {
  const auto path = temp_path("short.pgm");
  write_raw(path, "P5\n4 4\n255\n", std::vector<std::uint8_t>(8, 7));
  EXPECT_THROW(read_pgm(path), TruncatedError);
}

TEST(PgmTest, MissingFileIsIoError) {
  EXPECT_THROW(read_pgm(temp_path("does_not_exist.pgm")), IoError);
}

TEST(PgmTest, WriteQuantizesToBytes) {
  const auto half = format_pgm(SemanticMap::filled(4, 4, 0.5));
  const std::string header = "P5\n4 4\n255\n";
  ASSERT_EQ(half.size(), header.size() + 16);
  for (std::size_t i = header.size(); i < half.size(); ++i) {
    EXPECT_TRUE(half[i] == 127 || half[i] == 128);
  }
  const auto binary = format_pgm(SemanticMap(2, 1, {0.0, 1.0}, MapKind::binary()));
  EXPECT_EQ(binary[binary.size() - 2], 0);
  EXPECT_EQ(binary.back(), 255);
  const auto one = format_pgm(SemanticMap(1, 1, {1.0}));
  EXPECT_EQ(one.back(), 255);
}

TEST(PgmTest, UnwritablePathIsIoError) {
  EXPECT_THROW(write_pgm(SemanticMap(), "/nonexistent_dir/x/y.pgm"), IoError);
}

TEST(PgmTest, RoundTripWithinOneQuantizationStep) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(17));
    const int h = 1 + static_cast<int>(rng.index(17));
    const SemanticMap m = oracle::random_map(w, h, rng);
    const auto path = temp_path("roundtrip.pgm");
    write_pgm(m, path);
    const SemanticMap back = read_pgm(path);
    ASSERT_EQ(back.resolution(), m.resolution());
    for (std::size_t i = 0; i < m.size(); ++i) {
      EXPECT_LE(std::abs(back.pixels()[i] - m.pixels()[i]), 1.0 / 255.0 + 1e-15);
    }
  }
}

TEST(BoxDownscaleTest, AveragesBlocks) {
  const SemanticMap m(2, 2, {0, 1, 1, 0});
  const SemanticMap d = box_downscale(m, 2);
  ASSERT_EQ(d.resolution(), (Resolution{1, 1}));
  EXPECT_DOUBLE_EQ(d.at(0, 0), 0.5);
}

TEST(BoxDownscaleTest, FactorOneIsIdentity) {
  Rng rng(3);
  const SemanticMap m = oracle::random_map(5, 7, rng);
  EXPECT_EQ(box_downscale(m, 1), m);
}

TEST(BoxDownscaleTest, PartialEdgeBlocksAverageOnlyPresentPixels) {
  const SemanticMap d = box_downscale(SemanticMap::filled(3, 3, 1.0), 2);
  ASSERT_EQ(d.resolution(), (Resolution{2, 2}));
  for (double v : d.pixels()) EXPECT_DOUBLE_EQ(v, 1.0);

  // Right column block holds only the pixels x = 2: values 0.2 and 0.6.
  const SemanticMap m(3, 2, {0.0, 0.0, 0.2, 0.0, 0.0, 0.6});
  EXPECT_DOUBLE_EQ(box_downscale(m, 2).at(1, 0), 0.4);
}

TEST(BoxDownscaleTest, ZeroFactorIsDomainError) {
  EXPECT_THROW(box_downscale(SemanticMap(), 0), DomainError);
}

TEST(BoxDownscaleTest, OutputIsSoft) {
  const SemanticMap m(2, 2, {0, 1, 1, 1}, MapKind::binary());
  EXPECT_TRUE(box_downscale(m, 2).kind().is_soft());
}

TEST(BoxDownscaleTest, PreservesMeanWhenFactorDivides) {
  Rng rng(5);
  for (int d : {2, 3, 4}) {
    const SemanticMap m = oracle::random_map(12, 24, rng);
    EXPECT_NEAR(box_downscale(m, d).mean(), m.mean(), 1e-12) << "d=" << d;
  }
}

TEST(BilinearUpscaleTest, ConstantStaysConstant) {
  const SemanticMap m = SemanticMap::filled(3, 2, 0.3);
  const SemanticMap up = bilinear_upscale(m, {11, 7});
  for (double v : up.pixels()) EXPECT_EQ(v, 0.3);
}

TEST(BilinearUpscaleTest, SameResolutionIsIdentity) {
  Rng rng(8);
  const SemanticMap m = oracle::random_map(6, 4, rng);
  EXPECT_EQ(bilinear_upscale(m, m.resolution()), m);
}

TEST(BilinearUpscaleTest, CornerAlignedWeights) {
  const SemanticMap m(1, 2, {0.0, 1.0});
  const SemanticMap up = bilinear_upscale(m, {1, 3});
  EXPECT_EQ(up.data(), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(BilinearUpscaleTest, RejectsEmptyTarget) {
  EXPECT_THROW(bilinear_upscale(SemanticMap(), {0, 3}), DomainError);
}

TEST(ResamplingProperty, OutputsStayInUnitRange) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const SemanticMap m = oracle::random_map(1 + rng.index(20), 1 + rng.index(20), rng);
    const int d = 1 + static_cast<int>(rng.index(6));
    const SemanticMap small = box_downscale(m, d);
    const SemanticMap up = bilinear_upscale(small, {1 + static_cast<int>(rng.index(40)),
                                                    1 + static_cast<int>(rng.index(40))});
    for (double v : small.pixels()) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
    for (double v : up.pixels()) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
  }
}

TEST(ResamplingProperty, FactorOneRoundTripIsExact) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SemanticMap m = oracle::random_map(1 + rng.index(12), 1 + rng.index(12), rng);
    EXPECT_EQ(bilinear_upscale(box_downscale(m, 1), m.resolution()), m);
  }
}

}  // namespace
}  // namespace semcom

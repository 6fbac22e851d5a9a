// Copyright 2026 The CBE Authors.
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

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "cbe/errors.hpp"
#include "cbe/io.hpp"
#include "oracles.hpp"

namespace cbe {
namespace {

using io::Bytes;

void expect_format_error(const Bytes& bytes, std::function<void(const Bytes&)> parse) {
  EXPECT_THROW(parse(bytes), FormatError);
}

TEST(ModelFormat, HandBuiltLayout) {
  CirculantParams p;
  p.d = 3;
  p.k = 2;
  p.r = {1.0, -2.0, 0.5};
  p.signs = {1, -1, 1};
  p.kind = ModelKind::kOptimized;
  p.seed = 0x0102030405060708ULL;
  const Bytes b = io::serialize_model(p);
  ASSERT_EQ(b.size(), 4u + 2 + 4 + 4 + 1 + 24 + 1 + 8);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "CBE1");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 3);
  EXPECT_EQ(b[10], 2);
  EXPECT_EQ(b[14], 0b101);
  double r1 = 0.0;
  std::memcpy(&r1, b.data() + 15 + 8, 8);
  EXPECT_EQ(r1, -2.0);
  EXPECT_EQ(b[39], 1);
  EXPECT_EQ(b[40], 0x08);
  EXPECT_EQ(b[47], 0x01);
  EXPECT_EQ(io::deserialize_model(b), p);
}

TEST(ModelFormat, RoundTripIsByteExact) {
  for (std::size_t d : {1, 7, 8, 9, 64, 257}) {
    CirculantParams p = sample_params(d, (d + 1) / 2, d * 31);
    p.kind = ModelKind::kSemiSupervised;
    const Bytes b = io::serialize_model(p);
    const CirculantParams back = io::deserialize_model(b);
    EXPECT_EQ(back, p);
    EXPECT_EQ(io::serialize_model(back), b);
  }
}

TEST(ModelFormat, EveryMagicCorruptionIsDetected) {
  const Bytes good = io::serialize_model(sample_params(16, 8, 1));
  for (std::size_t i = 0; i < 4; ++i) {
    for (int bit = 0; bit < 8; ++bit) {
      Bytes bad = good;
      bad[i] ^= static_cast<std::uint8_t>(1u << bit);
      try {
        io::deserialize_model(bad);
        ADD_FAILURE() << "corruption at byte " << i << " not detected";
      } catch (const FormatError& e) {
        EXPECT_EQ(e.offset(), i);
      }
    }
  }
}

TEST(ModelFormat, TruncationAndTrailingBytes) {
  const Bytes good = io::serialize_model(sample_params(10, 4, 2));
  for (std::size_t len = 0; len < good.size(); ++len) {
    expect_format_error(Bytes(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(len)),
                        [](const Bytes& b) { io::deserialize_model(b); });
  }
  Bytes longer = good;
  longer.push_back(0);
  expect_format_error(longer, [](const Bytes& b) { io::deserialize_model(b); });
}

TEST(ModelFormat, RejectsBadHeaderFields) {
  const Bytes good = io::serialize_model(sample_params(10, 4, 3));
  Bytes bad_version = good;
  bad_version[4] = 2;
  expect_format_error(bad_version, [](const Bytes& b) { io::deserialize_model(b); });
  Bytes bad_k = good;
  bad_k[10] = 11;
  expect_format_error(bad_k, [](const Bytes& b) { io::deserialize_model(b); });
  Bytes bad_kind = good;
  bad_kind[good.size() - 9] = 3;
  expect_format_error(bad_kind, [](const Bytes& b) { io::deserialize_model(b); });
}

TEST(DatasetFormat, RoundTripAndHeaderSize) {
  const DataMatrix x = testing::gaussian_rows(5, 7, 4);
  const Bytes b = io::serialize_dataset(x);
  EXPECT_EQ(b.size(), io::kDatasetHeaderBytes + 4 * 5 * 7);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "CBD1");
  const DataMatrix raw = io::deserialize_dataset(b, false);
  ASSERT_EQ(raw.rows(), 5u);
  for (std::size_t i = 0; i < x.values().size(); ++i)
    EXPECT_EQ(raw.values()[i], static_cast<double>(static_cast<float>(x.values()[i])));
  EXPECT_EQ(io::serialize_dataset(raw), b);
}

TEST(DatasetFormat, IngestionNormalizes) {
  const DataMatrix x(2, 2, {3.0, 4.0, 0.0, -2.0});
  const DataMatrix y = io::deserialize_dataset(io::serialize_dataset(x));
  EXPECT_NEAR(y(0, 0), 0.6, 1e-7);
  EXPECT_NEAR(y(0, 1), 0.8, 1e-7);
  EXPECT_EQ(y(1, 1), -1.0);
  const DataMatrix zero(1, 3);
  EXPECT_THROW(io::deserialize_dataset(io::serialize_dataset(zero)), FormatError);
}

TEST(DatasetFormat, SizeMismatchAndMagic) {
  const Bytes good = io::serialize_dataset(testing::gaussian_rows(3, 4, 5));
  for (std::size_t len : {0ul, 3ul, 15ul, 16ul, good.size() - 1}) {
    EXPECT_THROW(io::deserialize_dataset(Bytes(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(len))),
                 FormatError);
  }
  Bytes huge_n = good;
  huge_n[11] = 0x7f;
  EXPECT_THROW(io::deserialize_dataset(huge_n), FormatError);
  Bytes bad = good;
  bad[3] = '2';
  EXPECT_THROW(io::deserialize_dataset(bad), FormatError);
}

TEST(CodesFormat, RoundTripAndLayout) {
  BinaryCodeMatrix c(3, 70);
  c.set(0, 0, true);
  c.set(2, 69, true);
  const Bytes b = io::serialize_codes(c);
  EXPECT_EQ(b.size(), io::kCodesHeaderBytes + 3 * 2 * 8);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "CBC1");
  EXPECT_EQ(b[4], 3);
  EXPECT_EQ(b[12], 70);
  EXPECT_EQ(b[16], 1);
  EXPECT_EQ(b[16 + 5 * 8], 0x20);
  EXPECT_EQ(io::deserialize_codes(b), c);
}

TEST(CodesFormat, RejectsPaddingBitsAndTruncation) {
  BinaryCodeMatrix c(2, 10);
  Bytes b = io::serialize_codes(c);
  EXPECT_NO_THROW(io::deserialize_codes(b));
  Bytes padded = b;
  padded[16 + 8 + 1] = 0x04;  // bit 10 of row 1
  try {
    io::deserialize_codes(padded);
    ADD_FAILURE() << "padding bit accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 24u);
  }
  b.pop_back();
  EXPECT_THROW(io::deserialize_codes(b), FormatError);
}

TEST(Pairs, ParsesTagsCommentsAndBlankLines) {
  const PairConstraints p = io::parse_pairs("# labels\nS 0 1\n\nD 2 3\n  S 4 5  \n");
  EXPECT_EQ(p.similar, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {4, 5}}));
  EXPECT_EQ(p.dissimilar, (std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}}));
}

TEST(Pairs, RejectsMalformedLines) {
  for (const char* text : {"X 0 1\n", "S 0\n", "S 0 1 2\n", "D -1 2\n", "S a b\n"}) {
    EXPECT_THROW(io::parse_pairs(text), FormatError) << text;
  }
  try {
    io::parse_pairs("S 0 1\nQ 1 2\n");
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
}

TEST(Files, SaveLoadAndMissingPath) {
  const auto dir = std::filesystem::temp_directory_path() / "cbe_io_test";
  std::filesystem::create_directories(dir);
  const CirculantParams p = sample_params(12, 5, 6);
  io::save_model(dir / "m.cbe", p);
  EXPECT_EQ(io::load_model(dir / "m.cbe"), p);
  io::write_text(dir / "p.txt", "S 0 1\n");
  EXPECT_EQ(io::load_pairs(dir / "p.txt").similar.size(), 1u);
  EXPECT_THROW(io::load_model(dir / "missing.cbe"), IoError);
  EXPECT_THROW(io::save_model(dir / "no_such_dir" / "m.cbe", p), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace cbe

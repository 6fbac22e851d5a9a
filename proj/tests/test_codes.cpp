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

#include <random>

#include "cbe/codes.hpp"
#include "cbe/data.hpp"
#include "cbe/errors.hpp"

namespace cbe {
namespace {

std::vector<int> random_logical(std::size_t k, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> v(k);
  for (auto& b : v) b = coin(rng) ? 1 : -1;
  return v;
}

std::size_t unpacked_disagreements(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

TEST(Hamming, ThreeBitExample) {
  const auto a = pack_logical(std::vector<int>{1, 1, -1});
  const auto b = pack_logical(std::vector<int>{1, -1, -1});
  EXPECT_EQ(hamming(a, b, 3), 1u);
  EXPECT_DOUBLE_EQ(normalized_hamming(a, b, 3), 1.0 / 3.0);
}

TEST(Hamming, SelfDistanceIsZero) {
  std::mt19937_64 rng(1);
  const auto a = pack_logical(random_logical(777, rng));
  EXPECT_EQ(hamming(a, a, 777), 0u);
  EXPECT_EQ(normalized_hamming(a, a, 777), 0.0);
}

TEST(Hamming, MatchesUnpackedComparison) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto la = random_logical(1000, rng);
    const auto lb = random_logical(1000, rng);
    const auto a = pack_logical(la);
    const auto b = pack_logical(lb);
    EXPECT_EQ(hamming(a, b, 1000), unpacked_disagreements(la, lb));
  }
}

TEST(Hamming, PrefixLengthsNotMultipleOf64) {
  std::mt19937_64 rng(3);
  const auto la = random_logical(200, rng);
  const auto lb = random_logical(200, rng);
  const auto a = pack_logical(la);
  const auto b = pack_logical(lb);
  for (std::size_t k : {1, 5, 63, 64, 65, 127, 128, 129, 200}) {
    const std::vector<int> pa(la.begin(), la.begin() + static_cast<std::ptrdiff_t>(k));
    const std::vector<int> pb(lb.begin(), lb.begin() + static_cast<std::ptrdiff_t>(k));
    EXPECT_EQ(hamming(a, b, k), unpacked_disagreements(pa, pb)) << "k=" << k;
    const double nh = normalized_hamming(a, b, k);
    EXPECT_GE(nh, 0.0);
    EXPECT_LE(nh, 1.0);
  }
}

TEST(Hamming, MismatchedLengthsThrow) {
  const auto a = pack_logical(std::vector<int>{1, 1, -1});
  const auto b = pack_logical(std::vector<int>{1, -1});
  EXPECT_THROW(hamming(a, 3, b, 2), DimensionError);
  EXPECT_EQ(hamming(a, 3, a, 3), 0u);
  EXPECT_THROW(normalized_hamming(a, a, 0), DimensionError);
}

TEST(PackSigns, ZeroMapsToPlusOne) {
  const auto w = pack_signs(std::vector<double>{0.0, -0.0, -1e-300, 2.0}, 4);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], 0b1011u);
}

TEST(PackSigns, PaddingBitsStayZero) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (std::size_t k : {1, 7, 63, 64, 65, 100, 130}) {
    std::vector<double> v(k);
    for (auto& x : v) x = std::abs(normal(rng)) + 1.0;
    const auto w = pack_signs(v, k);
    ASSERT_EQ(w.size(), words_for_bits(k));
    if (k % 64 != 0) {
      EXPECT_EQ(w.back() >> (k % 64), 0u) << "k=" << k;
    }
  }
  EXPECT_THROW(pack_signs(std::vector<double>{1.0}, 2), DimensionError);
}

TEST(BinaryCodeMatrix, LayoutIsLsbFirst) {
  BinaryCodeMatrix m(2, 70);
  EXPECT_EQ(m.words_per_row(), 2u);
  EXPECT_EQ(m.logical(0, 0), -1);
  m.set(1, 0, true);
  m.set(1, 65, true);
  EXPECT_EQ(m.row(1)[0], 1u);
  EXPECT_EQ(m.row(1)[1], 2u);
  EXPECT_EQ(m.logical(1, 65), 1);
  m.set(1, 65, false);
  EXPECT_EQ(m.row(1)[1], 0u);
  EXPECT_EQ(m.row(0)[0], 0u);
}

TEST(DataMatrix, NormalizedRowsHaveUnitNorm) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> v(20 * 9);
  for (auto& x : v) x = 5.0 * normal(rng);
  const DataMatrix m = DataMatrix::normalized(20, 9, v);
  for (std::size_t i = 0; i < 20; ++i) {
    double s = 0.0;
    for (double x : m.row(i)) s += x * x;
    EXPECT_NEAR(std::sqrt(s), 1.0, 1e-12);
  }
}

TEST(DataMatrix, RejectsZeroAndNonFiniteRows) {
  EXPECT_THROW(DataMatrix::normalized(2, 2, {1.0, 0.0, 0.0, 0.0}), ParameterError);
  EXPECT_THROW(DataMatrix::normalized(1, 2, {std::nan(""), 1.0}), ParameterError);
  EXPECT_THROW(DataMatrix(2, 2, std::vector<double>(3)), DimensionError);
}

TEST(DataMatrix, SelectAndSignFlip) {
  const DataMatrix m(3, 2, {1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> idx = {2, 0};
  const DataMatrix s = m.select(idx);
  EXPECT_EQ(s.values(), (std::vector<double>{5, 6, 1, 2}));
  const std::vector<signed char> signs = {-1, 1};
  EXPECT_EQ(m.sign_flipped(signs).values(), (std::vector<double>{-1, 2, -3, 4, -5, 6}));
  const std::vector<std::size_t> bad = {3};
  EXPECT_THROW(m.select(bad), ParameterError);
}

}  // namespace
}  // namespace cbe

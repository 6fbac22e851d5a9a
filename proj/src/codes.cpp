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

#include "cbe/codes.hpp"

#include <string>

#include "cbe/errors.hpp"

namespace cbe {

BinaryCodeMatrix::BinaryCodeMatrix(std::size_t n, std::size_t k)
    : n_(n), k_(k), words_(words_for_bits(k)), data_(n * words_for_bits(k), 0) {}

void BinaryCodeMatrix::set(std::size_t i, std::size_t j, bool positive) noexcept {
  std::uint64_t& w = data_[i * words_ + j / 64];
  const std::uint64_t mask = std::uint64_t{1} << (j % 64);
  if (positive) {
    w |= mask;
  } else {
    w &= ~mask;
  }
}

std::vector<std::uint64_t> pack_signs(std::span<const double> values, std::size_t k) {
  if (k > values.size()) throw DimensionError("pack_signs: k exceeds number of values");
  std::vector<std::uint64_t> out(words_for_bits(k), 0);
  for (std::size_t j = 0; j < k; ++j) {
    if (values[j] >= 0.0) out[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return out;
}

std::vector<std::uint64_t> pack_logical(std::span<const int> logical) {
  std::vector<std::uint64_t> out(words_for_bits(logical.size()), 0);
  for (std::size_t j = 0; j < logical.size(); ++j) {
    if (logical[j] > 0) out[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return out;
}

std::size_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, std::size_t k) {
  const std::size_t full = k / 64;
  std::size_t count = 0;
  for (std::size_t w = 0; w < full; ++w) count += std::popcount(a[w] ^ b[w]);
  if (const std::size_t rem = k % 64; rem != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
    count += std::popcount((a[full] ^ b[full]) & mask);
  }
  return count;
}

double normalized_hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::size_t k) {
  if (k == 0) throw DimensionError("normalized_hamming: k must be >= 1");
  return static_cast<double>(hamming(a, b, k)) / static_cast<double>(k);
}

std::size_t hamming(std::span<const std::uint64_t> a, std::size_t ka, std::span<const std::uint64_t> b,
                    std::size_t kb) {
  if (ka != kb) {
    throw DimensionError("hamming: code lengths differ (" + std::to_string(ka) + " vs " +
                         std::to_string(kb) + ")");
  }
  if (a.size() < words_for_bits(ka) || b.size() < words_for_bits(kb)) {
    throw DimensionError("hamming: code row shorter than its declared bit count");
  }
  return hamming(a, b, ka);
}

}  // namespace cbe

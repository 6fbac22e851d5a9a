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

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cbe {

// Number of 64-bit words holding k bits.
constexpr std::size_t words_for_bits(std::size_t k) noexcept { return (k + 63) / 64; }

// n codes of k bits each. Bit j of a code lives in word j / 64 at position
// j % 64; a set bit means +1, a clear bit -1. Bits past k are always zero.
class BinaryCodeMatrix {
 public:
  BinaryCodeMatrix() = default;
  BinaryCodeMatrix(std::size_t n, std::size_t k);

  std::size_t rows() const noexcept { return n_; }
  std::size_t bits() const noexcept { return k_; }
  std::size_t words_per_row() const noexcept { return words_; }

  std::span<std::uint64_t> row(std::size_t i) noexcept { return {data_.data() + i * words_, words_}; }
  std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {data_.data() + i * words_, words_};
  }

  bool bit(std::size_t i, std::size_t j) const noexcept {
    return (data_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  // +1 or -1.
  int logical(std::size_t i, std::size_t j) const noexcept { return bit(i, j) ? 1 : -1; }
  void set(std::size_t i, std::size_t j, bool positive) noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return data_; }
  std::vector<std::uint64_t>& words() noexcept { return data_; }

  friend bool operator==(const BinaryCodeMatrix&, const BinaryCodeMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

// Packs the signs of `values` (value >= 0 -> bit set) into words_for_bits(k) words.
std::vector<std::uint64_t> pack_signs(std::span<const double> values, std::size_t k);

// Packs a +-1 vector.
std::vector<std::uint64_t> pack_logical(std::span<const int> logical);

// Number of differing bits among the first k. Both rows must hold at least
// words_for_bits(k) words.
std::size_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, std::size_t k);
double normalized_hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::size_t k);

// Checked variant for two code rows that carry their own bit counts.
std::size_t hamming(std::span<const std::uint64_t> a, std::size_t ka, std::span<const std::uint64_t> b,
                    std::size_t kb);

}  // namespace cbe

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

#include <cstddef>
#include <span>
#include <vector>

namespace cbe {

// Row-major n x d matrix of doubles. Construction does not normalize; use
// DataMatrix::normalized() for ingestion.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t n, std::size_t d);
  DataMatrix(std::size_t n, std::size_t d, std::vector<double> values);

  // Rescales every row to unit l2 norm. Throws ParameterError on a zero or
  // non-finite row.
  static DataMatrix normalized(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * d_, d_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * d_, d_}; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * d_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * d_ + j]; }

  const std::vector<double>& values() const noexcept { return values_; }

  void normalize_rows();

  // Copy of the rows selected by `indices`, in that order.
  DataMatrix select(std::span<const std::size_t> indices) const;

  // Each row multiplied elementwise by `signs`.
  DataMatrix sign_flipped(std::span<const signed char> signs) const;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
};

}  // namespace cbe

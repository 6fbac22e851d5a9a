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

#include "cbe/data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbe/errors.hpp"

namespace cbe {

DataMatrix::DataMatrix(std::size_t n, std::size_t d) : n_(n), d_(d), values_(n * d, 0.0) {}

DataMatrix::DataMatrix(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (values_.size() != n * d) {
    throw DimensionError("DataMatrix: expected " + std::to_string(n * d) + " values, got " +
                         std::to_string(values_.size()));
  }
}

DataMatrix DataMatrix::normalized(std::size_t n, std::size_t d, std::vector<double> values) {
  DataMatrix m(n, d, std::move(values));
  m.normalize_rows();
  return m;
}

void DataMatrix::normalize_rows() {
  for (std::size_t i = 0; i < n_; ++i) {
    auto x = row(i);
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (!(sq > 0.0) || !std::isfinite(sq)) {
      throw ParameterError("row " + std::to_string(i) + " has zero or non-finite norm");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : x) v *= inv;
  }
}

DataMatrix DataMatrix::select(std::span<const std::size_t> indices) const {
  DataMatrix out(indices.size(), d_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= n_) throw ParameterError("row index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

DataMatrix DataMatrix::sign_flipped(std::span<const signed char> signs) const {
  if (signs.size() != d_) throw DimensionError("sign_flipped: sign vector length mismatch");
  DataMatrix out = *this;
  for (std::size_t i = 0; i < n_; ++i) {
    auto x = out.row(i);
    for (std::size_t j = 0; j < d_; ++j) x[j] *= signs[j];
  }
  return out;
}

}  // namespace cbe

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
#include <cstdint>
#include <span>
#include <vector>

#include "cbe/codes.hpp"
#include "cbe/data.hpp"
#include "cbe/spectral.hpp"

namespace cbe {

// How a model's circulant vector was obtained. Values are the on-disk tag.
enum class ModelKind : std::uint8_t {
  kRandom = 0,
  kOptimized = 1,
  kSemiSupervised = 2,
};

// h(x) = sign(circ(r) * diag(signs) * x), truncated to the first k bits.
struct CirculantParams {
  std::vector<double> r;
  std::vector<signed char> signs;  // diagonal of the sign-flip matrix, each +-1
  std::size_t d = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  ModelKind kind = ModelKind::kRandom;

  // Throws ParameterError / DimensionError if any invariant is violated.
  void validate() const;

  friend bool operator==(const CirculantParams&, const CirculantParams&) = default;
};

// Standard normal r and uniform +-1 signs, both drawn from `seed`.
CirculantParams sample_params(std::size_t d, std::size_t k, std::uint64_t seed);

// Holds the spectrum of r so that many vectors can be projected cheaply.
class CirculantProjector {
 public:
  explicit CirculantProjector(const CirculantParams& params);

  std::size_t dim() const noexcept { return params_.d; }
  std::size_t bits() const noexcept { return params_.k; }

  // All d projections circ(r) * D * x.
  std::vector<double> project(std::span<const double> x) const;
  void project(std::span<const double> x, std::span<double> out) const;

  // First k signs, packed. sign(0) is taken as +1.
  std::vector<std::uint64_t> encode(std::span<const double> x) const;

 private:
  CirculantParams params_;
  CirculantOperator op_;
};

std::vector<std::uint64_t> encode(const CirculantParams& params, std::span<const double> x);

// Row i of the result is encode(params, X.row(i)). threads == 0 uses all cores.
BinaryCodeMatrix encode_batch(const CirculantParams& params, const DataMatrix& x, std::size_t threads = 1);

}  // namespace cbe

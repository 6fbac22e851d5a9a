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

#include "cbe/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cbe/errors.hpp"
#include "cbe/parallel.hpp"

namespace cbe {

void CirculantParams::validate() const {
  if (d == 0) throw ParameterError("d must be >= 1");
  if (k < 1 || k > d) {
    throw ParameterError("code length k=" + std::to_string(k) + " must satisfy 1 <= k <= d=" +
                         std::to_string(d));
  }
  if (r.size() != d) throw DimensionError("len(r) does not match d");
  if (signs.size() != d) throw DimensionError("len(signs) does not match d");
  for (double v : r)
    if (!std::isfinite(v)) throw ParameterError("circulant vector contains a non-finite value");
  for (signed char s : signs)
    if (s != 1 && s != -1) throw ParameterError("sign-flip entries must be +1 or -1");
}

CirculantParams sample_params(std::size_t d, std::size_t k, std::uint64_t seed) {
  if (d == 0) throw ParameterError("d must be >= 1");
  if (k < 1 || k > d) {
    throw ParameterError("code length k=" + std::to_string(k) + " must satisfy 1 <= k <= d=" +
                         std::to_string(d));
  }
  CirculantParams p;
  p.d = d;
  p.k = k;
  p.seed = seed;
  p.kind = ModelKind::kRandom;
  p.r.resize(d);
  p.signs.resize(d);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : p.r) v = normal(rng);
  std::bernoulli_distribution coin(0.5);
  for (auto& s : p.signs) s = coin(rng) ? 1 : -1;
  return p;
}

CirculantProjector::CirculantProjector(const CirculantParams& params)
    : params_((params.validate(), params)), op_(params_.r) {}

void CirculantProjector::project(std::span<const double> x, std::span<double> out) const {
  if (x.size() != params_.d) {
    throw DimensionError("input has dimension " + std::to_string(x.size()) + " but the model expects d=" +
                         std::to_string(params_.d));
  }
  thread_local std::vector<double> flipped;
  flipped.resize(params_.d);
  for (std::size_t j = 0; j < params_.d; ++j) flipped[j] = params_.signs[j] * x[j];
  op_.apply(flipped, out);
}

std::vector<double> CirculantProjector::project(std::span<const double> x) const {
  std::vector<double> out(params_.d);
  project(x, out);
  return out;
}

std::vector<std::uint64_t> CirculantProjector::encode(std::span<const double> x) const {
  thread_local std::vector<double> proj;
  proj.resize(params_.d);
  project(x, proj);
  return pack_signs(proj, params_.k);
}

std::vector<std::uint64_t> encode(const CirculantParams& params, std::span<const double> x) {
  return CirculantProjector(params).encode(x);
}

BinaryCodeMatrix encode_batch(const CirculantParams& params, const DataMatrix& x, std::size_t threads) {
  if (x.cols() != params.d) {
    throw DimensionError("data has dimension " + std::to_string(x.cols()) + " but the model expects d=" +
                         std::to_string(params.d));
  }
  const CirculantProjector projector(params);
  BinaryCodeMatrix codes(x.rows(), params.k);
  parallel_for(x.rows(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> proj(params.d);
    for (std::size_t i = begin; i < end; ++i) {
      projector.project(x.row(i), proj);
      auto dst = codes.row(i);
      std::fill(dst.begin(), dst.end(), 0);
      for (std::size_t j = 0; j < params.k; ++j) {
        if (proj[j] >= 0.0) dst[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  });
  return codes;
}

}  // namespace cbe

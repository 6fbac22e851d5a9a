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

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cbe/errors.hpp"
#include "cbe/eval.hpp"
#include "cbe/parallel.hpp"

namespace cbe {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void scale_to_unit(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

AnglePair make_angle_pair(std::size_t d, double theta, std::uint64_t seed) {
  if (d < 2) throw ParameterError("make_angle_pair: d must be >= 2");
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw ParameterError("make_angle_pair: theta=" + std::to_string(theta) + " is outside [0, pi]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> u(d), v(d);
  // Redraw in the (measure-zero) event of a degenerate Gram-Schmidt step.
  for (;;) {
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    scale_to_unit(u);
    const double proj = dot(u, v);
    for (std::size_t i = 0; i < d; ++i) v[i] -= proj * u[i];
    if (dot(v, v) > 1e-12) break;
  }
  scale_to_unit(v);

  AnglePair pair;
  pair.theta = theta;
  pair.x1 = u;
  pair.x2.resize(d);
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t i = 0; i < d; ++i) pair.x2[i] = c * u[i] + s * v[i];
  return pair;
}

VarianceReport simulate_variance(double theta, std::size_t k, std::size_t d, std::size_t inner_trials,
                                 std::size_t outer_trials, std::uint64_t seed, std::size_t threads) {
  if (k < 1 || k > d) throw ParameterError("simulate_variance: need 1 <= k <= d");
  if (inner_trials < 2) throw ParameterError("simulate_variance: need at least 2 inner trials");
  if (outer_trials < 1) throw ParameterError("simulate_variance: need at least 1 outer trial");

  std::vector<double> outer_mean(outer_trials), outer_var(outer_trials);
  parallel_for(outer_trials, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> h(inner_trials);
    for (std::size_t o = begin; o < end; ++o) {
      const AnglePair pair = make_angle_pair(d, theta, derive_seed(seed, o));
      for (std::size_t t = 0; t < inner_trials; ++t) {
        const CirculantProjector proj(sample_params(d, k, derive_seed(seed, o, t + 1)));
        h[t] = normalized_hamming(proj.encode(pair.x1), proj.encode(pair.x2), k);
      }
      double mean = 0.0;
      for (double v : h) mean += v;
      mean /= static_cast<double>(inner_trials);
      double ss = 0.0;
      for (double v : h) ss += (v - mean) * (v - mean);
      outer_mean[o] = mean;
      outer_var[o] = ss / static_cast<double>(inner_trials - 1);
    }
  });

  VarianceReport rep;
  rep.theta = theta;
  rep.k = k;
  rep.d = d;
  rep.inner_trials = inner_trials;
  rep.outer_trials = outer_trials;
  rep.seed = seed;
  for (std::size_t o = 0; o < outer_trials; ++o) {
    rep.sample_mean += outer_mean[o];
    rep.sample_var += outer_var[o];
  }
  rep.sample_mean /= static_cast<double>(outer_trials);
  rep.sample_var /= static_cast<double>(outer_trials);
  rep.analytic_mean = theta / std::numbers::pi;
  rep.analytic_var = theta * (std::numbers::pi - theta) / (static_cast<double>(k) * std::numbers::pi * std::numbers::pi);
  return rep;
}

nlohmann::json VarianceReport::to_json() const {
  return {
      {"theta", theta},
      {"k", k},
      {"d", d},
      {"inner_trials", inner_trials},
      {"outer_trials", outer_trials},
      {"seed", seed},
      {"sample_mean", sample_mean},
      {"sample_var", sample_var},
      {"analytic_mean", analytic_mean},
      {"analytic_var", analytic_var},
      {"variance_estimator", "per-pair sample variance (n-1) averaged over outer trials"},
  };
}

}  // namespace cbe

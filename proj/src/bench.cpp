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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "cbe/errors.hpp"
#include "cbe/eval.hpp"

namespace cbe {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
double median_ms(std::size_t warmup, std::size_t reps, Fn&& fn) {
  for (std::size_t i = 0; i < warmup; ++i) fn();
  std::vector<double> times(reps);
  for (auto& t : times) {
    const auto start = Clock::now();
    fn();
    t = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  return median(std::move(times));
}

}  // namespace

std::vector<BenchRow> bench_projection(const std::vector<std::size_t>& dims, const BenchConfig& config) {
  if (config.reps < 1 || config.circulant_reps < 1) throw ParameterError("bench: reps must be >= 1");
  std::vector<BenchRow> rows;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const std::size_t d = dims[di];
    if (d < 2) throw ParameterError("bench: d must be >= 2");
    BenchRow row;
    row.d = d;

    std::mt19937_64 rng(derive_seed(config.seed, di));
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (auto& v : x) v = normal(rng);
    x.normalize();
    std::vector<double> xv(x.data(), x.data() + d);

    const CirculantProjector circ(sample_params(d, d, derive_seed(config.seed, di, 1)));
    std::vector<double> out(d);
    row.circulant_ms = median_ms(config.warmup, config.circulant_reps, [&] { circ.project(xv, out); });

    const std::size_t resident =
        std::min<std::size_t>(d, config.dense_budget_bytes / (d * sizeof(double)));
    if (d <= config.dense_max_d && resident >= 1) {
      row.dense_resident_rows = resident;
      RowMajor block(static_cast<Eigen::Index>(resident), static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < block.size(); ++i) block.data()[i] = normal(rng);
      Eigen::VectorXd y(static_cast<Eigen::Index>(d));
      row.dense_ms = median_ms(std::min<std::size_t>(config.warmup, 1), config.reps, [&] {
        for (std::size_t start = 0; start < d; start += resident) {
          const auto len = static_cast<Eigen::Index>(std::min(resident, d - start));
          y.segment(static_cast<Eigen::Index>(start), len).noalias() = block.topRows(len) * x;
        }
      });
      // Keep the result observable.
      if (!std::isfinite(y.sum())) throw NumericError("dense projection produced non-finite values");
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json bench_to_json(const std::vector<BenchRow>& rows, const BenchConfig& config) {
  nlohmann::json out;
  out["config"] = {{"reps", config.reps},
                   {"circulant_reps", config.circulant_reps},
                   {"warmup", config.warmup},
                   {"dense_budget_bytes", config.dense_budget_bytes},
                   {"dense_max_d", config.dense_max_d},
                   {"seed", config.seed}};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"d", r.d}, {"circulant_ms", r.circulant_ms}};
    if (r.dense_ms) {
      j["dense_ms"] = *r.dense_ms;
      j["ratio"] = *r.ratio();
      j["dense_resident_rows"] = r.dense_resident_rows;
    } else {
      j["dense_ms"] = nullptr;
      j["ratio"] = nullptr;
    }
    list.push_back(j);
  }
  out["rows"] = list;
  return out;
}

}  // namespace cbe

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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbe/codes.hpp"
#include "cbe/data.hpp"
#include "cbe/embedding.hpp"
#include "cbe/optimizer.hpp"

namespace cbe {

// Deterministic 64-bit mixing of a base seed with up to two stream indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

struct AnglePair {
  std::vector<double> x1;
  std::vector<double> x2;
  double theta = 0.0;
};

// Unit vectors at angle theta: the planar points (1, 0) and (cos, sin) mapped
// through a random orthonormal pair obtained by Gram-Schmidt on two Gaussian
// vectors.
AnglePair make_angle_pair(std::size_t d, double theta, std::uint64_t seed);

struct VarianceReport {
  double theta = 0.0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::size_t inner_trials = 0;
  std::size_t outer_trials = 0;
  std::uint64_t seed = 0;
  double sample_mean = 0.0;  // grand mean of H_k over all trials
  double sample_var = 0.0;   // mean over outer trials of the per-pair variance
  double analytic_mean = 0.0;
  double analytic_var = 0.0;

  nlohmann::json to_json() const;
};

// For each outer trial draws one angle pair and estimates Var(H_k) over
// `inner_trials` independent CBE-rand models; variances are then averaged.
VarianceReport simulate_variance(double theta, std::size_t k, std::size_t d, std::size_t inner_trials,
                                 std::size_t outer_trials, std::uint64_t seed, std::size_t threads = 1);

using NeighborSets = std::vector<std::vector<std::size_t>>;

// Exact l2 nearest neighbours of every query, nearest first, ties by lower index.
NeighborSets ground_truth(const DataMatrix& database, const DataMatrix& queries, std::size_t n_gt,
                          std::size_t threads = 1);

// recall[R - 1] = mean over queries of |top-R by Hamming distance ∩ GT| / |GT|,
// ranking ties broken by lower database index.
std::vector<double> recall_curve(const BinaryCodeMatrix& db_codes, const BinaryCodeMatrix& query_codes,
                                 const NeighborSets& gt, std::size_t r_max, std::size_t threads = 1);

// Default refusal threshold for dense Gaussian projections (k * d entries).
inline constexpr std::size_t kDefaultDenseEntryCap = std::size_t{1} << 27;

// Sign codes from an unstructured k x d Gaussian projection (the LSH baseline).
class LshProjector {
 public:
  LshProjector(std::size_t d, std::size_t k, std::uint64_t seed, std::size_t max_entries = kDefaultDenseEntryCap);

  std::size_t dim() const noexcept { return d_; }
  std::size_t bits() const noexcept { return k_; }

  BinaryCodeMatrix encode(const DataMatrix& x) const;

 private:
  std::size_t d_;
  std::size_t k_;
  std::vector<double> w_;  // k x d, row-major
};

BinaryCodeMatrix lsh_encode(std::size_t d, std::size_t k, std::uint64_t seed, const DataMatrix& x,
                            std::size_t max_entries = kDefaultDenseEntryCap);

// Seeded mixture of Gaussian clusters on the unit sphere.
struct SyntheticConfig {
  std::size_t d = 1024;
  std::size_t clusters = 20;
  std::size_t n_train = 2000;
  std::size_t n_database = 5000;
  std::size_t n_queries = 200;
  // Each cluster spreads along its own random `rank`-dimensional subspace
  // (rank == 0: isotropic in all d dimensions). `spread` is the expected norm
  // of that displacement relative to the unit centre; `noise` is the expected
  // norm of an extra isotropic component.
  double spread = 1.0;
  std::size_t rank = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct SyntheticDataset {
  DataMatrix train;
  DataMatrix database;
  DataMatrix queries;
};

SyntheticDataset make_cluster_mixture(const SyntheticConfig& config);

struct EvalReport {
  std::map<std::string, std::vector<double>> recall;  // method -> recall@1..R_max
  std::map<std::string, double> timings_ms;           // method -> encode time
  nlohmann::json metadata = nlohmann::json::object();

  double recall_at(const std::string& method, std::size_t r) const;
  nlohmann::json to_json() const;
  // "R,recall" header then one row per R.
  std::string curve_csv(const std::string& method) const;
};

struct RetrievalConfig {
  std::size_t k = 1024;
  std::size_t n_gt = 10;
  std::size_t r_max = 100;
  std::vector<std::string> methods = {"cbe-rand", "cbe-opt", "lsh"};
  TrainConfig train;  // k and seed are overwritten from this struct / the dataset seed
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  nlohmann::json to_json() const;
};

// Ground truth, encoding and recall for each requested method on one dataset.
EvalReport evaluate_retrieval(const SyntheticDataset& data, const RetrievalConfig& config);

// Recall of a single model on a database/query pair.
EvalReport evaluate_model(const CirculantParams& params, const DataMatrix& database, const DataMatrix& queries,
                          std::size_t n_gt, std::size_t r_max, std::size_t threads = 1);

struct BenchRow {
  std::size_t d = 0;
  double circulant_ms = 0.0;
  std::optional<double> dense_ms;  // absent when the dense method was skipped
  std::size_t dense_resident_rows = 0;

  std::optional<double> ratio() const {
    if (!dense_ms) return std::nullopt;
    return *dense_ms / circulant_ms;
  }
};

struct BenchConfig {
  std::size_t reps = 20;
  std::size_t circulant_reps = 200;
  std::size_t warmup = 2;
  // Memory for resident dense rows. When d * d doubles exceed it, the dense
  // projection streams its d rows through a resident block of fresh Gaussian
  // rows; the multiply-add count and memory traffic per projection stay d^2.
  std::size_t dense_budget_bytes = std::size_t{1} << 30;
  // Above this d the dense method is skipped entirely.
  std::size_t dense_max_d = std::size_t{1} << 16;
  std::uint64_t seed = 0;
};

// Median wall time (ms) for projecting one vector by a dense d x d Gaussian
// matrix and by the FFT circulant path.
std::vector<BenchRow> bench_projection(const std::vector<std::size_t>& dims, const BenchConfig& config);

nlohmann::json bench_to_json(const std::vector<BenchRow>& rows, const BenchConfig& config);

}  // namespace cbe

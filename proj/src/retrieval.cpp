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
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "cbe/errors.hpp"
#include "cbe/eval.hpp"
#include "cbe/parallel.hpp"

namespace cbe {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

NeighborSets ground_truth(const DataMatrix& database, const DataMatrix& queries, std::size_t n_gt,
                          std::size_t threads) {
  if (database.cols() != queries.cols()) {
    throw DimensionError("ground_truth: database d=" + std::to_string(database.cols()) + " but queries d=" +
                         std::to_string(queries.cols()));
  }
  if (n_gt < 1 || n_gt > database.rows()) throw ParameterError("ground_truth: need 1 <= n_gt <= database size");
  const std::size_t n = database.rows();
  NeighborSets out(queries.rows());
  parallel_for(queries.rows(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t q = begin; q < end; ++q) {
      auto qv = queries.row(q);
      for (std::size_t i = 0; i < n; ++i) {
        auto xv = database.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < qv.size(); ++j) {
          const double diff = qv[j] - xv[j];
          s += diff * diff;
        }
        dist[i] = {s, i};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(n_gt), dist.end());
      out[q].resize(n_gt);
      for (std::size_t r = 0; r < n_gt; ++r) out[q][r] = dist[r].second;
    }
  });
  return out;
}

std::vector<double> recall_curve(const BinaryCodeMatrix& db_codes, const BinaryCodeMatrix& query_codes,
                                 const NeighborSets& gt, std::size_t r_max, std::size_t threads) {
  if (db_codes.bits() != query_codes.bits()) {
    throw DimensionError("recall_curve: database codes have " + std::to_string(db_codes.bits()) +
                         " bits, queries " + std::to_string(query_codes.bits()));
  }
  if (gt.size() != query_codes.rows()) throw DimensionError("recall_curve: one ground-truth set per query required");
  if (r_max < 1) throw ParameterError("recall_curve: r_max must be >= 1");
  for (const auto& s : gt) {
    if (s.empty()) throw ParameterError("recall_curve: empty ground-truth set");
    for (std::size_t idx : s)
      if (idx >= db_codes.rows()) throw ParameterError("recall_curve: ground-truth index out of range");
  }

  const std::size_t k = db_codes.bits();
  const std::size_t n = db_codes.rows();
  // hits[q][R-1] accumulated per query, then averaged in query order.
  std::vector<std::vector<double>> per_query(query_codes.rows(), std::vector<double>(r_max, 0.0));
  parallel_for(query_codes.rows(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> dist(n);
    std::vector<std::size_t> smaller(k + 2);
    for (std::size_t q = begin; q < end; ++q) {
      auto qc = query_codes.row(q);
      std::fill(smaller.begin(), smaller.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        dist[i] = static_cast<std::uint32_t>(hamming(qc, db_codes.row(i), k));
        ++smaller[dist[i] + 1];
      }
      std::partial_sum(smaller.begin(), smaller.end(), smaller.begin());
      // Rank of item j: items strictly closer plus equal-distance items with lower index.
      auto& curve = per_query[q];
      for (std::size_t j : gt[q]) {
        std::size_t rank = smaller[dist[j]];
        for (std::size_t i = 0; i < j; ++i) rank += dist[i] == dist[j];
        for (std::size_t r = rank; r < r_max; ++r) curve[r] += 1.0;
      }
      for (double& v : curve) v /= static_cast<double>(gt[q].size());
    }
  });

  std::vector<double> recall(r_max, 0.0);
  for (const auto& curve : per_query)
    for (std::size_t r = 0; r < r_max; ++r) recall[r] += curve[r];
  for (double& v : recall) v /= static_cast<double>(query_codes.rows());
  return recall;
}

LshProjector::LshProjector(std::size_t d, std::size_t k, std::uint64_t seed, std::size_t max_entries)
    : d_(d), k_(k) {
  if (d == 0 || k == 0) throw ParameterError("LSH projection needs d >= 1 and k >= 1");
  if (d > max_entries / k) {
    throw ParameterError("dense LSH projection of " + std::to_string(k) + " x " + std::to_string(d) +
                         " entries exceeds the memory cap of " + std::to_string(max_entries) + " entries");
  }
  w_.resize(k * d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (auto& v : w_) v = normal(rng);
}

BinaryCodeMatrix LshProjector::encode(const DataMatrix& x) const {
  if (x.cols() != d_) {
    throw DimensionError("LSH projection expects d=" + std::to_string(d_) + ", data has d=" +
                         std::to_string(x.cols()));
  }
  const Eigen::Map<const RowMajor> w(w_.data(), static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(d_));
  BinaryCodeMatrix codes(x.rows(), k_);
  constexpr std::size_t kBatch = 256;
  for (std::size_t start = 0; start < x.rows(); start += kBatch) {
    const std::size_t len = std::min(kBatch, x.rows() - start);
    const Eigen::Map<const RowMajor> xb(x.row(start).data(), static_cast<Eigen::Index>(len),
                                        static_cast<Eigen::Index>(d_));
    const RowMajor proj = xb * w.transpose();
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < k_; ++j) codes.set(start + i, j, proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= 0.0);
  }
  return codes;
}

BinaryCodeMatrix lsh_encode(std::size_t d, std::size_t k, std::uint64_t seed, const DataMatrix& x,
                            std::size_t max_entries) {
  return LshProjector(d, k, seed, max_entries).encode(x);
}

nlohmann::json SyntheticConfig::to_json() const {
  return {{"d", d},
          {"clusters", clusters},
          {"n_train", n_train},
          {"n_database", n_database},
          {"n_queries", n_queries},
          {"spread", spread},
          {"rank", rank},
          {"noise", noise},
          {"seed", seed}};
}

SyntheticDataset make_cluster_mixture(const SyntheticConfig& config) {
  if (config.d < 2 || config.clusters < 1) throw ParameterError("synthetic mixture needs d >= 2 and clusters >= 1");
  if (config.n_database < 1 || config.n_queries < 1) throw ParameterError("synthetic mixture needs data");
  if (!(config.spread >= 0.0) || !(config.noise >= 0.0)) {
    throw ParameterError("synthetic mixture spread and noise must be >= 0");
  }
  if (config.rank > config.d) throw ParameterError("synthetic mixture rank must be <= d");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  const std::size_t d = config.d;
  const std::size_t rank = config.rank;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  std::vector<double> centres(config.clusters * d);
  for (std::size_t c = 0; c < config.clusters; ++c) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      centres[c * d + j] = normal(rng);
      sq += centres[c * d + j] * centres[c * d + j];
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t j = 0; j < d; ++j) centres[c * d + j] *= inv;
  }
  // Column-major d x rank basis per cluster, entries N(0, 1/d).
  std::vector<double> bases(config.clusters * d * rank);
  for (auto& v : bases) v = normal(rng) * inv_sqrt_d;

  std::uniform_int_distribution<std::size_t> pick(0, config.clusters - 1);
  std::vector<double> latent(rank);
  auto draw = [&](std::size_t n) {
    std::vector<double> v(n * d);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = pick(rng);
      double* x = v.data() + i * d;
      if (rank == 0) {
        for (std::size_t j = 0; j < d; ++j) x[j] = centres[c * d + j] + config.spread * inv_sqrt_d * normal(rng);
      } else {
        const double scale = config.spread / std::sqrt(static_cast<double>(rank));
        for (auto& z : latent) z = normal(rng) * scale;
        const double* basis = bases.data() + c * d * rank;
        for (std::size_t j = 0; j < d; ++j) x[j] = centres[c * d + j];
        for (std::size_t t = 0; t < rank; ++t)
          for (std::size_t j = 0; j < d; ++j) x[j] += latent[t] * basis[t * d + j];
        for (std::size_t j = 0; j < d; ++j) x[j] += config.noise * inv_sqrt_d * normal(rng);
      }
    }
    return DataMatrix::normalized(n, d, std::move(v));
  };

  SyntheticDataset out;
  out.train = config.n_train > 0 ? draw(config.n_train) : DataMatrix(0, d);
  out.database = draw(config.n_database);
  out.queries = draw(config.n_queries);
  return out;
}

double EvalReport::recall_at(const std::string& method, std::size_t r) const {
  const auto it = recall.find(method);
  if (it == recall.end()) throw ParameterError("no recall curve for method '" + method + "'");
  if (r < 1 || r > it->second.size()) throw ParameterError("recall@R requested outside the computed range");
  return it->second[r - 1];
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["recall"] = nlohmann::json::object();
  for (const auto& [method, curve] : recall) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < curve.size(); ++r) rows.push_back({{"R", r + 1}, {"recall", curve[r]}});
    j["recall"][method] = rows;
  }
  j["timings_ms"] = timings_ms;
  j["metadata"] = metadata;
  return j;
}

std::string EvalReport::curve_csv(const std::string& method) const {
  const auto it = recall.find(method);
  if (it == recall.end()) throw ParameterError("no recall curve for method '" + method + "'");
  std::ostringstream os;
  os.precision(17);
  os << "R,recall\n";
  for (std::size_t r = 0; r < it->second.size(); ++r) os << r + 1 << ',' << it->second[r] << '\n';
  return os.str();
}

nlohmann::json RetrievalConfig::to_json() const {
  return {{"k", k},
          {"n_gt", n_gt},
          {"r_max", r_max},
          {"methods", methods},
          {"lambda", train.lambda},
          {"outer_iters", train.outer_iters},
          {"seed", seed}};
}

EvalReport evaluate_retrieval(const SyntheticDataset& data, const RetrievalConfig& config) {
  const std::size_t d = data.database.cols();
  if (config.k < 1 || config.k > d) throw ParameterError("evaluate_retrieval: need 1 <= k <= d");

  EvalReport report;
  report.metadata["retrieval"] = config.to_json();
  report.metadata["n_database"] = data.database.rows();
  report.metadata["n_queries"] = data.queries.rows();
  report.metadata["d"] = d;
  const NeighborSets gt = ground_truth(data.database, data.queries, config.n_gt, config.threads);

  for (const std::string& method : config.methods) {
    BinaryCodeMatrix db, q;
    const auto start = std::chrono::steady_clock::now();
    if (method == "cbe-rand") {
      const CirculantParams p = sample_params(d, config.k, derive_seed(config.seed, 1));
      db = encode_batch(p, data.database, config.threads);
      q = encode_batch(p, data.queries, config.threads);
    } else if (method == "cbe-opt") {
      if (data.train.rows() == 0) throw ParameterError("cbe-opt needs a training set");
      TrainConfig tc = config.train;
      tc.k = config.k;
      tc.seed = derive_seed(config.seed, 1);
      tc.threads = config.threads;
      const CirculantParams p = train(data.train, tc).params;
      report.timings_ms["cbe-opt-train"] = elapsed_ms(start);
      const auto enc_start = std::chrono::steady_clock::now();
      db = encode_batch(p, data.database, config.threads);
      q = encode_batch(p, data.queries, config.threads);
      report.timings_ms[method] = elapsed_ms(enc_start);
      report.recall[method] = recall_curve(db, q, gt, config.r_max, config.threads);
      continue;
    } else if (method == "lsh") {
      const LshProjector lsh(d, config.k, derive_seed(config.seed, 2));
      db = lsh.encode(data.database);
      q = lsh.encode(data.queries);
    } else {
      throw ParameterError("unknown method '" + method + "' (expected cbe-rand, cbe-opt or lsh)");
    }
    report.timings_ms[method] = elapsed_ms(start);
    report.recall[method] = recall_curve(db, q, gt, config.r_max, config.threads);
  }
  return report;
}

EvalReport evaluate_model(const CirculantParams& params, const DataMatrix& database, const DataMatrix& queries,
                          std::size_t n_gt, std::size_t r_max, std::size_t threads) {
  if (database.cols() != params.d || queries.cols() != params.d) {
    throw DimensionError("model has d=" + std::to_string(params.d) + " but database has d=" +
                         std::to_string(database.cols()) + " and queries d=" + std::to_string(queries.cols()));
  }
  EvalReport report;
  const NeighborSets gt = ground_truth(database, queries, n_gt, threads);
  const auto start = std::chrono::steady_clock::now();
  const BinaryCodeMatrix db = encode_batch(params, database, threads);
  const BinaryCodeMatrix q = encode_batch(params, queries, threads);
  report.timings_ms["model"] = elapsed_ms(start);
  report.recall["model"] = recall_curve(db, q, gt, r_max, threads);
  report.metadata["d"] = params.d;
  report.metadata["k"] = params.k;
  report.metadata["n_gt"] = n_gt;
  report.metadata["n_database"] = database.rows();
  report.metadata["n_queries"] = queries.rows();
  return report;
}

}  // namespace cbe

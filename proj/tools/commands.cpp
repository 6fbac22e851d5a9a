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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cbe/errors.hpp"
#include "cbe/eval.hpp"
#include "cbe/io.hpp"
#include "cbe/optimizer.hpp"

namespace cbe::cli {
namespace {

using nlohmann::json;

std::string config_hash(const json& config) {
  // FNV-1a over the canonical (sorted-key) dump.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json envelope(const char* command, const CommonOptions& common, const json& config) {
  return {{"command", command},
          {"version", kVersion},
          {"seed", common.seed},
          {"config", config},
          {"config_hash", config_hash(config)}};
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw ParameterError("--format must be json or csv");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    io::write_text(out, text);
  }
}

const char* kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandom:
      return "rand";
    case ModelKind::kOptimized:
      return "opt";
    case ModelKind::kSemiSupervised:
      return "semi";
  }
  return "unknown";
}

}  // namespace

int run_train(const TrainOptions& opt) {
  if (opt.common.out.empty()) throw ParameterError("train: --out is required");
  if (opt.method != "opt" && opt.method != "rand") throw ParameterError("--method must be opt or rand");
  const DataMatrix x = io::load_dataset(opt.data);
  if (opt.k < 1 || opt.k > x.cols()) {
    throw ParameterError("k=" + std::to_string(opt.k) + " must satisfy 1 <= k <= d=" + std::to_string(x.cols()));
  }

  json config{{"data", opt.data},  {"k", opt.k},           {"lambda", opt.lambda}, {"mu", opt.mu},
              {"pairs", opt.pairs}, {"iters", opt.iters},  {"method", opt.method}, {"n", x.rows()},
              {"d", x.cols()}};
  json log = envelope("train", opt.common, config);

  CirculantParams params;
  if (opt.method == "rand") {
    params = sample_params(x.cols(), opt.k, opt.common.seed);
    log["history"] = json::array();
  } else {
    TrainConfig tc;
    tc.lambda = opt.lambda;
    tc.mu = opt.mu;
    tc.outer_iters = opt.iters;
    tc.seed = opt.common.seed;
    tc.k = opt.k;
    tc.threads = opt.common.threads;

    TrainResult result;
    if (!opt.pairs.empty()) {
      const PairConstraints pairs = io::load_pairs(opt.pairs);
      result = train_semisupervised(x, tc, pairs);
    } else {
      if (opt.mu != 0.0) throw ParameterError("--mu > 0 requires a --pairs file");
      result = train(x, tc);
    }
    params = std::move(result.params);
    json history = json::array();
    for (const auto& rec : result.history) {
      history.push_back({{"iteration", rec.iteration},
                         {"step", rec.step == HalfStep::kCodes ? "codes" : "spectrum"},
                         {"objective", rec.objective},
                         {"pair_term", rec.pair_term},
                         {"unconverged_pairs", rec.unconverged_pairs}});
    }
    log["history"] = history;
  }

  io::save_model(opt.common.out, params);
  log["model"] = {{"path", opt.common.out}, {"d", params.d}, {"k", params.k}, {"kind", kind_name(params.kind)}};
  emit(opt.log, log.dump(2));
  return 0;
}

int run_encode(const EncodeOptions& opt) {
  if (opt.common.out.empty()) throw ParameterError("encode: --out is required");
  const CirculantParams params = io::load_model(opt.model);
  const DataMatrix x = io::load_dataset(opt.data);
  if (x.cols() != params.d) {
    throw DimensionError("model dimension d=" + std::to_string(params.d) + " does not match dataset dimension d=" +
                         std::to_string(x.cols()));
  }
  const auto start = std::chrono::steady_clock::now();
  const BinaryCodeMatrix codes = encode_batch(params, x, opt.common.threads);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  io::save_codes(opt.common.out, codes);

  json config{{"model", opt.model}, {"data", opt.data}, {"out", opt.common.out}};
  json summary = envelope("encode", opt.common, config);
  summary["n"] = x.rows();
  summary["d"] = params.d;
  summary["k"] = params.k;
  summary["encode_ms"] = ms;
  summary["vectors_per_second"] = ms > 0.0 ? 1000.0 * static_cast<double>(x.rows()) / ms : 0.0;
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_eval(const EvalOptions& opt) {
  check_format(opt.common.format);
  EvalReport report;
  json config;
  if (opt.synthetic) {
    SyntheticConfig sc;
    sc.d = opt.d;
    sc.clusters = opt.clusters;
    sc.n_train = opt.n_train;
    sc.n_database = opt.n_database;
    sc.n_queries = opt.n_queries;
    sc.spread = opt.spread;
    sc.rank = opt.rank;
    sc.noise = opt.noise;
    sc.seed = opt.common.seed;
    RetrievalConfig rc;
    rc.k = opt.k;
    rc.n_gt = opt.n_gt;
    rc.r_max = opt.r_max;
    rc.methods = opt.methods;
    rc.train.lambda = opt.lambda;
    rc.train.outer_iters = opt.iters;
    rc.seed = opt.common.seed;
    rc.threads = opt.common.threads;
    config = {{"mode", "synthetic"}, {"dataset", sc.to_json()}, {"retrieval", rc.to_json()}};
    report = evaluate_retrieval(make_cluster_mixture(sc), rc);
  } else {
    if (opt.model.empty() || opt.database.empty() || opt.queries.empty()) {
      throw ParameterError("eval needs --model, --database and --queries (or --synthetic)");
    }
    const CirculantParams params = io::load_model(opt.model);
    const DataMatrix db = io::load_dataset(opt.database);
    const DataMatrix q = io::load_dataset(opt.queries);
    config = {{"mode", "files"},     {"model", opt.model}, {"database", opt.database},
              {"queries", opt.queries}, {"n_gt", opt.n_gt}, {"r_max", opt.r_max}};
    report = evaluate_model(params, db, q, opt.n_gt, opt.r_max, opt.common.threads);
  }

  json meta = envelope("eval", opt.common, config);
  for (auto& [key, value] : report.metadata.items()) meta[key] = value;
  report.metadata = meta;

  if (opt.common.format == "json") {
    emit(opt.common.out, report.to_json().dump(2));
    return 0;
  }
  // CSV: one file per curve. With several curves the method name is appended
  // to the output stem.
  if (opt.common.out.empty()) {
    for (const auto& [method, curve] : report.recall) {
      if (report.recall.size() > 1) std::cout << "# " << method << '\n';
      std::cout << report.curve_csv(method);
    }
    return 0;
  }
  const std::filesystem::path out(opt.common.out);
  for (const auto& [method, curve] : report.recall) {
    std::filesystem::path target = out;
    if (report.recall.size() > 1) {
      target = out.parent_path() / (out.stem().string() + "_" + method + out.extension().string());
    }
    io::write_text(target, report.curve_csv(method));
  }
  return 0;
}

int run_simulate(const SimulateOptions& opt) {
  check_format(opt.common.format);
  const VarianceReport rep =
      simulate_variance(opt.theta, opt.k, opt.d, opt.inner, opt.outer, opt.common.seed, opt.common.threads);
  json config{{"theta", opt.theta}, {"k", opt.k}, {"d", opt.d}, {"inner", opt.inner}, {"outer", opt.outer}};
  if (opt.common.format == "json") {
    json out = envelope("simulate", opt.common, config);
    const json body = rep.to_json();
    for (const auto& [key, value] : body.items()) out[key] = value;
    emit(opt.common.out, out.dump(2));
  } else {
    std::ostringstream os;
    os.precision(17);
    os << "theta,k,d,inner_trials,outer_trials,sample_mean,sample_var,analytic_mean,analytic_var\n"
       << rep.theta << ',' << rep.k << ',' << rep.d << ',' << rep.inner_trials << ',' << rep.outer_trials << ','
       << rep.sample_mean << ',' << rep.sample_var << ',' << rep.analytic_mean << ',' << rep.analytic_var << '\n';
    emit(opt.common.out, os.str());
  }
  return 0;
}

int run_bench(const BenchOptions& opt) {
  check_format(opt.common.format);
  if (opt.dims.empty()) throw ParameterError("bench: at least one --d is required");
  BenchConfig bc;
  bc.reps = opt.reps;
  bc.circulant_reps = opt.circulant_reps;
  bc.dense_budget_bytes = opt.dense_budget_mb << 20;
  bc.seed = opt.common.seed;
  const auto rows = bench_projection(opt.dims, bc);

  if (opt.common.format == "json") {
    json config{{"dims", opt.dims}, {"reps", opt.reps}, {"circulant_reps", opt.circulant_reps},
                {"dense_budget_mb", opt.dense_budget_mb}};
    json out = envelope("bench", opt.common, config);
    const json body = bench_to_json(rows, bc);
    for (const auto& [key, value] : body.items()) out[key] = value;
    emit(opt.common.out, out.dump(2));
  } else {
    std::ostringstream os;
    os.precision(9);
    os << "d,circulant_ms,dense_ms,ratio\n";
    for (const auto& r : rows) {
      os << r.d << ',' << r.circulant_ms << ',';
      if (r.dense_ms) os << *r.dense_ms << ',' << *r.ratio();
      else os << ',';
      os << '\n';
    }
    emit(opt.common.out, os.str());
  }
  return 0;
}

}  // namespace cbe::cli

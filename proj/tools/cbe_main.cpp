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

// cbe: command-line front end.
//
//   cbe train    --data X.cbd --k 256 --out model.cbe [--lambda 1] [--mu 0 --pairs P.txt]
//   cbe encode   --model model.cbe --data X.cbd --out codes.cbc
//   cbe eval     --model model.cbe --database DB.cbd --queries Q.cbd | --synthetic
//   cbe simulate --theta 1.5707963 --k 25
//   cbe bench    --d 1024 --d 32768
//
// Exit codes: 0 success, 2 validation error, 3 I/O or format error.

#include <iostream>

#include "CLI11.hpp"
#include "cbe/errors.hpp"
#include "commands.hpp"

namespace {

constexpr int kValidationError = 2;
constexpr int kIoError = 3;

void add_common(CLI::App* cmd, cbe::cli::CommonOptions& common, bool needs_format) {
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", common.out, "Output path");
  if (needs_format) {
    cmd->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cbe::cli;
  CLI::App app{"Circulant binary embedding: training, encoding and evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Learn (or sample) a circulant model");
  add_common(train_cmd, train.common, false);
  train_cmd->add_option("--data", train.data, "Training dataset (CBD1)")->required();
  train_cmd->add_option("--k", train.k, "Code length in bits")->required();
  train_cmd->add_option("--lambda", train.lambda, "Orthogonality weight");
  train_cmd->add_option("--mu", train.mu, "Weight of the labeled-pair term");
  train_cmd->add_option("--pairs", train.pairs, "Labeled pairs file (S i j / D i j)");
  train_cmd->add_option("--iters", train.iters, "Alternating iterations");
  train_cmd->add_option("--method", train.method, "opt (learned) or rand (sampled)")
      ->check(CLI::IsMember({"opt", "rand"}));
  train_cmd->add_option("--log", train.log, "Write the JSON training log here instead of stdout");

  EncodeOptions encode;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a dataset into packed binary codes");
  add_common(encode_cmd, encode.common, false);
  encode_cmd->add_option("--model", encode.model, "Model file (CBE1)")->required();
  encode_cmd->add_option("--data", encode.data, "Dataset (CBD1)")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Recall@R retrieval evaluation");
  add_common(eval_cmd, eval.common, true);
  eval_cmd->add_option("--model", eval.model, "Model file");
  eval_cmd->add_option("--database", eval.database, "Database dataset");
  eval_cmd->add_option("--queries", eval.queries, "Query dataset");
  eval_cmd->add_flag("--synthetic", eval.synthetic, "Use the synthetic cluster-mixture benchmark");
  eval_cmd->add_option("--d", eval.d, "Synthetic: dimensionality");
  eval_cmd->add_option("--clusters", eval.clusters, "Synthetic: number of clusters");
  eval_cmd->add_option("--n-train", eval.n_train, "Synthetic: training rows");
  eval_cmd->add_option("--n-db", eval.n_database, "Synthetic: database rows");
  eval_cmd->add_option("--n-query", eval.n_queries, "Synthetic: query rows");
  eval_cmd->add_option("--spread", eval.spread, "Synthetic: norm of the in-cluster displacement");
  eval_cmd->add_option("--rank", eval.rank, "Synthetic: dimension of each cluster's subspace (0 = isotropic)");
  eval_cmd->add_option("--noise", eval.noise, "Synthetic: norm of the isotropic noise floor");
  eval_cmd->add_option("--k", eval.k, "Synthetic: code length");
  eval_cmd->add_option("--lambda", eval.lambda, "Synthetic: orthogonality weight for cbe-opt");
  eval_cmd->add_option("--iters", eval.iters, "Synthetic: training iterations for cbe-opt");
  eval_cmd->add_option("--methods", eval.methods, "Synthetic: methods (cbe-rand, cbe-opt, lsh)")->delimiter(',');
  eval_cmd->add_option("--n-gt", eval.n_gt, "Ground-truth neighbours per query");
  eval_cmd->add_option("--r-max", eval.r_max, "Largest R of recall@R");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo variance of the normalized Hamming distance");
  add_common(sim_cmd, sim.common, true);
  sim_cmd->add_option("--theta", sim.theta, "Angle between the two points (radians)")->required();
  sim_cmd->add_option("--k", sim.k, "Code length")->required();
  sim_cmd->add_option("--d", sim.d, "Dimensionality");
  sim_cmd->add_option("--inner", sim.inner, "Models per angle pair");
  sim_cmd->add_option("--outer", sim.outer, "Angle pairs");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Dense vs circulant projection timing");
  add_common(bench_cmd, bench.common, true);
  bench_cmd->add_option("--d", bench.dims, "Dimensionality (repeatable)")->required();
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions for the dense method");
  bench_cmd->add_option("--circulant-reps", bench.circulant_reps, "Timed repetitions for the circulant method");
  bench_cmd->add_option("--dense-budget-mb", bench.dense_budget_mb, "Memory for resident dense rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*encode_cmd) return run_encode(encode);
    if (*eval_cmd) return run_eval(eval);
    if (*sim_cmd) return run_simulate(sim);
    if (*bench_cmd) return run_bench(bench);
  } catch (const cbe::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kIoError;
  } catch (const cbe::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const cbe::UnboundedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

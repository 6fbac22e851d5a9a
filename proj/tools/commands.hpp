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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cbe::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
  std::string format = "json";
};

struct TrainOptions {
  CommonOptions common;
  std::string data;
  std::size_t k = 0;
  double lambda = 1.0;
  double mu = 0.0;
  std::string pairs;
  std::size_t iters = 10;
  std::string method = "opt";
  std::string log;
};

struct EncodeOptions {
  CommonOptions common;
  std::string model;
  std::string data;
};

struct EvalOptions {
  CommonOptions common;
  std::string model;
  std::string database;
  std::string queries;
  bool synthetic = false;
  std::size_t d = 1024;
  std::size_t clusters = 20;
  std::size_t n_train = 2000;
  std::size_t n_database = 5000;
  std::size_t n_queries = 200;
  double spread = 1.0;
  std::size_t rank = 0;
  double noise = 0.0;
  std::size_t k = 256;
  double lambda = 1.0;
  std::size_t iters = 10;
  std::vector<std::string> methods = {"cbe-rand", "cbe-opt", "lsh"};
  std::size_t n_gt = 10;
  std::size_t r_max = 100;
};

struct SimulateOptions {
  CommonOptions common;
  double theta = 0.0;
  std::size_t k = 0;
  std::size_t d = 256;
  std::size_t inner = 500;
  std::size_t outer = 500;
};

struct BenchOptions {
  CommonOptions common;
  std::vector<std::size_t> dims;
  std::size_t reps = 20;
  std::size_t circulant_reps = 200;
  std::size_t dense_budget_mb = 1024;
};

// Each returns a process exit code; library exceptions propagate to main.
int run_train(const TrainOptions& opt);
int run_encode(const EncodeOptions& opt);
int run_eval(const EvalOptions& opt);
int run_simulate(const SimulateOptions& opt);
int run_bench(const BenchOptions& opt);

}  // namespace cbe::cli

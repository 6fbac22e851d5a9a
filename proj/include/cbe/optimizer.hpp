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
#include <utility>
#include <vector>

#include "cbe/data.hpp"
#include "cbe/embedding.hpp"
#include "cbe/spectral.hpp"

namespace cbe {

// Gradient-descent settings for the two-variable frequency sub-problems.
// step_size == 0 selects 1 / (2 * m_sum + 16 * lambda * d + eps).
struct PairSolverOptions {
  double step_size = 0.0;
  std::size_t max_steps = 100;
  double grad_tolerance = 1e-8;
};

struct TrainConfig {
  double lambda = 1.0;
  double mu = 0.0;
  std::size_t outer_iters = 10;
  PairSolverOptions pair_solver;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  // Stop once |f_prev - f| <= rel_tolerance * |f_prev| between consecutive
  // spectrum steps. Zero disables early stopping.
  double rel_tolerance = 1e-6;
  std::size_t threads = 1;

  void validate(std::size_t d) const;
};

// Code matrix used during training: n x d entries in {-1, 0, +1}. Columns
// j >= k are held at zero when fewer than d bits are learned.
class TrainingCodes {
 public:
  TrainingCodes() = default;
  TrainingCodes(std::size_t n, std::size_t d, std::size_t k);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return d_; }
  std::size_t bits() const noexcept { return k_; }

  signed char& operator()(std::size_t i, std::size_t j) noexcept { return v_[i * d_ + j]; }
  signed char operator()(std::size_t i, std::size_t j) const noexcept { return v_[i * d_ + j]; }
  std::span<const signed char> row(std::size_t i) const noexcept { return {v_.data() + i * d_, d_}; }

  // ||B||_F^2, i.e. the number of nonzero entries.
  double energy() const noexcept;

  friend bool operator==(const TrainingCodes&, const TrainingCodes&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::size_t k_ = 0;
  std::vector<signed char> v_;
};

// Diagonals of the frequency-domain quadratic form of ||B - X R^T||_F^2:
//   m_l = sum_i |F(x_i)_l|^2
//   h_l = -2 sum_i Re F(x_i)_l Re F(B_i)_l + Im F(x_i)_l Im F(B_i)_l
//   g_l =  2 sum_i Im F(x_i)_l Re F(B_i)_l - Re F(x_i)_l Im F(B_i)_l
struct SpectralStats {
  std::vector<double> m;
  std::vector<double> h;
  std::vector<double> g;
};

// Labeled pairs for the semi-supervised term. Indices refer to training rows.
struct PairConstraints {
  std::vector<std::pair<std::size_t, std::size_t>> similar;
  std::vector<std::pair<std::size_t, std::size_t>> dissimilar;

  bool empty() const noexcept { return similar.empty() && dissimilar.empty(); }
  void validate(std::size_t n) const;
};

enum class ObjectiveMethod { kDense, kSpectral };

// ||B - X R^T||_F^2 + lambda ||R R^T - I||_F^2 with R = circ(r).
double objective(const DataMatrix& x, const TrainingCodes& b, std::span<const double> r, double lambda,
                 ObjectiveMethod method = ObjectiveMethod::kSpectral);

// Same objective assembled from precomputed stats and the full spectrum of r:
//   (1/d)[sum m|r~|^2 + h.Re r~ + g.Im r~] + ||B||^2 + lambda sum (|r~|^2 - 1)^2
double objective_from_stats(const SpectralStats& stats, std::span<const Complex> spectrum,
                            double code_energy, double lambda);

// ||R R^T - I||_F^2 evaluated in the frequency domain.
double orthogonality_penalty(std::span<const Complex> spectrum);

// B_ij = sign(circ(r)_j . x_i) for j < k (sign(0) = +1), zero for j >= k.
TrainingCodes update_codes(std::span<const double> r, const DataMatrix& x, std::size_t k,
                           std::size_t threads = 1);

// Row sums are reduced in fixed blocks so the result does not depend on `threads`.
SpectralStats accumulate_stats(const DataMatrix& x, const TrainingCodes& b, std::size_t threads = 1);

// Global minimizer of m0 t^2 + h0 t + lambda d (t^2 - 1)^2. Equal-valued
// minimizers resolve to the largest t.
double solve_freq0(double m0, double h0, double lambda, std::size_t d);

// Same one-variable problem for the self-conjugate index d/2 of an even d.
double solve_nyquist(double m_half, double h_half, double lambda, std::size_t d);

struct PairSolution {
  Complex value;
  bool converged = true;
  std::size_t steps = 0;
};

// Minimizes, over (a, b) = (Re, Im) of one frequency,
//   m_sum (a^2 + b^2) + 2 lambda d (a^2 + b^2 - 1)^2 + h_sum a + g_diff b
// where m_sum = m_i + m_{d-i}, h_sum = h_i + h_{d-i}, g_diff = g_i - g_{d-i}.
PairSolution solve_freq_pair(double m_sum, double h_sum, double g_diff, double lambda, std::size_t d,
                             Complex warm, const PairSolverOptions& options = {});

struct SpectrumUpdate {
  ComplexVector spectrum;
  std::size_t unconverged = 0;
};

// Solves every frequency sub-problem and mirrors the upper half so the result
// is exactly conjugate symmetric.
SpectrumUpdate update_spectrum(const SpectralStats& stats, double lambda, std::size_t d,
                               std::span<const Complex> warm, const PairSolverOptions& options = {});

// a_l = sum_{similar} |F(x_i)_l - F(x_j)_l|^2 - sum_{dissimilar} |F(x_i)_l - F(x_j)_l|^2
std::vector<double> semi_stats(const DataMatrix& x, const PairConstraints& pairs);

// J(R) = sum_{similar} ||R x_i - R x_j||^2 - sum_{dissimilar} ||R x_i - R x_j||^2, in the time domain.
double pair_term_dense(const DataMatrix& x, const PairConstraints& pairs, std::span<const double> r);

enum class HalfStep : std::uint8_t { kCodes, kSpectrum };

struct TrainRecord {
  std::size_t iteration = 0;
  HalfStep step = HalfStep::kCodes;
  // Full objective, including mu * J(R) when training semi-supervised.
  double objective = 0.0;
  // mu * J(R) alone (zero for unsupervised training).
  double pair_term = 0.0;
  std::size_t unconverged_pairs = 0;
};

struct TrainResult {
  CirculantParams params;
  std::vector<TrainRecord> history;
};

// Alternates code updates and spectrum updates starting from
// sample_params(d, k, seed). The sign flips drawn there are applied to X once
// and kept in the returned model.
TrainResult train(const DataMatrix& x, const TrainConfig& config);

// train() with M replaced by M + mu * diag(semi_stats(...)) in every spectrum step.
TrainResult train_semisupervised(const DataMatrix& x, const TrainConfig& config, const PairConstraints& pairs);

}  // namespace cbe

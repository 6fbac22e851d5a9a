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

#include "cbe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cbe/errors.hpp"
#include "cbe/parallel.hpp"

namespace cbe {
namespace {

// Rows per partial sum in accumulate_stats.
constexpr std::size_t kStatsBlock = 64;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DataMatrix& x) {
  return {x.values().data(), static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols())};
}

void check_shapes(const DataMatrix& x, const TrainingCodes& b, std::size_t d, const char* where) {
  if (x.cols() != d || b.cols() != d || b.rows() != x.rows()) {
    throw DimensionError(std::string(where) + ": X is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", B is " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ", len(r) = " + std::to_string(d));
  }
}

// Adds the half-spectrum contributions of one (x, b) row into m/h/g[0..d/2].
void add_row_stats(std::span<const double> x, std::span<const double> b, std::span<double> m,
                   std::span<double> h, std::span<double> g) {
  const ComplexVector xs = rfft(x);
  const ComplexVector bs = rfft(b);
  for (std::size_t l = 0; l < xs.size(); ++l) {
    const double p = xs[l].real(), q = xs[l].imag();
    const double u = bs[l].real(), v = bs[l].imag();
    m[l] += p * p + q * q;
    h[l] += -2.0 * (p * u + q * v);
    g[l] += 2.0 * (q * u - p * v);
  }
}

// Fills indices d/2+1..d-1 from their mirrors: m and h are even, g is odd.
void mirror_stats(SpectralStats& s, std::size_t d) {
  for (std::size_t l = d / 2 + 1; l < d; ++l) {
    s.m[l] = s.m[d - l];
    s.h[l] = s.h[d - l];
    s.g[l] = -s.g[d - l];
  }
}

}  // namespace

void TrainConfig::validate(std::size_t d) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be a finite value >= 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be a finite value >= 0");
  if (outer_iters < 1) throw ParameterError("outer_iters must be >= 1");
  if (k < 1 || k > d) {
    throw ParameterError("code length k=" + std::to_string(k) + " must satisfy 1 <= k <= d=" +
                         std::to_string(d));
  }
  if (pair_solver.max_steps < 1) throw ParameterError("pair solver max_steps must be >= 1");
  if (!(pair_solver.grad_tolerance > 0.0)) throw ParameterError("pair solver grad_tolerance must be > 0");
  if (pair_solver.step_size < 0.0) throw ParameterError("pair solver step_size must be >= 0");
}

void PairConstraints::validate(std::size_t n) const {
  auto check = [n](const auto& list, const char* label) {
    for (const auto& [i, j] : list) {
      if (i >= n || j >= n) {
        throw ParameterError(std::string(label) + " pair (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") is out of range for " + std::to_string(n) + " rows");
      }
    }
  };
  check(similar, "similar");
  check(dissimilar, "dissimilar");
  for (const auto& s : similar) {
    const auto flipped = std::make_pair(s.second, s.first);
    for (const auto& dis : dissimilar) {
      if (dis == s || dis == flipped) {
        throw ParameterError("pair (" + std::to_string(s.first) + ", " + std::to_string(s.second) +
                             ") is marked both similar and dissimilar");
      }
    }
  }
}

TrainingCodes::TrainingCodes(std::size_t n, std::size_t d, std::size_t k) : n_(n), d_(d), k_(k), v_(n * d, 0) {}

double TrainingCodes::energy() const noexcept {
  double e = 0.0;
  for (signed char v : v_) e += static_cast<double>(v * v);
  return e;
}

double orthogonality_penalty(std::span<const Complex> spectrum) {
  double s = 0.0;
  for (const Complex& z : spectrum) {
    const double e = std::norm(z) - 1.0;
    s += e * e;
  }
  return s;
}

double objective_from_stats(const SpectralStats& stats, std::span<const Complex> spectrum, double code_energy,
                            double lambda) {
  const std::size_t d = spectrum.size();
  if (stats.m.size() != d || stats.h.size() != d || stats.g.size() != d) {
    throw DimensionError("objective_from_stats: stats length does not match spectrum length");
  }
  double quad = 0.0;
  for (std::size_t l = 0; l < d; ++l) {
    const double a = spectrum[l].real(), b = spectrum[l].imag();
    quad += stats.m[l] * (a * a + b * b) + stats.h[l] * a + stats.g[l] * b;
  }
  return quad / static_cast<double>(d) + code_energy + lambda * orthogonality_penalty(spectrum);
}

double objective(const DataMatrix& x, const TrainingCodes& b, std::span<const double> r, double lambda,
                 ObjectiveMethod method) {
  const std::size_t d = r.size();
  check_shapes(x, b, d, "objective");
  if (method == ObjectiveMethod::kDense) {
    const Eigen::MatrixXd rm = circ_dense(r);
    Eigen::MatrixXd bm(b.rows(), d);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < d; ++j) bm(i, j) = b(i, j);
    const double fit = (bm - as_eigen(x) * rm.transpose()).squaredNorm();
    const double ortho = (rm * rm.transpose() - Eigen::MatrixXd::Identity(d, d)).squaredNorm();
    return fit + lambda * ortho;
  }
  const SpectralStats stats = accumulate_stats(x, b);
  return objective_from_stats(stats, dft(r), b.energy(), lambda);
}

TrainingCodes update_codes(std::span<const double> r, const DataMatrix& x, std::size_t k, std::size_t threads) {
  const std::size_t d = r.size();
  if (x.cols() != d) throw DimensionError("update_codes: data dimension does not match len(r)");
  if (k < 1 || k > d) throw ParameterError("update_codes: k must satisfy 1 <= k <= d");
  const CirculantOperator op(r);
  TrainingCodes b(x.rows(), d, k);
  parallel_for(x.rows(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> proj(d);
    for (std::size_t i = begin; i < end; ++i) {
      op.apply(x.row(i), proj);
      for (std::size_t j = 0; j < k; ++j) b(i, j) = proj[j] >= 0.0 ? 1 : -1;
    }
  });
  return b;
}

SpectralStats accumulate_stats(const DataMatrix& x, const TrainingCodes& b, std::size_t threads) {
  const std::size_t d = x.cols();
  check_shapes(x, b, d, "accumulate_stats");
  if (d == 0) throw DimensionError("accumulate_stats: d must be >= 1");
  const std::size_t half = d / 2 + 1;
  const std::size_t n = x.rows();
  const std::size_t blocks = (n + kStatsBlock - 1) / kStatsBlock;

  // Per-block partial sums (m, h, g interleaved), combined in block order.
  std::vector<double> partial(blocks * 3 * half, 0.0);
  parallel_for(blocks, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> brow(d);
    for (std::size_t blk = begin; blk < end; ++blk) {
      std::span<double> m(partial.data() + blk * 3 * half, half);
      std::span<double> h(m.data() + half, half);
      std::span<double> g(h.data() + half, half);
      const std::size_t stop = std::min(n, (blk + 1) * kStatsBlock);
      for (std::size_t i = blk * kStatsBlock; i < stop; ++i) {
        auto src = b.row(i);
        for (std::size_t j = 0; j < d; ++j) brow[j] = src[j];
        add_row_stats(x.row(i), brow, m, h, g);
      }
    }
  });

  SpectralStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const double* base = partial.data() + blk * 3 * half;
    for (std::size_t l = 0; l < half; ++l) {
      s.m[l] += base[l];
      s.h[l] += base[half + l];
      s.g[l] += base[2 * half + l];
    }
  }
  mirror_stats(s, d);
  return s;
}

std::vector<double> semi_stats(const DataMatrix& x, const PairConstraints& pairs) {
  pairs.validate(x.rows());
  const std::size_t d = x.cols();
  const std::size_t half = d / 2 + 1;
  std::vector<double> a(d, 0.0);
  std::vector<double> diff(d);
  auto accumulate = [&](const auto& list, double sign) {
    for (const auto& [i, j] : list) {
      auto xi = x.row(i), xj = x.row(j);
      for (std::size_t l = 0; l < d; ++l) diff[l] = xi[l] - xj[l];
      const ComplexVector f = rfft(diff);
      for (std::size_t l = 0; l < half; ++l) a[l] += sign * std::norm(f[l]);
    }
  };
  accumulate(pairs.similar, 1.0);
  accumulate(pairs.dissimilar, -1.0);
  for (std::size_t l = half; l < d; ++l) a[l] = a[d - l];
  return a;
}

double pair_term_dense(const DataMatrix& x, const PairConstraints& pairs, std::span<const double> r) {
  pairs.validate(x.rows());
  if (r.size() != x.cols()) throw DimensionError("pair_term_dense: len(r) does not match data dimension");
  const Eigen::MatrixXd rm = circ_dense(r);
  const auto xm = as_eigen(x);
  double j = 0.0;
  for (const auto& [a, b] : pairs.similar) j += (rm * (xm.row(a) - xm.row(b)).transpose()).squaredNorm();
  for (const auto& [a, b] : pairs.dissimilar) j -= (rm * (xm.row(a) - xm.row(b)).transpose()).squaredNorm();
  return j;
}

namespace {

TrainResult run_training(const DataMatrix& x, const TrainConfig& config, const PairConstraints* pairs) {
  const std::size_t d = x.cols();
  if (x.rows() == 0 || d == 0) throw DimensionError("training data must be non-empty");
  config.validate(d);

  const CirculantParams init = sample_params(d, config.k, config.seed);
  const DataMatrix xd = x.sign_flipped(init.signs);

  std::optional<std::vector<double>> pair_weights;
  if (pairs != nullptr && config.mu != 0.0) {
    pair_weights = semi_stats(xd, *pairs);
    for (double& v : *pair_weights) v *= config.mu;
  }

  std::vector<double> r = init.r;
  ComplexVector spectrum = dft(r);

  TrainResult result;
  auto pair_term = [&](const ComplexVector& z) {
    if (!pair_weights) return 0.0;
    double s = 0.0;
    for (std::size_t l = 0; l < d; ++l) s += (*pair_weights)[l] * std::norm(z[l]);
    return s / static_cast<double>(d);
  };
  auto record = [&](std::size_t iter, HalfStep step, double value, double pterm, std::size_t unconverged) {
    if (!std::isfinite(value)) {
      throw NumericError("objective became non-finite at iteration " + std::to_string(iter) +
                         (step == HalfStep::kCodes ? " (code step)" : " (spectrum step)"));
    }
    result.history.push_back({iter, step, value, pterm, unconverged});
  };

  double previous = 0.0;
  for (std::size_t iter = 1; iter <= config.outer_iters; ++iter) {
    const TrainingCodes b = update_codes(r, xd, config.k, config.threads);
    SpectralStats stats = accumulate_stats(xd, b, config.threads);
    if (pair_weights) {
      for (std::size_t l = 0; l < d; ++l) stats.m[l] += (*pair_weights)[l];
    }
    const double energy = b.energy();
    record(iter, HalfStep::kCodes, objective_from_stats(stats, spectrum, energy, config.lambda),
           pair_term(spectrum), 0);

    const SpectrumUpdate upd = update_spectrum(stats, config.lambda, d, spectrum, config.pair_solver);
    r = idft_real(upd.spectrum);
    spectrum = dft(r);
    const double value = objective_from_stats(stats, spectrum, energy, config.lambda);
    record(iter, HalfStep::kSpectrum, value, pair_term(spectrum), upd.unconverged);

    if (iter > 1 && config.rel_tolerance > 0.0 &&
        std::abs(previous - value) <= config.rel_tolerance * std::abs(previous)) {
      break;
    }
    previous = value;
  }

  result.params = init;
  result.params.r = std::move(r);
  result.params.kind = pair_weights ? ModelKind::kSemiSupervised : ModelKind::kOptimized;
  return result;
}

}  // namespace

TrainResult train(const DataMatrix& x, const TrainConfig& config) { return run_training(x, config, nullptr); }

TrainResult train_semisupervised(const DataMatrix& x, const TrainConfig& config, const PairConstraints& pairs) {
  pairs.validate(x.rows());
  return run_training(x, config, &pairs);
}

}  // namespace cbe

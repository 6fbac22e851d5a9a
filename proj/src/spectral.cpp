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

#include "cbe/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "cbe/errors.hpp"

namespace cbe {
namespace {

enum class PlanKind { kForward, kBackward, kRealForward, kRealBackward };

// FFTW's planner is not thread-safe but executing an existing plan on new
// arrays is. Plans are created once per (kind, d) under a lock and live until exit.
// FFTW_UNALIGNED lets the plans run on std::vector storage.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan get_plan(PlanKind kind, std::size_t d) {
  static PlanCache instance;
  auto& cache = instance.plans;

  std::lock_guard<std::mutex> lock(instance.mu);
  auto key = std::make_pair(kind, d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int n = static_cast<int>(d);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<fftw_complex> cin(d), cout(d);
  std::vector<double> rbuf(d);
  fftw_plan plan = nullptr;
  switch (kind) {
    case PlanKind::kForward:
      plan = fftw_plan_dft_1d(n, cin.data(), cout.data(), FFTW_FORWARD, flags);
      break;
    case PlanKind::kBackward:
      plan = fftw_plan_dft_1d(n, cin.data(), cout.data(), FFTW_BACKWARD, flags);
      break;
    case PlanKind::kRealForward:
      plan = fftw_plan_dft_r2c_1d(n, rbuf.data(), cout.data(), flags);
      break;
    case PlanKind::kRealBackward:
      plan = fftw_plan_dft_c2r_1d(n, cin.data(), rbuf.data(), flags);
      break;
  }
  if (plan == nullptr) throw NumericError("FFTW failed to create a plan for d=" + std::to_string(d));
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  // FFTW takes non-const input pointers; out-of-place c2c and r2c plans
  // leave the input untouched.
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

void require_nonempty(std::size_t d, const char* what) {
  if (d == 0) throw DimensionError(std::string(what) + ": input must have length >= 1");
}

}  // namespace

ComplexVector dft(std::span<const Complex> t) {
  require_nonempty(t.size(), "dft");
  ComplexVector out(t.size());
  fftw_execute_dft(get_plan(PlanKind::kForward, t.size()), as_fftw(t.data()), as_fftw(out.data()));
  return out;
}

ComplexVector dft(std::span<const double> t) {
  require_nonempty(t.size(), "dft");
  return expand_half_spectrum(rfft(t), t.size());
}

ComplexVector idft(std::span<const Complex> t) {
  require_nonempty(t.size(), "idft");
  const std::size_t d = t.size();
  ComplexVector out(d);
  fftw_execute_dft(get_plan(PlanKind::kBackward, d), as_fftw(t.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(d);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> idft_real(std::span<const Complex> t) {
  ComplexVector full = idft(t);
  std::vector<double> out(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
  return out;
}

ComplexVector rfft(std::span<const double> t) {
  require_nonempty(t.size(), "rfft");
  const std::size_t d = t.size();
  ComplexVector out(d / 2 + 1);
  fftw_execute_dft_r2c(get_plan(PlanKind::kRealForward, d), const_cast<double*>(t.data()),
                       as_fftw(out.data()));
  return out;
}

std::vector<double> irfft(std::span<const Complex> half, std::size_t d) {
  require_nonempty(d, "irfft");
  if (half.size() != d / 2 + 1) {
    throw DimensionError("irfft: half spectrum has length " + std::to_string(half.size()) +
                         ", expected " + std::to_string(d / 2 + 1));
  }
  // c2r overwrites its input.
  ComplexVector scratch(half.begin(), half.end());
  std::vector<double> out(d);
  fftw_execute_dft_c2r(get_plan(PlanKind::kRealBackward, d), as_fftw(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(d);
  for (auto& v : out) v *= scale;
  return out;
}

ComplexVector expand_half_spectrum(std::span<const Complex> half, std::size_t d) {
  if (half.size() != d / 2 + 1) throw DimensionError("expand_half_spectrum: length mismatch");
  ComplexVector full(d);
  for (std::size_t l = 0; l < half.size(); ++l) full[l] = half[l];
  for (std::size_t l = half.size(); l < d; ++l) full[l] = std::conj(half[d - l]);
  return full;
}

Eigen::MatrixXd circ_dense(std::span<const double> r) {
  require_nonempty(r.size(), "circ_dense");
  const std::size_t d = r.size();
  Eigen::MatrixXd m(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) m(i, j) = r[(i + d - j) % d];
  return m;
}

Eigen::MatrixXcd dft_matrix(std::size_t d) {
  require_nonempty(d, "dft_matrix");
  Eigen::MatrixXcd f(d, d);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t m = 0; m < d; ++m)
      f(l, m) = std::polar(1.0, w * static_cast<double>((l * m) % d));
  return f;
}

ComplexVector circulant_multiply_complex(std::span<const double> r, std::span<const double> x) {
  if (r.size() != x.size()) {
    throw DimensionError("circulant_multiply: len(r)=" + std::to_string(r.size()) +
                         " != len(x)=" + std::to_string(x.size()));
  }
  require_nonempty(r.size(), "circulant_multiply");
  ComplexVector rs = dft(r);
  ComplexVector xs = dft(x);
  for (std::size_t l = 0; l < rs.size(); ++l) rs[l] *= xs[l];
  return idft(rs);
}

std::vector<double> circulant_multiply(std::span<const double> r, std::span<const double> x) {
  if (r.size() != x.size()) {
    throw DimensionError("circulant_multiply: len(r)=" + std::to_string(r.size()) +
                         " != len(x)=" + std::to_string(x.size()));
  }
  return CirculantOperator(r).apply(x);
}

bool is_conjugate_symmetric(std::span<const Complex> t, double tol) {
  const std::size_t d = t.size();
  if (d == 0) return false;
  if (std::abs(t[0].imag()) > tol) return false;
  for (std::size_t i = 1; i <= d / 2; ++i) {
    if (std::abs(t[d - i] - std::conj(t[i])) > tol) return false;
  }
  return true;
}

CirculantOperator::CirculantOperator(std::span<const double> r) : d_(r.size()), spectrum_(rfft(r)) {}

void CirculantOperator::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != d_ || out.size() != d_) {
    throw DimensionError("CirculantOperator::apply: expected length " + std::to_string(d_) +
                         ", got " + std::to_string(x.size()));
  }
  thread_local ComplexVector scratch;
  scratch.resize(spectrum_.size());
  fftw_execute_dft_r2c(get_plan(PlanKind::kRealForward, d_), const_cast<double*>(x.data()),
                       as_fftw(scratch.data()));
  for (std::size_t l = 0; l < scratch.size(); ++l) scratch[l] *= spectrum_[l];
  fftw_execute_dft_c2r(get_plan(PlanKind::kRealBackward, d_), as_fftw(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(d_);
  for (auto& v : out) v *= scale;
}

std::vector<double> CirculantOperator::apply(std::span<const double> x) const {
  std::vector<double> out(d_);
  apply(x, out);
  return out;
}

}  // namespace cbe

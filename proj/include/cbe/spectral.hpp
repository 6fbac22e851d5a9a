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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cbe {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Forward transform is unnormalized:
//   F(t)_l = sum_m t_m exp(-2 pi i l m / d)
// and the inverse carries the 1/d factor, so idft(dft(t)) == t.
ComplexVector dft(std::span<const double> t);
ComplexVector dft(std::span<const Complex> t);
ComplexVector idft(std::span<const Complex> t);

// Real part of idft(t). Intended for conjugate-symmetric spectra.
std::vector<double> idft_real(std::span<const Complex> t);

// Half spectrum (indices 0..d/2) of a real signal, and its inverse. These are
// the fast paths used by encoding and training.
ComplexVector rfft(std::span<const double> t);
std::vector<double> irfft(std::span<const Complex> half, std::size_t d);

// Expands a half spectrum to the full length-d spectrum by conjugate mirroring.
ComplexVector expand_half_spectrum(std::span<const Complex> half, std::size_t d);

// circ(r): column j is r cyclically shifted down by j, i.e. R(i, j) = r[(i - j) mod d].
// Dense; only meant for tests and small-d cross checks.
Eigen::MatrixXd circ_dense(std::span<const double> r);

// The d x d unnormalized DFT matrix, F(l, m) = exp(-2 pi i l m / d).
Eigen::MatrixXcd dft_matrix(std::size_t d);

// circ(r) * x via the convolution theorem.
std::vector<double> circulant_multiply(std::span<const double> r, std::span<const double> x);

// Same product kept in complex form (before the real part is taken). For a
// real r and x the imaginary parts are rounding noise.
ComplexVector circulant_multiply_complex(std::span<const double> r, std::span<const double> x);

// Checks Im(t_0) == 0, t_{d-i} == conj(t_i) and, for even d, Im(t_{d/2}) == 0,
// each to within tol.
bool is_conjugate_symmetric(std::span<const Complex> t, double tol);

// Applies circ(r) repeatedly without recomputing the spectrum of r.
class CirculantOperator {
 public:
  explicit CirculantOperator(std::span<const double> r);

  std::size_t dim() const noexcept { return d_; }
  const ComplexVector& half_spectrum() const noexcept { return spectrum_; }

  // out = circ(r) * x. out must have length d.
  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::size_t d_;
  ComplexVector spectrum_;
};

}  // namespace cbe

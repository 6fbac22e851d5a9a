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

#include <gtest/gtest.h>

#include <random>

#include "cbe/errors.hpp"
#include "cbe/spectral.hpp"
#include "oracles.hpp"

namespace cbe {
namespace {

using testing::gaussian_vector;
using testing::max_abs_diff;
using testing::naive_dft;
using testing::to_complex;

const std::size_t kSizes[] = {1, 2, 3, 4, 7, 8, 12, 16, 33, 64, 97, 100, 257, 1024, 1000, 4096};

TEST(Dft, ImpulseIsAllOnes) {
  const std::vector<double> t = {1, 0, 0, 0};
  const ComplexVector f = dft(t);
  ASSERT_EQ(f.size(), 4u);
  for (const auto& v : f) EXPECT_NEAR(std::abs(v - Complex(1, 0)), 0.0, 1e-15);
}

TEST(Dft, ConstantIsScaledImpulse) {
  const std::vector<double> t = {1, 1, 1, 1};
  const ComplexVector f = dft(t);
  EXPECT_NEAR(std::abs(f[0] - Complex(4, 0)), 0.0, 1e-15);
  for (std::size_t l = 1; l < 4; ++l) EXPECT_NEAR(std::abs(f[l]), 0.0, 1e-15);
}

TEST(Dft, MatchesDefinitionPrimeLength) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> re = gaussian_vector(7, rng);
    const std::vector<double> im = gaussian_vector(7, rng);
    ComplexVector t(7);
    for (std::size_t i = 0; i < 7; ++i) t[i] = {re[i], im[i]};
    EXPECT_LT(max_abs_diff(dft(t), naive_dft(t)), 1e-10);
    EXPECT_LT(max_abs_diff(dft(re), naive_dft(to_complex(re))), 1e-10);
  }
}

TEST(Dft, MatchesDefinitionAcrossSizes) {
  std::mt19937_64 rng(8);
  for (std::size_t d : {1, 2, 5, 6, 12, 33, 64, 100, 127}) {
    const std::vector<double> t = gaussian_vector(d, rng);
    EXPECT_LT(max_abs_diff(dft(t), naive_dft(to_complex(t))), 1e-10 * static_cast<double>(d)) << "d=" << d;
  }
}

TEST(Dft, EmptyInputThrows) {
  EXPECT_THROW(dft(std::span<const double>{}), DimensionError);
  EXPECT_THROW(dft(std::span<const Complex>{}), DimensionError);
  EXPECT_THROW(idft(std::span<const Complex>{}), DimensionError);
}

TEST(Idft, RoundTripTwoPoint) {
  const std::vector<double> t = {3, -1};
  const ComplexVector back = idft(dft(t));
  EXPECT_NEAR(std::abs(back[0] - Complex(3, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(back[1] - Complex(-1, 0)), 0.0, 1e-15);
}

TEST(Idft, ConstantSpectrumIsImpulse) {
  const ComplexVector f = {4, 0, 0, 0};
  const ComplexVector t = idft(ComplexVector{1, 1, 1, 1});
  EXPECT_NEAR(std::abs(t[0] - Complex(1, 0)), 0.0, 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(t[i]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(idft(f)[0] - Complex(1, 0)), 0.0, 1e-15);
}

TEST(Idft, ConjugateSymmetricInputGivesRealOutput) {
  std::mt19937_64 rng(9);
  for (std::size_t d : {2, 5, 8, 33, 64, 257}) {
    const ComplexVector f = dft(gaussian_vector(d, rng));
    ASSERT_TRUE(is_conjugate_symmetric(f, 1e-9));
    for (const auto& v : idft(f)) EXPECT_LT(std::abs(v.imag()), 1e-10);
  }
}

TEST(Idft, RoundTripAllSizes) {
  std::mt19937_64 rng(10);
  for (std::size_t d : kSizes) {
    const std::vector<double> re = gaussian_vector(d, rng);
    const std::vector<double> im = gaussian_vector(d, rng);
    ComplexVector t(d);
    for (std::size_t i = 0; i < d; ++i) t[i] = {re[i], im[i]};
    EXPECT_LT(max_abs_diff(idft(dft(t)), t), 1e-10) << "d=" << d;
    EXPECT_LT(max_abs_diff(dft(idft(t)), t), 1e-10 * std::sqrt(static_cast<double>(d))) << "d=" << d;
  }
}

TEST(Rfft, HalfSpectrumAgreesWithFull) {
  std::mt19937_64 rng(11);
  for (std::size_t d : kSizes) {
    const std::vector<double> t = gaussian_vector(d, rng);
    const ComplexVector full = dft(to_complex(t));
    const ComplexVector half = rfft(t);
    ASSERT_EQ(half.size(), d / 2 + 1);
    for (std::size_t l = 0; l < half.size(); ++l) EXPECT_LT(std::abs(half[l] - full[l]), 1e-9);
    EXPECT_LT(max_abs_diff(expand_half_spectrum(half, d), full), 1e-9);
    const std::vector<double> back = irfft(half, d);
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(back[i], t[i], 1e-10);
  }
}

TEST(Rfft, WrongHalfLengthThrows) {
  const ComplexVector half(3);
  EXPECT_THROW(irfft(half, 8), DimensionError);
  EXPECT_THROW(expand_half_spectrum(half, 8), DimensionError);
}

TEST(Parseval, EnergyIsPreserved) {
  std::mt19937_64 rng(12);
  for (std::size_t d : kSizes) {
    const std::vector<double> t = gaussian_vector(d, rng);
    double time_energy = 0.0;
    for (double v : t) time_energy += v * v;
    double freq_energy = 0.0;
    for (const auto& v : dft(t)) freq_energy += std::norm(v);
    EXPECT_NEAR(freq_energy / static_cast<double>(d), time_energy, 1e-9 * time_energy) << "d=" << d;
  }
}

TEST(CircDense, SmallExamples) {
  const std::vector<double> r = {1, 2, 3};
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 3, 2, 2, 1, 3, 3, 2, 1;
  EXPECT_EQ(circ_dense(r), expected);

  EXPECT_EQ(circ_dense(std::vector<double>{1, 0, 0}), Eigen::MatrixXd::Identity(3, 3));

  const Eigen::Vector3d x(1.5, -2.0, 4.0);
  const Eigen::Vector3d shifted = circ_dense(std::vector<double>{0, 1, 0}) * x;
  EXPECT_EQ(shifted, Eigen::Vector3d(4.0, 1.5, -2.0));
}

TEST(CircDense, DiagonalizedByDft) {
  std::mt19937_64 rng(13);
  for (std::size_t d : {1, 2, 3, 8, 15, 16, 31, 64}) {
    const std::vector<double> r = gaussian_vector(d, rng);
    const Eigen::MatrixXcd f = dft_matrix(d);
    const ComplexVector spec = dft(r);
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(d));
    for (std::size_t l = 0; l < d; ++l) diag(static_cast<Eigen::Index>(l)) = spec[l];
    const Eigen::MatrixXcd rebuilt = f.adjoint() * diag.asDiagonal() * f / static_cast<double>(d);
    const Eigen::MatrixXd dense = circ_dense(r);
    EXPECT_LT((rebuilt - dense.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-9) << "d=" << d;
  }
}

TEST(CirculantMultiply, IdentityPassesThrough) {
  std::mt19937_64 rng(14);
  const std::vector<double> x = gaussian_vector(4, rng);
  const std::vector<double> y = circulant_multiply(std::vector<double>{1, 0, 0, 0}, x);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], x[i], 1e-15);
}

TEST(CirculantMultiply, AllOnesInputGivesRowSum) {
  std::mt19937_64 rng(15);
  for (std::size_t d : {4, 17, 64}) {
    const std::vector<double> r = gaussian_vector(d, rng);
    double sum = 0.0;
    for (double v : r) sum += v;
    const std::vector<double> y = circulant_multiply(r, std::vector<double>(d, 1.0));
    for (double v : y) EXPECT_NEAR(v, sum, 1e-12);
  }
}

TEST(CirculantMultiply, MatchesDenseOracle) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> r = gaussian_vector(33, rng);
    const std::vector<double> x = gaussian_vector(33, rng);
    const std::vector<double> y = circulant_multiply(r, x);
    const std::vector<double> oracle = testing::naive_circulant(r, x);
    for (std::size_t i = 0; i < 33; ++i) EXPECT_NEAR(y[i], oracle[i], 1e-9);
  }
}

TEST(CirculantMultiply, ImaginaryResidualIsNegligible) {
  std::mt19937_64 rng(17);
  for (std::size_t d : {3, 16, 33, 257, 1024}) {
    const ComplexVector y = circulant_multiply_complex(gaussian_vector(d, rng), gaussian_vector(d, rng));
    for (const auto& v : y) EXPECT_LT(std::abs(v.imag()), 1e-10);
  }
}

TEST(CirculantMultiply, LengthMismatchThrows) {
  EXPECT_THROW(circulant_multiply(std::vector<double>(4), std::vector<double>(5)), DimensionError);
  EXPECT_THROW(circulant_multiply_complex(std::vector<double>(4), std::vector<double>(5)), DimensionError);
}

TEST(CirculantOperator, ReusableAcrossInputs) {
  std::mt19937_64 rng(18);
  const std::vector<double> r = gaussian_vector(100, rng);
  const CirculantOperator op(r);
  EXPECT_EQ(op.dim(), 100u);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> x = gaussian_vector(100, rng);
    const std::vector<double> y = op.apply(x);
    const std::vector<double> oracle = testing::naive_circulant(r, x);
    for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(y[i], oracle[i], 1e-9);
  }
  EXPECT_THROW(op.apply(std::vector<double>(99)), DimensionError);
}

TEST(ConjugateSymmetry, DetectsViolations) {
  ComplexVector t = {1.0, {2.0, 1.0}, 3.0, {2.0, -1.0}};
  EXPECT_TRUE(is_conjugate_symmetric(t, 1e-12));
  t[2] = {3.0, 0.5};
  EXPECT_FALSE(is_conjugate_symmetric(t, 1e-12));
  t[2] = 3.0;
  t[0] = {1.0, 0.1};
  EXPECT_FALSE(is_conjugate_symmetric(t, 1e-12));
  t[0] = 1.0;
  t[3] = {2.0, 1.0};
  EXPECT_FALSE(is_conjugate_symmetric(t, 1e-12));
}

}  // namespace
}  // namespace cbe

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

// Per-frequency sub-problems of the spectrum update.
//
// All of them reduce to minimizing a one-variable quartic
//   p(t) = quad * t^2 + lin * t + well * (t^2 - 1)^2,   well >= 0,
// whose stationary points are the real roots of a depressed cubic. The
// two-variable problem is rotationally symmetric apart from its linear term,
// so its minimizer lies on the ray opposite to the linear coefficient and the
// radius solves the same quartic.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cbe/errors.hpp"
#include "cbe/optimizer.hpp"

namespace cbe {
namespace {

double quartic_value(double quad, double lin, double well, double t) {
  const double s = t * t - 1.0;
  return quad * t * t + lin * t + well * s * s;
}

// Real roots of t^3 + p t + q = 0.
int depressed_cubic_roots(double p, double q, std::array<double, 3>& roots) {
  if (p == 0.0) {
    roots[0] = std::cbrt(-q);
    return 1;
  }
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  if (disc > 0.0) {
    const double sgn = q >= 0.0 ? 1.0 : -1.0;
    const double a = -sgn * std::cbrt(std::abs(half_q) + std::sqrt(disc));
    roots[0] = a == 0.0 ? 0.0 : a - third_p / a;
    return 1;
  }
  // Three real roots (p < 0 here).
  const double rad = 2.0 * std::sqrt(-third_p);
  const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  for (int j = 0; j < 3; ++j) roots[j] = rad * std::cos(phi - 2.0 * std::numbers::pi * j / 3.0);
  return 3;
}

double minimize_quartic(double quad, double lin, double well) {
  if (!std::isfinite(quad) || !std::isfinite(lin) || !std::isfinite(well) || well < 0.0) {
    throw NumericError("frequency sub-problem has non-finite or negative coefficients");
  }
  if (well == 0.0) {
    if (quad > 0.0) return -lin / (2.0 * quad);
    if (quad == 0.0 && lin == 0.0) return 1.0;
    throw UnboundedError("frequency sub-problem is unbounded below (lambda = 0, quadratic weight " +
                         std::to_string(quad) + ", linear weight " + std::to_string(lin) + ")");
  }

  // p'(t) = 4 well t^3 + (2 quad - 4 well) t + lin
  std::array<double, 3> roots{};
  const int count = depressed_cubic_roots(quad / (2.0 * well) - 1.0, lin / (4.0 * well), roots);

  double best_t = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    double t = roots[i];
    // Newton polish on p'; keeps the trigonometric roots accurate near double roots.
    for (int it = 0; it < 4; ++it) {
      const double d1 = 4.0 * well * t * t * t + (2.0 * quad - 4.0 * well) * t + lin;
      const double d2 = 12.0 * well * t * t + 2.0 * quad - 4.0 * well;
      if (d2 <= 0.0) break;
      const double next = t - d1 / d2;
      if (!std::isfinite(next) || quartic_value(quad, lin, well, next) > quartic_value(quad, lin, well, t)) break;
      t = next;
    }
    const double v = quartic_value(quad, lin, well, t);
    const double tie = 1e-14 * std::max(1.0, std::abs(v));
    if (v < best_v - tie || (std::abs(v - best_v) <= tie && t > best_t)) {
      best_v = std::min(v, best_v);
      best_t = t;
    }
  }
  return best_t;
}

double pair_value(double m_sum, double h_sum, double g_diff, double well, Complex z) {
  const double a = z.real(), b = z.imag();
  const double rho2 = a * a + b * b;
  const double s = rho2 - 1.0;
  return m_sum * rho2 + well * s * s + h_sum * a + g_diff * b;
}

Complex pair_gradient(double m_sum, double h_sum, double g_diff, double well, Complex z) {
  const double rho2 = std::norm(z);
  const double radial = 2.0 * m_sum + 4.0 * well * (rho2 - 1.0);
  return {radial * z.real() + h_sum, radial * z.imag() + g_diff};
}

}  // namespace

double solve_freq0(double m0, double h0, double lambda, std::size_t d) {
  if (lambda < 0.0) throw ParameterError("lambda must be >= 0");
  return minimize_quartic(m0, h0, lambda * static_cast<double>(d));
}

double solve_nyquist(double m_half, double h_half, double lambda, std::size_t d) {
  if (d % 2 != 0) throw ParameterError("the self-conjugate frequency d/2 exists only for even d");
  if (lambda < 0.0) throw ParameterError("lambda must be >= 0");
  return minimize_quartic(m_half, h_half, lambda * static_cast<double>(d));
}

PairSolution solve_freq_pair(double m_sum, double h_sum, double g_diff, double lambda, std::size_t d,
                             Complex warm, const PairSolverOptions& options) {
  if (lambda < 0.0) throw ParameterError("lambda must be >= 0");
  const double well = 2.0 * lambda * static_cast<double>(d);
  const double lin_norm = std::hypot(h_sum, g_diff);

  Complex start;
  if (well == 0.0) {
    if (m_sum > 0.0) {
      start = Complex(-h_sum, -g_diff) / (2.0 * m_sum);
    } else if (m_sum == 0.0 && lin_norm == 0.0) {
      start = Complex(1.0, 0.0);
    } else {
      throw UnboundedError("frequency pair sub-problem is unbounded below (lambda = 0)");
    }
  } else {
    // Radius along the ray opposite to (h_sum, g_diff); lin <= 0 keeps it >= 0.
    const double rho = minimize_quartic(m_sum, -lin_norm, well);
    Complex dir(1.0, 0.0);
    if (lin_norm > 0.0) {
      dir = Complex(-h_sum, -g_diff) / lin_norm;
    } else if (std::abs(warm) > 0.0) {
      dir = warm / std::abs(warm);
    }
    start = rho * dir;
  }

  PairSolution sol;
  sol.value = start;
  if (std::isfinite(warm.real()) && std::isfinite(warm.imag()) &&
      pair_value(m_sum, h_sum, g_diff, well, warm) < pair_value(m_sum, h_sum, g_diff, well, start)) {
    sol.value = warm;
  }

  // Gradient-descent polish with backtracking. From the analytic point this
  // normally stops immediately; the tolerance is scaled to the coefficient size
  // because the gradient cannot be resolved below rounding of the inputs.
  const double scale = std::max({1.0, std::abs(m_sum), lin_norm, well});
  const double tol = options.grad_tolerance * scale;
  double step = options.step_size > 0.0 ? options.step_size
                                        : 1.0 / (2.0 * std::abs(m_sum) + 8.0 * well + 1e-12);
  double value = pair_value(m_sum, h_sum, g_diff, well, sol.value);
  Complex grad = pair_gradient(m_sum, h_sum, g_diff, well, sol.value);
  std::size_t steps = 0;
  while (std::abs(grad) > tol && steps < options.max_steps) {
    ++steps;
    double trial_step = step;
    bool moved = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      const Complex cand = sol.value - trial_step * grad;
      const double v = pair_value(m_sum, h_sum, g_diff, well, cand);
      if (v <= value - 0.5 * trial_step * std::norm(grad)) {
        sol.value = cand;
        value = v;
        moved = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!moved) break;
    grad = pair_gradient(m_sum, h_sum, g_diff, well, sol.value);
  }
  sol.steps = steps;
  sol.converged = std::abs(grad) <= tol;
  return sol;
}

SpectrumUpdate update_spectrum(const SpectralStats& stats, double lambda, std::size_t d,
                               std::span<const Complex> warm, const PairSolverOptions& options) {
  if (stats.m.size() != d || stats.h.size() != d || stats.g.size() != d) {
    throw DimensionError("update_spectrum: stats length does not match d=" + std::to_string(d));
  }
  if (warm.size() != d) throw DimensionError("update_spectrum: warm start length does not match d");

  SpectrumUpdate out;
  out.spectrum.assign(d, Complex(0.0, 0.0));
  out.spectrum[0] = solve_freq0(stats.m[0], stats.h[0], lambda, d);
  for (std::size_t i = 1; i < d - i; ++i) {
    const std::size_t j = d - i;
    const PairSolution sol = solve_freq_pair(stats.m[i] + stats.m[j], stats.h[i] + stats.h[j],
                                             stats.g[i] - stats.g[j], lambda, d, warm[i], options);
    if (!sol.converged) ++out.unconverged;
    out.spectrum[i] = sol.value;
    out.spectrum[j] = std::conj(sol.value);
  }
  if (d % 2 == 0 && d >= 2) {
    out.spectrum[d / 2] = solve_nyquist(stats.m[d / 2], stats.h[d / 2], lambda, d);
  }
  return out;
}

}  // namespace cbe

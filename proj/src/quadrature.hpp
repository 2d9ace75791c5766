// Copyright 2026 The nmgauss Authors
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

// quadrature.hpp — adaptive panel integration built on 15-point Gauss-Legendre.
//
// A panel is accepted when the whole-panel rule and the sum of its two halves
// agree to the local absolute tolerance; otherwise the panel is bisected and
// each half inherits half the budget. Failure to converge within the depth
// limit raises numeric_error carrying the worst residual seen, so callers can
// surface "quadrature failed" with a number instead of silently returning junk.
//
// The value type T needs: T() zero-init, operator+, operator-, double*T, and a
// free function quad_abs(T) returning the max-abs norm (provided below for
// double, Mat2 and SymMat2).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.hpp"
#include "phase_space.hpp"

namespace nmg {

inline double quad_abs(double v) { return std::abs(v); }
inline double quad_abs(const Mat2& m) { return m.max_abs(); }
inline double quad_abs(const SymMat2& m) { return m.max_abs(); }

namespace detail {

// Nodes/weights of 15-point Gauss-Legendre on [-1, 1], computed once by
// Newton iteration on the Legendre recurrence (degree of exactness 29).
struct Gauss15 {
  std::array<double, 15> node{};
  std::array<double, 15> weight{};

  Gauss15() {
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
      // Chebyshev-angle initial guess, then Newton on P_n.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) {
          break;
        }
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const Gauss15& gauss15() {
  static const Gauss15 g;
  return g;
}

template <typename T, typename F>
T gauss15_panel(const F& f, double a, double b) {
  const Gauss15& g = gauss15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T acc{};
  for (int i = 0; i < 15; ++i) {
    acc = acc + (half * g.weight[i]) * f(mid + half * g.node[i]);
  }
  return acc;
}

template <typename T, typename F>
T adaptive_panel(const F& f, double a, double b, double tol, int depth,
                 int max_depth, double* worst_residual) {
  const T whole = gauss15_panel<T>(f, a, b);
  const double mid = 0.5 * (a + b);
  const T left = gauss15_panel<T>(f, a, mid);
  const T right = gauss15_panel<T>(f, mid, b);
  const T refined = left + right;
  const double residual = quad_abs(refined - whole);
  if (residual <= tol) {
    return refined;
  }
  if (depth >= max_depth) {
    *worst_residual = std::max(*worst_residual, residual);
    return refined;
  }
  return adaptive_panel<T>(f, a, mid, 0.5 * tol, depth + 1, max_depth,
                           worst_residual) +
         adaptive_panel<T>(f, mid, b, 0.5 * tol, depth + 1, max_depth,
                           worst_residual);
}

}  // namespace detail

// Adaptive integral of f over [a, b] to absolute tolerance tol. a > b is
// allowed and flips the sign. Throws numeric_error if any panel still misses
// its local budget at max_depth bisections.
template <typename T, typename F>
T integrate(const F& f, double a, double b, double tol = 1e-10,
            int max_depth = 20) {
  if (a == b) {
    return T{};
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  double worst = 0.0;
  T result =
      detail::adaptive_panel<T>(f, a, b, tol, 0, max_depth, &worst);
  if (worst > 0.0) {
    throw numeric_error("quadrature failed to converge to tolerance", worst);
  }
  return sign * result;
}

// Iterated double integral of f(u, v) over the triangle a <= v <= u <= b.
// The inner integrals run at tol/10 so the outer error budget dominates.
template <typename T, typename F>
T integrate_triangle(const F& f, double a, double b, double tol = 1e-9,
                     int max_depth = 20) {
  const auto outer = [&](double u) {
    return integrate<T>([&](double v) { return f(u, v); }, a, u, 0.1 * tol,
                        max_depth);
  };
  return integrate<T>(outer, a, b, tol, max_depth);
}

// As integrate_triangle, but the inner variable runs over [c, u] with an
// independent lower limit c <= a (used by the intertwiner Gram matrix, whose
// memory integral reaches back before the interval start).
template <typename T, typename F>
T integrate_triangle_from(const F& f, double a, double b, double c,
                          double tol = 1e-9, int max_depth = 20) {
  const auto outer = [&](double u) {
    return integrate<T>([&](double v) { return f(u, v); }, c, u, 0.1 * tol,
                        max_depth);
  };
  return integrate<T>(outer, a, b, tol, max_depth);
}

}  // namespace nmg

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

// Brute-force oracle for the Gaussian displacement weight
//
//   F(y) = int d^2 xi / (2 pi)  e^{-i y^T Omega xi}  e^{-1/2 xi^T g xi},
//
// evaluated directly from this defining integral on a truncated regular
// grid, with none of the library's closed forms. The integral is a partial
// DFT: with Omega = [[0, 1], [-1, 0]] the phase splits as
// e^{+i y2 xi1} e^{-i y1 xi2}, so summing the xi2 axis first against every
// y1 and then the xi1 axis against every y2 turns an O(N^2 M^2) sum into
// O(N^2 M + N M^2).
//
// Error budget: the integrand is e^{-1/2 xi^T g xi}, so truncating at
// |xi_k| <= L with L = sqrt(73.6 / lambda_min(g)) leaves a tail below
// e^{-36.8} ~ 1e-16 of the peak, and with that tail negligible the plain
// unit-weight Riemann sum equals the trapezoid rule to machine precision.
// The grid-spacing (aliasing) error is controlled by the caller's h and
// should be validated by an h -> h/2 refinement check.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace nmg_test {

// Sampled values F(y1_i, y2_j), row-major over the tensor grid
// y_axis x y_axis.
struct FourierWeightTable {
  std::vector<double> values;   // size n * n, index i * n + j
  double max_abs_imag;          // residual imaginary part (should be ~0)
  double grid_half_width;       // the L actually used
  std::size_t n_grid;           // samples per xi axis
};

// g = [g_xx, g_xp, g_pp] must be symmetric positive definite; h is the xi
// sample spacing (the grid is symmetrized so the result is real up to
// rounding).
inline FourierWeightTable fourier_displacement_weight(
    const std::array<double, 3>& g, const std::vector<double>& y_axis,
    double h) {
  const double tr = g[0] + g[2];
  const double det = g[0] * g[2] - g[1] * g[1];
  const double lambda_min = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
  const double big_l = std::sqrt(73.6 / lambda_min);

  // Symmetric grid xi_k = -L + k * h', k = 0..N, with h' <= h chosen so the
  // endpoints land exactly on +-L.
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil(2.0 * big_l / h));
  const double step = 2.0 * big_l / static_cast<double>(n_steps);
  std::vector<double> xi(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    xi[k] = -big_l + static_cast<double>(k) * step;
  }

  const std::size_t m = y_axis.size();
  const std::complex<double> i_unit(0.0, 1.0);

  // Phase table minus[b * m + i] = e^{-i y_i xi_b}; reused in stage 1 and,
  // conjugated, in stage 2.
  std::vector<std::complex<double>> minus(xi.size() * m);
  for (std::size_t b = 0; b < xi.size(); ++b) {
    for (std::size_t i = 0; i < m; ++i) {
      minus[b * m + i] = std::exp(-i_unit * (y_axis[i] * xi[b]));
    }
  }

  // Stage 1: for each xi1 row, contract the xi2 axis against every y1.
  // stage1[a * m + i] = sum_b e^{-1/2 xi^T g xi} e^{-i y1_i xi2_b}.
  std::vector<std::complex<double>> stage1(xi.size() * m);
  for (std::size_t a = 0; a < xi.size(); ++a) {
    for (std::size_t b = 0; b < xi.size(); ++b) {
      const double quad = g[0] * xi[a] * xi[a] +
                          2.0 * g[1] * xi[a] * xi[b] + g[2] * xi[b] * xi[b];
      const double f = std::exp(-0.5 * quad);
      if (f < 1e-18) {
        continue;  // below the truncation floor anyway
      }
      for (std::size_t i = 0; i < m; ++i) {
        stage1[a * m + i] += f * minus[b * m + i];
      }
    }
  }

  // Stage 2: contract the xi1 axis against every y2.
  FourierWeightTable table;
  table.values.assign(m * m, 0.0);
  table.max_abs_imag = 0.0;
  table.grid_half_width = big_l;
  table.n_grid = xi.size();
  const double measure = step * step / (2.0 * M_PI);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t a = 0; a < xi.size(); ++a) {
        acc += stage1[a * m + i] * std::conj(minus[a * m + j]);
      }
      acc *= measure;
      table.values[i * m + j] = acc.real();
      table.max_abs_imag = std::max(table.max_abs_imag,
                                    std::abs(acc.imag()));
    }
  }
  return table;
}

}  // namespace nmg_test

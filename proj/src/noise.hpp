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

// noise.hpp — stationary Gaussian noise autocorrelation kernels D(t, s).
//
// Three families:
//   White       D(t, s) = d * delta(t - s), d symmetric PSD. eval_kernel
//               returns the weight d; callers must treat it distributionally
//               (time integrals against a white kernel collapse one variable).
//   OuDiagonal  D(t, s) = (gamma/2) e^{-gamma |t-s|} diag(d_q, d_p), the
//               exponentially correlated (Ornstein-Uhlenbeck) kernel. Its
//               gamma -> infinity limit is White with d = diag(d_q, d_p).
//   Tabulated   samples of a kernel on a rectangular (t, s) grid, evaluated
//               by bilinear interpolation and symmetrized D <- (D(t,s) +
//               D(s,t)^T)/2; no extrapolation outside the grid hull.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "phase_space.hpp"

namespace nmg {

struct WhiteNoise {
  SymMat2 weight;  // Dirac weight d, must be PSD
};

struct OuDiagonal {
  double gamma;  // inverse correlation time, > 0
  double d_q;    // position-coupling weight, >= 0
  double d_p;    // momentum-coupling weight, >= 0
};

struct TabulatedKernel {
  // Shared, strictly increasing time axis for both arguments; values stores
  // D(times[i], times[j]) at index i * n + j.
  std::vector<double> times;
  std::vector<Mat2> values;
};

using NoiseKernel = std::variant<WhiteNoise, OuDiagonal, TabulatedKernel>;

// Validating constructors (throw std::invalid_argument on bad parameters).
NoiseKernel make_white(const SymMat2& weight);
NoiseKernel make_ou(double gamma, double d_q, double d_p);
NoiseKernel make_tabulated(std::vector<double> times, std::vector<Mat2> values);

// Parse a tabulated kernel from CSV with header "t,s,D11,D12,D21,D22"; rows
// may appear in any order but must fill a complete grid over a common time
// axis, and the stored samples must satisfy D(t,s) = D(s,t)^T to 1e-9.
NoiseKernel load_tabulated_csv(const std::string& path);

// Kernel value at (t, s). White returns the Dirac weight (see header note);
// Tabulated throws std::domain_error outside the grid hull.
Mat2 eval_kernel(const NoiseKernel& k, double t, double s);

struct PositiveTypeResult {
  bool positive;          // min_eigenvalue >= -1e-10
  double min_eigenvalue;  // of the assembled 2n x 2n block matrix
};

// Positive-type (Bochner) check on a finite time grid: assemble the block
// matrix B[a][b] = D(t_a, t_b) and test it for positive semidefiniteness.
// For White the block matrix degenerates and the check reduces to the weight
// matrix itself.
PositiveTypeResult check_positive_type(const NoiseKernel& k,
                                       const std::vector<double>& times);

// Short human-readable tag ("white", "ou(gamma=...,d_q=...,d_p=...)", ...)
// used in CLI output labels.
std::string describe(const NoiseKernel& k);

}  // namespace nmg

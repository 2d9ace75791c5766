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

// montecarlo.hpp — stochastic validation of the Gram matrices.
//
// The averaged theory predicts Cov[v] = g(t, t0) for the displacement
// v = int_{t0}^t S^T_{u-t0} w(u) du accumulated along a single noise path.
// This module samples exact stationary OU paths (the AR(1) recurrence is the
// exact transition density, no discretization error in the path itself),
// accumulates v by the trapezoid rule, and compares the empirical covariance
// against gram_g with jackknife error bars. Paths are embarrassingly
// parallel; per-path seeds are derived from (seed, path index) by a splitmix
// scramble, so the estimate is reproducible bit-for-bit regardless of the
// number of worker threads.

#pragma once

#include <cstdint>
#include <vector>

#include "channels.hpp"
#include "noise.hpp"
#include "phase_space.hpp"

namespace nmg {

struct NoisePath {
  double t0, dt;
  std::vector<Vec2> w;  // samples at t0 + j dt, j = 0..n_steps
};

// Exact stationary OU path on the uniform grid t0..t (dt must divide t - t0
// to 1e-9 relative). Components with zero weight are identically zero and
// consume no random draws; active components draw in (q, p) order per grid
// point. Stationary marginal variance is gamma d / 2 per component.
NoisePath sample_ou_path(double gamma, double d_q, double d_p, double t0,
                         double t, double dt, uint64_t seed);

// Trapezoid accumulation of v = int S^T_{u-t0} w(u) du over the path's grid.
// Pre: the path starts at t0.
Vec2 displacement_vector(const NoisePath& path, const QuadraticHamiltonian& h,
                         double t0);

// Streaming covariance accumulator (Welford/Chan): mergeable, and merging is
// deterministic in merge order, which the parallel driver fixes.
struct CovAccumulator {
  uint64_t n = 0;
  Vec2 mean;
  SymMat2 m2;  // sum of outer(v - mean) comoments

  void add(const Vec2& v);
  void merge(const CovAccumulator& o);
  SymMat2 covariance() const;  // sample covariance, n >= 2
};

struct EnsembleEstimate {
  SymMat2 covariance;      // empirical Cov[v]
  SymMat2 stderr_jk;       // jackknife standard error per entry
  SymMat2 predicted;       // gram_g(k, h, t, t0).g
  SymMat2 z;               // (covariance - predicted) / stderr_jk, entrywise
  Vec2 mean;               // empirical E[v] (should vanish)
  Vec2 mean_stderr;        // sqrt(cov_ii / n)
  uint64_t n_paths;
  uint64_t seed;
  double t, t0, dt;
  int blocks;              // jackknife blocks used
};

// Monte Carlo closure test of gram_g for an OU kernel (invalid_argument for
// other kernel families). z entries are 0 when both the difference and the
// error bar vanish, +inf when only the error bar does.
EnsembleEstimate empirical_g(const NoiseKernel& k,
                             const QuadraticHamiltonian& h, double t0, double t,
                             double dt, uint64_t n_paths, uint64_t seed);

}  // namespace nmg

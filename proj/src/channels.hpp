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

// channels.hpp — Gaussian dynamical maps and intertwiners.
//
// The noise average of the linear dynamics produces Gaussian channels acting
// on covariance matrices as sigma -> a sigma a^T + b with a = S_{t-t0}. Two
// families share that shape and differ only in the noise block b:
//
//   Gamma_{t,t0}  evolution with noise correlations referenced to the start
//                 of its own interval: b = gtilde built from C(u, t0).
//   Lambda_{t,t0} the intertwiner Gamma_{t,0} = Lambda_{t,t0} o Gamma_{t0,0}:
//                 b = ltilde built from C(u, 0), which keeps memory of noise
//                 before t0. Lambda need not be completely positive; is_cp
//                 probing exactly that is the divisibility memory criterion.
//
// Phase-space Gram matrices g (for Gamma) and l (for Lambda) collect the same
// information in the characteristic-function picture:
//
//   g(t,t0) = int_{t0}^t du S^T_{u-t0} C(u,t0) S_{u-t0}
//           = int_{t0}^t int_{t0}^t du dv S^T_{u-t0} D(u,v) S_{v-t0},
//
// and gram_g evaluates both routes, asserts agreement, so a bug in either the
// Kossakowski layer or the kernel layer cannot pass silently. The noise block
// is the omega-conjugated, flow-transported form b = omega^T S^{-T} g S^{-1}
// omega, evaluated directly as int omega^T S^T_{u-t} C S_{u-t} omega du.

#pragma once

#include "generator.hpp"
#include "noise.hpp"
#include "phase_space.hpp"

namespace nmg {

struct GramMatrix {
  SymMat2 g;
  double t, t0;
  // max-abs disagreement between the single- and double-integral routes
  // (0 for white kernels, where the Dirac weight collapses both to one form).
  double route_discrepancy;
};

// g(t, t0); pre t >= t0. Throws consistency_error if the two integration
// routes disagree beyond 1e-6.
GramMatrix gram_g(const NoiseKernel& k, const QuadraticHamiltonian& h,
                  double t, double t0);

// l(t, t0) = int_{t0}^t du S^T_{u-t0} C(u,0) S_{u-t0}; the double-integral
// route is the triangle int_{t0}^t du int_0^u dv plus its transpose.
// Pre t >= t0 >= 0.
GramMatrix gram_ell(const NoiseKernel& k, const QuadraticHamiltonian& h,
                    double t, double t0);

enum class NoiseReference {
  kIntervalStart,  // C(u, t0): Gamma's noise block gtilde
  kOrigin,         // C(u, 0):  Lambda's noise block ltilde
};

// Covariance-matrix noise block int_{t0}^t omega^T S_{u-t}^T C S_{u-t} omega.
SymMat2 cm_noise(const NoiseKernel& k, const QuadraticHamiltonian& h, double t,
                 double t0, NoiseReference ref);

enum class MapKind { kGamma, kLambda, kComposed };

struct GaussianChannel {
  Mat2 a;      // linear part, S_{t-t0} for the built-in families
  SymMat2 b;   // additive noise block
  MapKind kind;
  double t, t0;
};

// Gamma_{t,t0}; pre t >= t0.
GaussianChannel gamma_channel(const NoiseKernel& k,
                              const QuadraticHamiltonian& h, double t,
                              double t0);

// Lambda_{t,t0}; pre t >= t0 >= 0.
GaussianChannel lambda_channel(const NoiseKernel& k,
                               const QuadraticHamiltonian& h, double t,
                               double t0);

struct ApplyResult {
  GaussianState state;     // sigma' = a sigma a^T + b, mean' = a mean
  StateValidity validity;  // may be invalid under non-CP intertwiners
};

ApplyResult apply(const GaussianChannel& ch, const GaussianState& s);

// c2 after c1: (a, b) = (a2 a1, a2 b1 a2^T + b2).
GaussianChannel compose(const GaussianChannel& c2, const GaussianChannel& c1);

struct SemigroupDeviation {
  double max_abs;
  double frobenius;
};

// How badly the Gram matrices fail the two-interval composition law
//   S^T_{t1-t0} g(t2,t1) S_{t1-t0} + g(t1,t0) = g(t2,t0);
// zero (to quadrature accuracy) iff the averaged dynamics forgets its start
// time. Pre t0 <= t1 <= t2.
SemigroupDeviation semigroup_deviation(const NoiseKernel& k,
                                       const QuadraticHamiltonian& h,
                                       double t0, double t1, double t2);

struct CpResult {
  bool cp;
  double witness;  // min eigenvalue of the noise block b; cp iff >= -1e-10
};

// Complete positivity of a Gaussian channel whose linear part is symplectic:
// cp iff b >= 0. Throws domain_error if a is not symplectic to 1e-10 (the
// simple criterion does not apply then).
CpResult is_cp(const GaussianChannel& ch);

// Gaussian weight over displacements in the channel's Kraus-like unraveling:
//   F(y) = normalization * exp(-1/2 y^T inverse_covariance y),
// normalization = 1/sqrt(det g), inverse_covariance = omega g^{-1} omega^T,
// normalized so int F(y) d^2 y / (2 pi) = 1.
struct KrausWeight {
  double normalization;
  SymMat2 inverse_covariance;
};

// Pre: g strictly positive definite (min eigenvalue > 1e-12), else
// domain_error — the weight degenerates to a singular distribution.
KrausWeight kraus_density(const GramMatrix& g);

double kraus_density_at(const KrausWeight& w, const Vec2& y);

}  // namespace nmg

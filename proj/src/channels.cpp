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

// channels.cpp — Gram matrices, channel construction, CP and Kraus weights.

#include "channels.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace nmg {

namespace {

constexpr double kRouteTol = 1e-6;

// Single-integral route: int_a^b S^T_{u-base} C(u, cref) S_{u-base} du.
// base selects the flow reference (t0 for Gram matrices, t for noise blocks).
SymMat2 transported_c_integral(const NoiseKernel& k,
                               const QuadraticHamiltonian& h, double a,
                               double b, double base, double cref,
                               bool omega_sandwich) {
  const auto integrand = [&](double u) {
    const SymMat2 c = kossakowski(k, h, u, cref).c;
    SymMat2 m = congruence(symplectic_flow(h, u - base).transpose(), c);
    return omega_sandwich ? omega_conjugate(m) : m;
  };
  return integrate<SymMat2>(integrand, a, b, 1e-10, 20);
}

// Double-integral route: triangle T = int_a^b du int_{lo}^u dv
// S^T_{u-base} D(u,v) S_{v-base}, returned as T + T^T.
SymMat2 kernel_square_integral(const NoiseKernel& k,
                               const QuadraticHamiltonian& h, double a,
                               double b, double base, double lo) {
  const auto integrand = [&](double u, double v) {
    return symplectic_flow(h, u - base).transpose() * eval_kernel(k, u, v) *
           symplectic_flow(h, v - base);
  };
  const Mat2 tri = integrate_triangle_from<Mat2>(integrand, a, b, lo, 1e-9, 20);
  return (tri + tri.transpose()).symmetrize().first;
}

GramMatrix gram_common(const NoiseKernel& k, const QuadraticHamiltonian& h,
                       double t, double t0, double cref, const char* name) {
  if (t == t0) {
    return {SymMat2::zero(), t, t0, 0.0};
  }
  const SymMat2 via_c = transported_c_integral(k, h, t0, t, t0, cref, false);
  if (std::holds_alternative<WhiteNoise>(k)) {
    // The Dirac weight collapses the double integral onto the same single
    // integral; there is no independent second route to compare.
    return {via_c, t, t0, 0.0};
  }
  const SymMat2 via_d = kernel_square_integral(k, h, t0, t, t0, cref);
  const double discrepancy = (via_c - via_d).max_abs();
  if (discrepancy > kRouteTol) {
    throw consistency_error(std::string(name) +
                                ": single- and double-integral routes disagree",
                            discrepancy);
  }
  return {via_c, t, t0, discrepancy};
}

}  // namespace

GramMatrix gram_g(const NoiseKernel& k, const QuadraticHamiltonian& h, double t,
                  double t0) {
  if (t < t0) {
    throw std::domain_error("gram_g requires t >= t0");
  }
  return gram_common(k, h, t, t0, t0, "gram_g");
}

GramMatrix gram_ell(const NoiseKernel& k, const QuadraticHamiltonian& h,
                    double t, double t0) {
  if (t < t0 || t0 < 0.0) {
    throw std::domain_error("gram_ell requires t >= t0 >= 0");
  }
  return gram_common(k, h, t, t0, 0.0, "gram_ell");
}

SymMat2 cm_noise(const NoiseKernel& k, const QuadraticHamiltonian& h, double t,
                 double t0, NoiseReference ref) {
  const double cref = ref == NoiseReference::kIntervalStart ? t0 : 0.0;
  if (t < t0 || cref < 0.0 || (ref == NoiseReference::kOrigin && t0 < 0.0)) {
    throw std::domain_error("cm_noise requires t >= t0 (and t0 >= 0 for the "
                            "origin-referenced block)");
  }
  if (t == t0) {
    return SymMat2::zero();
  }
  return transported_c_integral(k, h, t0, t, t, cref, true);
}

GaussianChannel gamma_channel(const NoiseKernel& k,
                              const QuadraticHamiltonian& h, double t,
                              double t0) {
  if (t < t0) {
    throw std::domain_error("gamma_channel requires t >= t0");
  }
  return {symplectic_flow(h, t - t0),
          cm_noise(k, h, t, t0, NoiseReference::kIntervalStart),
          MapKind::kGamma, t, t0};
}

GaussianChannel lambda_channel(const NoiseKernel& k,
                               const QuadraticHamiltonian& h, double t,
                               double t0) {
  if (t < t0 || t0 < 0.0) {
    throw std::domain_error("lambda_channel requires t >= t0 >= 0");
  }
  return {symplectic_flow(h, t - t0),
          cm_noise(k, h, t, t0, NoiseReference::kOrigin), MapKind::kLambda, t,
          t0};
}

ApplyResult apply(const GaussianChannel& ch, const GaussianState& s) {
  GaussianState out{congruence(ch.a, s.cm) + ch.b, ch.a * s.mean};
  return {out, is_valid_state(out)};
}

GaussianChannel compose(const GaussianChannel& c2, const GaussianChannel& c1) {
  return {c2.a * c1.a, congruence(c2.a, c1.b) + c2.b, MapKind::kComposed, c2.t,
          c1.t0};
}

SemigroupDeviation semigroup_deviation(const NoiseKernel& k,
                                       const QuadraticHamiltonian& h, double t0,
                                       double t1, double t2) {
  if (!(t0 <= t1 && t1 <= t2)) {
    throw std::domain_error("semigroup_deviation requires t0 <= t1 <= t2");
  }
  const Mat2 s01t = symplectic_flow(h, t1 - t0).transpose();
  const SymMat2 lhs = congruence(s01t, gram_g(k, h, t2, t1).g) +
                      gram_g(k, h, t1, t0).g;
  const SymMat2 diff = lhs - gram_g(k, h, t2, t0).g;
  return {diff.max_abs(), diff.full().frobenius()};
}

CpResult is_cp(const GaussianChannel& ch) {
  const Mat2 omega = symplectic_form();
  const Mat2 defect = ch.a * omega * ch.a.transpose() - omega;
  if (defect.max_abs() > 1e-10) {
    throw std::domain_error(
        "is_cp requires a symplectic linear part (defect beyond 1e-10)");
  }
  const double witness = ch.b.min_eigenvalue();
  return {witness >= -1e-10, witness};
}

KrausWeight kraus_density(const GramMatrix& g) {
  if (g.g.min_eigenvalue() <= 1e-12) {
    throw std::domain_error(
        "kraus_density requires a strictly positive definite Gram matrix");
  }
  const auto [inv, defect] = g.g.full().inverse().symmetrize();
  (void)defect;  // inverse of a symmetric 2x2 is symmetric in closed form
  return {1.0 / std::sqrt(g.g.det()), omega_conjugate(inv)};
}

double kraus_density_at(const KrausWeight& w, const Vec2& y) {
  const double quad = w.inverse_covariance.xx * y.x * y.x +
                      2.0 * w.inverse_covariance.xp * y.x * y.p +
                      w.inverse_covariance.pp * y.p * y.p;
  return w.normalization * std::exp(-0.5 * quad);
}

}  // namespace nmg

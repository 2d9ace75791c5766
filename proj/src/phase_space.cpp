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

// phase_space.cpp — closed-form implementations of the 2x2 phase-space ops.

#include "phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmg {

double Mat2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

double Mat2::frobenius() const {
  return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (std::abs(d) < 1e-300) {
    throw std::domain_error("Mat2::inverse: matrix is singular");
  }
  const double inv = 1.0 / d;
  return {inv * a22, -inv * a12, -inv * a21, inv * a11};
}

std::pair<SymMat2, double> Mat2::symmetrize() const {
  const double defect = std::abs(a12 - a21);
  return {SymMat2{a11, 0.5 * (a12 + a21), a22}, defect};
}

double SymMat2::max_abs() const {
  return std::max({std::abs(xx), std::abs(xp), std::abs(pp)});
}

std::pair<double, double> SymMat2::eigenvalues() const {
  const double mid = 0.5 * (xx + pp);
  const double half_gap = 0.5 * (xx - pp);
  const double disc = std::hypot(half_gap, xp);
  return {mid + disc, mid - disc};
}

SymMat2 congruence(const Mat2& a, const SymMat2& m) {
  // Row images u = a * (row 1 of m), w = a * (row 2 of m) give
  // a m a^T = [[u.r1, u.r2], [w.r1, w.r2]] with exact symmetry by construction.
  const Mat2 am = a * m.full();
  return {am.a11 * a.a11 + am.a12 * a.a12,
          am.a11 * a.a21 + am.a12 * a.a22,
          am.a21 * a.a21 + am.a22 * a.a22};
}

StateValidity is_valid_state(const GaussianState& s) {
  const double d = s.cm.det();
  const double margin = d - 0.25;
  // det >= 1/4 - tol plus a positive diagonal entry pins sigma > 0: for 2x2,
  // det > 0 makes the diagonal entries share a sign.
  const bool valid = s.cm.xx > 0.0 && margin >= -1e-12;
  return {valid, margin};
}

namespace {

// Scalar coefficients of exp(t A) = c I + k A for traceless A with
// A^2 = -det(A) I. Let u = det(A) t^2:
//   u > 0:  c = cos(sqrt(u)),   k = t sin(sqrt(u))/sqrt(u)
//   u < 0:  c = cosh(sqrt(-u)), k = t sinh(sqrt(-u))/sqrt(-u)
//   u ~ 0:  short even series in u (both branches meet here smoothly).
void flow_coefficients(double det_a, double t, double* c, double* k) {
  const double u = det_a * t * t;
  if (std::abs(u) < 1e-6) {
    // c = 1 - u/2! + u^2/4! - u^3/6!, k/t = 1 - u/3! + u^2/5! - u^3/7!;
    // truncation error ~ u^4/8! < 1.3e-29 at |u| = 1e-6.
    *c = 1.0 + u * (-0.5 + u * (1.0 / 24.0 - u / 720.0));
    *k = t * (1.0 + u * (-1.0 / 6.0 + u * (1.0 / 120.0 - u / 5040.0)));
    return;
  }
  if (u > 0.0) {
    const double w = std::sqrt(u);
    *c = std::cos(w);
    *k = t * std::sin(w) / w;
  } else {
    const double w = std::sqrt(-u);
    *c = std::cosh(w);
    *k = t * std::sinh(w) / w;
  }
}

}  // namespace

Mat2 symplectic_flow(const QuadraticHamiltonian& h, double t) {
  // A = omega h = [[h.xp, h.pp], [-h.xx, -h.xp]]; tr A = 0, det A = det h.
  const SymMat2& m = h.hessian;
  double c = 0.0, k = 0.0;
  flow_coefficients(m.det(), t, &c, &k);
  return {c + k * m.xp, k * m.pp, -k * m.xx, c - k * m.xp};
}

RotationDiag diagonalize_by_rotation(const SymMat2& m) {
  // Rotation angle from tan(2 theta) = 2 xp / (xx - pp); atan2 handles the
  // degenerate xx == pp case (including the exact-multiple-of-identity one,
  // where any rotation works and theta comes out 0).
  const double theta = (m.xp == 0.0 && m.xx == m.pp)
                           ? 0.0
                           : 0.5 * std::atan2(2.0 * m.xp, m.xx - m.pp);
  const double c = std::cos(theta), s = std::sin(theta);
  Mat2 v{c, s, -s, c};
  double e1 = c * c * m.xx + 2.0 * c * s * m.xp + s * s * m.pp;
  double e2 = s * s * m.xx - 2.0 * c * s * m.xp + c * c * m.pp;
  if (e1 < e2) {
    // Compose with the quarter-turn [[0, 1], [-1, 0]] to swap the axes; the
    // product of two rotations stays a rotation.
    v = symplectic_form() * v;
    std::swap(e1, e2);
  }
  return {v, e1, e2};
}

}  // namespace nmg

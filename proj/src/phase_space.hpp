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

// phase_space.hpp — 2x2 linear algebra over the (x, p) phase plane of a single
// bosonic mode: dense and symmetric matrices, quadratic Hamiltonians and their
// symplectic flows, and Gaussian states with their validity test.
//
// Conventions (hbar = 1 throughout):
//   r = (x, p),  [x, p] = i  <=>  symplectic form  omega = [[0, 1], [-1, 0]].
//   A covariance matrix sigma is a valid quantum state iff sigma > 0 and
//   det(sigma) >= 1/4 (the 2x2 form of the Robertson-Schroedinger inequality).

#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace nmg {

struct SymMat2;

// Dense real 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }

  // Largest absolute entry; the norm used for all entrywise tolerances.
  double max_abs() const;
  double frobenius() const;

  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  friend Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }

  // Inverse; throws std::domain_error when |det| is negligible.
  Mat2 inverse() const;

  // Nearest symmetric matrix (a + a^T)/2 together with the symmetry defect
  // max|a - a^T| of the input, so callers can assert near-symmetry.
  std::pair<SymMat2, double> symmetrize() const;
};

// Symmetric real 2x2 matrix stored as its upper triangle.
struct SymMat2 {
  double xx = 0.0, xp = 0.0, pp = 0.0;

  static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
  static SymMat2 zero() { return {}; }
  static SymMat2 diag(double d1, double d2) { return {d1, 0.0, d2}; }

  double det() const { return xx * pp - xp * xp; }
  double trace() const { return xx + pp; }
  double max_abs() const;

  Mat2 full() const { return {xx, xp, xp, pp}; }

  SymMat2 operator+(const SymMat2& o) const {
    return {xx + o.xx, xp + o.xp, pp + o.pp};
  }
  SymMat2 operator-(const SymMat2& o) const {
    return {xx - o.xx, xp - o.xp, pp - o.pp};
  }
  friend SymMat2 operator*(double s, const SymMat2& m) {
    return {s * m.xx, s * m.xp, s * m.pp};
  }

  // Eigenvalues in descending order (closed form, no iteration).
  std::pair<double, double> eigenvalues() const;

  // min(eigenvalues); negative iff the matrix is indefinite or negative.
  double min_eigenvalue() const { return eigenvalues().second; }
};

// Congruence a * m * a^T for symmetric m; the result is exactly symmetric.
SymMat2 congruence(const Mat2& a, const SymMat2& m);

// The symplectic form omega = [[0, 1], [-1, 0]].
inline Mat2 symplectic_form() { return {0.0, 1.0, -1.0, 0.0}; }

// omega^T m omega for symmetric m: [[pp, -xp], [-xp, xx]].
inline SymMat2 omega_conjugate(const SymMat2& m) { return {m.pp, -m.xp, m.xx}; }

// Quadratic Hamiltonian H = 1/2 r^T h r, h symmetric (any signature).
struct QuadraticHamiltonian {
  SymMat2 hessian;

  // H = p^2/2 (free particle; flow is the shear [[1, t], [0, 1]]).
  static QuadraticHamiltonian free_particle() { return {{0.0, 0.0, 1.0}}; }
  // H = (x^2 + p^2)/2 (unit oscillator; flow is a clockwise-in-(x,p) rotation).
  static QuadraticHamiltonian oscillator() { return {SymMat2::identity()}; }
};

// Phase-space point / mean vector.
struct Vec2 {
  double x = 0.0, p = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, p + o.p}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, p - o.p}; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.p}; }
  double max_abs() const { return std::max(std::abs(x), std::abs(p)); }
};

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a11 * v.x + m.a12 * v.p, m.a21 * v.x + m.a22 * v.p};
}

// Gaussian state: covariance matrix and mean. Plain data; validity is a
// separate query because intermediate results of non-CP maps may leave the
// physical set and must still be representable.
struct GaussianState {
  SymMat2 cm;
  Vec2 mean;

  static GaussianState vacuum() { return {{0.5, 0.0, 0.5}, {}}; }
  // Squeezed vacuum 1/2 diag(e^{2r}, e^{-2r}).
  static GaussianState squeezed(double r) {
    return {{0.5 * std::exp(2.0 * r), 0.0, 0.5 * std::exp(-2.0 * r)}, {}};
  }
};

struct StateValidity {
  bool valid;     // sigma > 0 and det(sigma) >= 1/4 - 1e-12
  double margin;  // det(sigma) - 1/4, signed
};

StateValidity is_valid_state(const GaussianState& s);

// Symplectic flow S_t = exp(t omega h): the linear map r(0) -> r(t) generated
// by the quadratic Hamiltonian with Hessian h. Exact closed form for every h
// (omega h is traceless, so the exponential reduces to trig / hyperbolic /
// affine branches on det h).
Mat2 symplectic_flow(const QuadraticHamiltonian& h, double t);

// Eigendecomposition of a symmetric 2x2 by a rotation: returns (v, e1, e2)
// with v a rotation matrix (orthogonal, det +1, hence symplectic) such that
// v m v^T = diag(e1, e2) and e1 >= e2.
struct RotationDiag {
  Mat2 v;
  double e1, e2;
};

RotationDiag diagonalize_by_rotation(const SymMat2& m);

}  // namespace nmg

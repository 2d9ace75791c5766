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

// generator.cpp — Kossakowski matrix via closed forms or adaptive quadrature.

#include "generator.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace nmg {

namespace {

bool is_free_particle(const QuadraticHamiltonian& h) {
  return h.hessian.xx == 0.0 && h.hessian.xp == 0.0 && h.hessian.pp == 1.0;
}

// Free particle + OU kernel. With tau = t - t0, x = gamma tau, E = e^{-x}:
//   C11 = d_q (1 - E)
//   C12 = d_q (E (1 + x) - 1) / (2 gamma)
//   C22 = d_p (1 - E)
// The C12 numerator is written expm1(-x) + x e^{-x} so the cancellation for
// small x happens between accurately computed terms (abs error ~ eps * tau).
SymMat2 closed_form_ou_free(const OuDiagonal& ou, double tau) {
  const double x = ou.gamma * tau;
  const double one_minus_e = -std::expm1(-x);
  const double c12_num = std::expm1(-x) + x * std::exp(-x);
  return {ou.d_q * one_minus_e, ou.d_q * c12_num / (2.0 * ou.gamma),
          ou.d_p * one_minus_e};
}

SymMat2 quadrature_kossakowski(const NoiseKernel& k,
                               const QuadraticHamiltonian& h, double t,
                               double t0) {
  const auto integrand = [&](double u) {
    const Mat2 ds = eval_kernel(k, t, u) * symplectic_flow(h, u - t);
    return ds + ds.transpose();  // exactly symmetric entrywise
  };
  const Mat2 raw = integrate<Mat2>(integrand, t0, t, 1e-10, 20);
  const auto [sym, defect] = raw.symmetrize();
  if (defect > 1e-10) {
    throw numeric_error("Kossakowski integrand lost symmetry", defect);
  }
  return sym;
}

}  // namespace

KossakowskiMatrix kossakowski(const NoiseKernel& k,
                              const QuadraticHamiltonian& h, double t,
                              double t0, KossakowskiMethod method) {
  if (t < t0) {
    throw std::domain_error("kossakowski requires t >= t0");
  }
  if (t == t0) {
    return {SymMat2::zero(), t, t0};
  }
  const auto* ou = std::get_if<OuDiagonal>(&k);
  const auto* white = std::get_if<WhiteNoise>(&k);
  const bool closed_available = (white != nullptr) ||
                                (ou != nullptr && is_free_particle(h));
  if (method == KossakowskiMethod::kClosedForm && !closed_available) {
    throw std::invalid_argument(
        "no closed form for this kernel/Hamiltonian combination");
  }
  const bool use_closed =
      closed_available && method != KossakowskiMethod::kQuadrature;
  if (use_closed) {
    if (white != nullptr) {
      // The Dirac mass sits at the interval endpoint u = t where S_0 = I;
      // the half-weight endpoint convention gives C = d for every t > t0.
      return {white->weight, t, t0};
    }
    return {closed_form_ou_free(*ou, t - t0), t, t0};
  }
  if (white != nullptr) {
    // No meaningful pointwise quadrature against a Dirac kernel.
    throw std::invalid_argument(
        "white kernels have no quadrature path; use the closed form");
  }
  return {quadrature_kossakowski(k, h, t, t0), t, t0};
}

NegativityResult kossakowski_negativity(const KossakowskiMatrix& c) {
  const auto [e1, e2] = c.c.eigenvalues();
  return {e2, e1, e2 < -1e-12};
}

}  // namespace nmg

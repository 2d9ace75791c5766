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

// generator.hpp — time-local generator coefficients of the averaged dynamics.
//
// For noise kernel D and Hamiltonian flow S_t, the diffusion block of the
// time-local master equation started at t0 is the symmetric matrix
//
//   C(t, t0) = int_{t0}^{t} du [ D(t, u) S_{u-t} + S_{u-t}^T D(t, u)^T ].
//
// C depends on t0 for genuinely colored noise: that start-time dependence is
// one of the two memory criteria probed by this library (the other being
// divisibility, handled in channels.hpp). C need not be positive semidefinite;
// its negative eigenvalues are what kossakowski_negativity reports.

#pragma once

#include "noise.hpp"
#include "phase_space.hpp"

namespace nmg {

struct KossakowskiMatrix {
  SymMat2 c;
  double t, t0;
};

enum class KossakowskiMethod {
  kAuto,        // closed form when available, quadrature otherwise
  kClosedForm,  // closed form only; invalid_argument if none applies
  kQuadrature,  // always integrate numerically (testing / cross-checks)
};

// C(t, t0) for t >= t0 (domain_error otherwise). Closed forms exist for the
// free particle with an OU kernel and for any white kernel (where C == d for
// t > t0); everything else goes through adaptive quadrature at abs tol 1e-10.
KossakowskiMatrix kossakowski(const NoiseKernel& k,
                              const QuadraticHamiltonian& h, double t,
                              double t0,
                              KossakowskiMethod method = KossakowskiMethod::kAuto);

struct NegativityResult {
  double eig_min, eig_max;
  bool negative;  // eig_min < -1e-12
};

NegativityResult kossakowski_negativity(const KossakowskiMatrix& c);

}  // namespace nmg

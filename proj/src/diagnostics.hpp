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

// diagnostics.hpp — observable signatures of memory: Uhlmann fidelity
// trajectories, their non-monotonicity, and explicit positivity violations
// of the intertwiner maps.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "channels.hpp"
#include "noise.hpp"
#include "phase_space.hpp"

namespace nmg {

// Uhlmann fidelity of two one-mode Gaussian states (closed form). With
// Delta = det(sigma1 + sigma2) and dbar = 4 (det sigma1 - 1/4)(det sigma2 -
// 1/4) clamped at 0, the covariance part is 1 / (sqrt(Delta + dbar) -
// sqrt(dbar)); a mean offset u multiplies exp(-1/2 u^T (sigma1+sigma2)^{-1}
// u). Result clamped to [0, 1]. Pre: both states valid (domain_error).
double fidelity(const GaussianState& s1, const GaussianState& s2);

struct FidelityTrajectory {
  std::vector<double> times;
  std::vector<double> values;
  double gamma;        // OU rate when the kernel is OU, NaN otherwise
  std::string family;  // kernel tag, see describe()
};

// F(t) = fidelity(Gamma_{t,0} sigma1, Gamma_{t,0} sigma2) on the given grid.
// Pre: times strictly increasing with times[0] == 0, both states valid.
// Quantum data processing makes F non-decreasing whenever every Gamma_{t,0}
// is CP; any genuine decrease witnesses information backflow.
FidelityTrajectory fidelity_trajectory(const NoiseKernel& k,
                                       const QuadraticHamiltonian& h,
                                       const GaussianState& s1,
                                       const GaussianState& s2,
                                       const std::vector<double>& times);

struct DecreasingInterval {
  double t_begin, t_end;
  double drop;  // value at t_begin minus value at t_end, > 0
};

struct NonmonotonicityResult {
  std::vector<DecreasingInterval> intervals;
  double max_drop;  // 0 when no interval found
};

// Maximal runs of consecutive grid steps on which the trajectory drops by
// more than tol. Pre: at least 3 samples.
NonmonotonicityResult detect_nonmonotonicity(const FidelityTrajectory& tr,
                                             double tol);

// Witness that Lambda_{t0+dt, t0} maps a physical state outside the physical
// set. The search works in the eigenbasis of W = omega^T C(t0, 0) omega: with
// W ~ diag(lambda_pos, -mu_neg), a pure input squeezed hard along the
// shrinking direction has first-order det rate lambda_pos * s_pp - mu_neg *
// s_qq < 0, so a geometric sweep of squeezing strengths finds an explicit
// violation whenever C(t0, 0) is indefinite.
struct ViolationCertificate {
  double t0, t;      // the probed intertwiner Lambda_{t, t0}, t = t0 + dt
  SymMat2 sigma0;    // pure state reached at t0 (input is S_{-dt} transported)
  Mat2 v;            // rotation with v W v^T = diag(lambda_pos, -mu_neg)
  double lambda_pos; // growing-direction eigenvalue of W
  double mu_neg;     // modulus of the shrinking-direction eigenvalue
  double det_out;    // det of the output covariance, < 1/4 - 1e-12
};

// Returns the certificate, or nullopt when C(t0, 0) has no negative
// direction (momentum-coupled and white kernels). Pre: t0 > 0, dt > 0.
std::optional<ViolationCertificate> find_positivity_violation(
    const NoiseKernel& k, const QuadraticHamiltonian& h, double t0, double dt);

// The input state whose image the certificate bounds: S_{-dt} sigma0 S_{-dt}^T
// (pure, so automatically physical).
SymMat2 certificate_input_cm(const ViolationCertificate& cert,
                             const QuadraticHamiltonian& h);

}  // namespace nmg

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

// diagnostics.cpp — fidelity, trajectory monotonicity, violation search.

#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "generator.hpp"

namespace nmg {

double fidelity(const GaussianState& s1, const GaussianState& s2) {
  if (!is_valid_state(s1).valid || !is_valid_state(s2).valid) {
    throw std::domain_error("fidelity requires two valid Gaussian states");
  }
  const SymMat2 sum = s1.cm + s2.cm;
  const double big_delta = sum.det();
  const double dbar =
      std::max(0.0, 4.0 * (s1.cm.det() - 0.25) * (s2.cm.det() - 0.25));
  const double cm_part = 1.0 / (std::sqrt(big_delta + dbar) - std::sqrt(dbar));
  const Vec2 u = s1.mean - s2.mean;
  double mean_part = 1.0;
  if (u.x != 0.0 || u.p != 0.0) {
    const Mat2 inv = sum.full().inverse();
    const Vec2 iu = inv * u;
    mean_part = std::exp(-0.5 * (u.x * iu.x + u.p * iu.p));
  }
  return std::clamp(cm_part * mean_part, 0.0, 1.0);
}

FidelityTrajectory fidelity_trajectory(const NoiseKernel& k,
                                       const QuadraticHamiltonian& h,
                                       const GaussianState& s1,
                                       const GaussianState& s2,
                                       const std::vector<double>& times) {
  if (times.size() < 2 || times.front() != 0.0) {
    throw std::domain_error(
        "fidelity_trajectory needs a grid of >= 2 times starting at 0");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw std::domain_error(
        "fidelity_trajectory times must be strictly increasing");
  }
  if (!is_valid_state(s1).valid || !is_valid_state(s2).valid) {
    throw std::domain_error("fidelity_trajectory requires valid input states");
  }
  FidelityTrajectory tr;
  tr.times = times;
  tr.values.reserve(times.size());
  for (const double t : times) {
    const GaussianChannel ch = gamma_channel(k, h, t, 0.0);
    tr.values.push_back(fidelity(apply(ch, s1).state, apply(ch, s2).state));
  }
  const auto* ou = std::get_if<OuDiagonal>(&k);
  tr.gamma = ou != nullptr ? ou->gamma
                           : std::numeric_limits<double>::quiet_NaN();
  tr.family = describe(k);
  return tr;
}

NonmonotonicityResult detect_nonmonotonicity(const FidelityTrajectory& tr,
                                             double tol) {
  const size_t n = tr.values.size();
  if (n < 3 || tr.times.size() != n) {
    throw std::domain_error("detect_nonmonotonicity needs >= 3 samples");
  }
  NonmonotonicityResult res{{}, 0.0};
  size_t i = 0;
  while (i + 1 < n) {
    if (tr.values[i + 1] - tr.values[i] < -tol) {
      size_t j = i + 1;
      while (j + 1 < n && tr.values[j + 1] - tr.values[j] < -tol) {
        ++j;
      }
      const double drop = tr.values[i] - tr.values[j];
      res.intervals.push_back({tr.times[i], tr.times[j], drop});
      res.max_drop = std::max(res.max_drop, drop);
      i = j;
    } else {
      ++i;
    }
  }
  return res;
}

std::optional<ViolationCertificate> find_positivity_violation(
    const NoiseKernel& k, const QuadraticHamiltonian& h, double t0,
    double dt) {
  if (!(t0 > 0.0) || !(dt > 0.0)) {
    throw std::domain_error(
        "find_positivity_violation requires t0 > 0 and dt > 0");
  }
  const SymMat2 c0 = kossakowski(k, h, t0, 0.0).c;
  const SymMat2 w = omega_conjugate(c0);
  const RotationDiag rd = diagonalize_by_rotation(w);
  if (rd.e2 >= -1e-12) {
    return std::nullopt;  // no shrinking direction, nothing to exploit
  }
  const double lambda = rd.e1;
  const double mu = -rd.e2;
  const double t = t0 + dt;
  const SymMat2 ltilde = cm_noise(k, h, t, t0, NoiseReference::kOrigin);
  // Sweep squeezing strengths downward from half the first-order threshold
  // s_pp* = sqrt(mu / lambda) / 2 (any s_pp when lambda <= 0).
  double s_pp = lambda > 0.0 ? 0.25 * std::sqrt(mu / lambda) : 0.5;
  for (int i = 0; i < 40; ++i, s_pp *= 0.7) {
    const SymMat2 pure = SymMat2::diag(0.25 / s_pp, s_pp);
    const SymMat2 sigma0 = congruence(rd.v.transpose(), pure);
    const double det_out = (sigma0 + ltilde).det();
    if (det_out < 0.25 - 1e-12) {
      return ViolationCertificate{t0, t, sigma0, rd.v, lambda, mu, det_out};
    }
  }
  return std::nullopt;
}

SymMat2 certificate_input_cm(const ViolationCertificate& cert,
                             const QuadraticHamiltonian& h) {
  return congruence(symplectic_flow(h, cert.t0 - cert.t), cert.sigma0);
}

}  // namespace nmg

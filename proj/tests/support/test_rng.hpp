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

// test_rng.hpp — deterministic random inputs for property-style test cases.

#pragma once

#include <cmath>
#include <random>

#include "phase_space.hpp"

namespace nmg_test {

class TestRng {
 public:
  explicit TestRng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  int integer(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }

  nmg::SymMat2 symmetric(double lo, double hi) {
    return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
  }

  // Symmetric positive definite matrix with eigenvalues in [elo, ehi],
  // rotated by a random angle.
  nmg::SymMat2 spd(double elo, double ehi) {
    const double e1 = uniform(elo, ehi);
    const double e2 = uniform(elo, ehi);
    const double th = uniform(0.0, M_PI);
    const double c = std::cos(th), s = std::sin(th);
    return nmg::congruence(nmg::Mat2{c, -s, s, c}, nmg::SymMat2::diag(e1, e2));
  }

  // A physical covariance matrix: nu * (pure squeezed state), nu >= 1/2.
  nmg::SymMat2 covariance(double nu_lo, double nu_hi, double r_max) {
    const double nu = uniform(nu_lo, nu_hi);
    const double r = uniform(-r_max, r_max);
    const double th = uniform(0.0, M_PI);
    const double c = std::cos(th), s = std::sin(th);
    return nmg::congruence(
        nmg::Mat2{c, -s, s, c},
        nmg::SymMat2::diag(nu * std::exp(2.0 * r), nu * std::exp(-2.0 * r)));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nmg_test

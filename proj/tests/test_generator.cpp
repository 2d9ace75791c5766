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

// test_generator.cpp — Kossakowski matrices: frozen closed-form values,
// closed-form vs quadrature agreement, white-noise limits, negativity.

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "generator.hpp"
#include "support/series_expm.hpp"

using namespace nmg;

namespace {

// Independent trapezoid + Richardson evaluation of the defining integral,
// using the series-exponential flow (works for any Hamiltonian).
SymMat2 trapezoid_kossakowski(const NoiseKernel& k,
                              const QuadraticHamiltonian& h, double t,
                              double t0, std::size_t cells) {
  const auto sum_at = [&](std::size_t n) {
    const double step = (t - t0) / static_cast<double>(n);
    double s11 = 0.0, s12 = 0.0, s22 = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double u = t0 + i * step;
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      const Mat2 d = eval_kernel(k, t, u);
      const auto sflow = nmg_test::series_expm(nmg_test::flow_generator(
          h.hessian.xx, h.hessian.xp, h.hessian.pp, u - t));
      const Mat2 sm{sflow[0][0], sflow[0][1], sflow[1][0], sflow[1][1]};
      const Mat2 f = d * sm + (d * sm).transpose();
      s11 += w * f.a11;
      s12 += w * f.a12;
      s22 += w * f.a22;
    }
    return SymMat2{step * s11, step * s12, step * s22};
  };
  const SymMat2 a = sum_at(cells);
  const SymMat2 b = sum_at(2 * cells);
  const SymMat2 c = sum_at(4 * cells);
  const auto rich = [](double coarse, double fine) {
    return (4.0 * fine - coarse) / 3.0;
  };
  const auto rich2 = [](double coarse, double fine) {
    return (16.0 * fine - coarse) / 15.0;
  };
  const SymMat2 r1{rich(a.xx, b.xx), rich(a.xp, b.xp), rich(a.pp, b.pp)};
  const SymMat2 r2{rich(b.xx, c.xx), rich(b.xp, c.xp), rich(b.pp, c.pp)};
  return {rich2(r1.xx, r2.xx), rich2(r1.xp, r2.xp), rich2(r1.pp, r2.pp)};
}

const QuadraticHamiltonian kFree = QuadraticHamiltonian::free_particle();

}  // namespace

TEST_CASE("position-coupled OU closed form: frozen values at gamma=tau=1") {
  const auto c = kossakowski(make_ou(1.0, 1.0, 0.0), kFree, 1.0, 0.0);
  CHECK(c.c.xx == doctest::Approx(0.63212055882855767).epsilon(1e-14));
  CHECK(c.c.xp == doctest::Approx(-0.13212055882855767).epsilon(1e-14));
  CHECK(c.c.pp == 0.0);
  CHECK(c.t == 1.0);
  CHECK(c.t0 == 0.0);
}

TEST_CASE("momentum-coupled OU closed form is diagonal") {
  for (const double gamma : {0.3, 1.0, 4.0}) {
    for (const double tau : {0.1, 1.0, 5.0}) {
      const auto c =
          kossakowski(make_ou(gamma, 0.0, 2.0), kFree, tau + 0.5, 0.5);
      CHECK(c.c.xx == 0.0);
      CHECK(c.c.xp == 0.0);
      CHECK(c.c.pp ==
            doctest::Approx(2.0 * (1.0 - std::exp(-gamma * tau)))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("coefficients are additive in the coupling weights") {
  const auto mixed = kossakowski(make_ou(0.8, 1.5, 0.7), kFree, 2.0, 0.25);
  const auto pos = kossakowski(make_ou(0.8, 1.5, 0.0), kFree, 2.0, 0.25);
  const auto mom = kossakowski(make_ou(0.8, 0.0, 0.7), kFree, 2.0, 0.25);
  CHECK(((pos.c + mom.c) - mixed.c).max_abs() < 1e-15);
}

TEST_CASE("degenerate interval and ordering guard") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.5);
  const auto c = kossakowski(k, kFree, 2.0, 2.0);
  CHECK(c.c.max_abs() == 0.0);
  CHECK_THROWS_AS(kossakowski(k, kFree, 1.0, 2.0), std::domain_error);
}

TEST_CASE("white kernel: C equals the Dirac weight for every t > t0") {
  const NoiseKernel k = make_white({1.0, 0.25, 0.5});
  for (const double t : {1e-6, 0.5, 3.0, 100.0}) {
    const auto c = kossakowski(k, kFree, t, 0.0);
    CHECK(c.c.xx == 1.0);
    CHECK(c.c.xp == 0.25);
    CHECK(c.c.pp == 0.5);
  }
  CHECK(kossakowski(k, kFree, 0.0, 0.0).c.max_abs() == 0.0);
  CHECK_THROWS_AS(
      kossakowski(k, kFree, 1.0, 0.0, KossakowskiMethod::kQuadrature),
      std::invalid_argument);
}

TEST_CASE("quadrature path reproduces the closed forms on the rate grid") {
  for (const double gamma : {0.1, 1.0, 10.0}) {
    for (const double tau : {0.01, 0.1, 1.0, 10.0}) {
      const NoiseKernel k = make_ou(gamma, 1.0, 0.5);
      const auto closed =
          kossakowski(k, kFree, tau, 0.0, KossakowskiMethod::kClosedForm);
      const auto quad =
          kossakowski(k, kFree, tau, 0.0, KossakowskiMethod::kQuadrature);
      CHECK((closed.c - quad.c).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("closed-form dispatch rejects unsupported combinations") {
  const auto osc = QuadraticHamiltonian::oscillator();
  CHECK_THROWS_AS(kossakowski(make_ou(1.0, 1.0, 0.0), osc, 1.0, 0.0,
                              KossakowskiMethod::kClosedForm),
                  std::invalid_argument);
}

TEST_CASE("oscillator + OU goes through quadrature; matches trapezoid") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.0);
  const auto osc = QuadraticHamiltonian::oscillator();
  for (const double t : {0.7, 2.0}) {
    const auto c = kossakowski(k, osc, t, 0.0);
    const SymMat2 ref = trapezoid_kossakowski(k, osc, t, 0.0, 200);
    CHECK((c.c - ref).max_abs() < 1e-8);
  }
}

TEST_CASE("large gamma approaches the white-noise kernel") {
  for (const double gamma : {1e2, 1e3, 1e4}) {
    const auto c = kossakowski(make_ou(gamma, 1.0, 0.5), kFree, 1.0, 0.0);
    const SymMat2 white{1.0, 0.0, 0.5};
    CHECK((c.c - white).max_abs() < 10.0 / gamma);
  }
}

TEST_CASE("small-x evaluation of the off-diagonal entry is stable") {
  // C12 ~ -d_q gamma tau^2 / 4 for gamma tau << 1; the implementation must
  // not lose it to cancellation.
  const double gamma = 1e-4;
  const auto c = kossakowski(make_ou(gamma, 1.0, 0.0), kFree, 1.0, 0.0);
  const double x = gamma * 1.0;
  const double series = -(x * x / 2.0 - x * x * x / 3.0) / (2.0 * gamma);
  CHECK(c.c.xp == doctest::Approx(series).epsilon(1e-6));
  CHECK(std::abs(c.c.xp) > 1e-9);  // not flushed to zero
}

TEST_CASE("negativity: position coupling is indefinite, momentum is not") {
  const NegativityResult frozen = kossakowski_negativity(
      {{0.63212055882855767, -0.13212055882855767, 0.0}, 1.0, 0.0});
  CHECK(frozen.eig_max == doctest::Approx(0.65862405783897215).epsilon(1e-12));
  CHECK(frozen.eig_min ==
        doctest::Approx(-0.026503499010414489).epsilon(1e-12));
  CHECK(frozen.negative);

  for (double tau = 1e-3; tau <= 20.0; tau *= 2.0) {
    const auto pos = kossakowski(make_ou(1.0, 1.0, 0.0), kFree, tau, 0.0);
    CHECK(kossakowski_negativity(pos).negative);
    const auto mom = kossakowski(make_ou(1.0, 0.0, 1.0), kFree, tau, 0.0);
    const auto res = kossakowski_negativity(mom);
    CHECK_FALSE(res.negative);
    CHECK(res.eig_min >= -1e-12);
  }
}

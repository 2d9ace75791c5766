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

// test_channels.cpp — Gram matrices against an independent trapezoid oracle,
// channel algebra, the intertwiner identity, CP verdicts, Kraus weights.
//
// The white-noise frozen values here pin the overall normalization of the
// whole stack: g(1,0) = [[1, 1/2], [1/2, 1/3]] for unit position coupling is
// exactly Cov of int_0^1 S_u^T w(u) du, and the transported noise block
// [[t^3/3, t^2/2], [t^2/2, t]] reproduces the textbook momentum-diffusion
// growth sigma_pp = d_q t. Any spurious factor of 2 anywhere fails these.

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "channels.hpp"
#include "support/test_rng.hpp"
#include "support/trapezoid_gram.hpp"

using namespace nmg;
using nmg_test::TestRng;

namespace {

const QuadraticHamiltonian kFree = QuadraticHamiltonian::free_particle();

double sym_diff(const SymMat2& a, const nmg_test::RawSym& b) {
  return std::max({std::abs(a.xx - b.xx), std::abs(a.xp - b.xp),
                   std::abs(a.pp - b.pp)});
}

}  // namespace

TEST_CASE("white-noise gram_g: exact cubic profile") {
  const NoiseKernel k = make_white({1.0, 0.0, 0.0});
  const GramMatrix g1 = gram_g(k, kFree, 1.0, 0.0);
  CHECK(g1.g.xx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g1.g.xp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g1.g.pp == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(g1.route_discrepancy == 0.0);

  // General tau = t - t0, mixed weights: [[dq tau, dq tau^2/2],
  // [dq tau^2/2, dq tau^3/3 + dp tau]].
  const NoiseKernel mixed = make_white({0.8, 0.0, 0.6});
  for (const auto& [t0, t] : {std::pair{0.5, 2.5}, std::pair{1.0, 1.25}}) {
    const double tau = t - t0;
    const GramMatrix g = gram_g(mixed, kFree, t, t0);
    CHECK(g.g.xx == doctest::Approx(0.8 * tau).epsilon(1e-11));
    CHECK(g.g.xp == doctest::Approx(0.8 * tau * tau / 2.0).epsilon(1e-11));
    CHECK(g.g.pp ==
          doctest::Approx(0.8 * tau * tau * tau / 3.0 + 0.6 * tau)
              .epsilon(1e-11));
  }
}

TEST_CASE("gram_g degenerate interval and ordering guard") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.0);
  CHECK(gram_g(k, kFree, 1.5, 1.5).g.max_abs() == 0.0);
  CHECK_THROWS_AS(gram_g(k, kFree, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(gram_ell(k, kFree, 1.0, -0.5), std::domain_error);
}

TEST_CASE("gram_g matches the trapezoid oracle for OU kernels") {
  for (const double gamma : {0.3, 1.0, 3.0}) {
    for (const auto& [t0, t] :
         {std::pair{0.0, 1.0}, std::pair{0.5, 1.5}, std::pair{1.0, 3.0}}) {
      const nmg_test::OuSpec spec{gamma, 1.0, 0.5};
      const GramMatrix g =
          gram_g(make_ou(gamma, 1.0, 0.5), kFree, t, t0);
      const auto oracle = nmg_test::gram_oracle(spec, t0, t, t0, 60);
      CHECK(sym_diff(g.g, oracle) < 1e-7);
      CHECK(g.route_discrepancy < 1e-6);
    }
  }
}

TEST_CASE("analytic OU position gram_g at gamma = 1, t = 1") {
  // Exact antiderivatives of the transported closed-form coefficients.
  const GramMatrix g = gram_g(make_ou(1.0, 1.0, 0.0), kFree, 1.0, 0.0);
  CHECK(g.g.xx == doctest::Approx(0.36787944117144233).epsilon(1e-10));
  CHECK(g.g.xp == doctest::Approx(0.18393972058572117).epsilon(1e-10));
  CHECK(g.g.pp == doctest::Approx(0.097574450990448647).epsilon(1e-10));
}

TEST_CASE("gram matrices are positive semidefinite") {
  TestRng rng(2101);
  for (int i = 0; i < 25; ++i) {
    const NoiseKernel k = make_ou(rng.uniform(0.2, 5.0),
                                  rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0));
    const double t0 = rng.uniform(0.0, 2.0);
    const double t = t0 + rng.uniform(0.1, 3.0);
    CHECK(gram_g(k, kFree, t, t0).g.min_eigenvalue() >= -1e-10);
    CHECK(gram_ell(k, kFree, t, t0).g.min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("gram_ell equals gram_g when the interval starts at the origin") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.5);
  const GramMatrix ell = gram_ell(k, kFree, 1.5, 0.0);
  const GramMatrix g = gram_g(k, kFree, 1.5, 0.0);
  CHECK((ell.g - g.g).max_abs() < 1e-14);
}

TEST_CASE("gram_ell matches the trapezoid oracle (memory reaches to 0)") {
  for (const double gamma : {0.5, 1.0, 2.0}) {
    const nmg_test::OuSpec spec{gamma, 1.0, 0.0};
    const GramMatrix ell = gram_ell(make_ou(gamma, 1.0, 0.0), kFree, 2.0, 1.0);
    // Oracle grid spans [0, 2] so t0 = 1 falls on a node.
    const auto oracle = nmg_test::gram_oracle(spec, 1.0, 2.0, 0.0, 60);
    CHECK(sym_diff(ell.g, oracle) < 1e-7);
  }
}

TEST_CASE("intertwiner identity: l = S^{-T}[g(t,0) - g(t0,0)]S^{-1}") {
  for (const double gamma : {0.5, 1.0, 2.0}) {
    const NoiseKernel k = make_ou(gamma, 1.0, 0.3);
    for (const auto& [t0, t] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.5}}) {
      const SymMat2 lhs = gram_ell(k, kFree, t, t0).g;
      const SymMat2 diff = gram_g(k, kFree, t, 0.0).g -
                           gram_g(k, kFree, t0, 0.0).g;
      const SymMat2 rhs =
          congruence(symplectic_flow(kFree, -t0).transpose(), diff);
      CHECK((lhs - rhs).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("cm_noise is the omega-conjugated transported Gram matrix") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.5);
  for (const auto& [t0, t] : {std::pair{0.0, 1.0}, std::pair{0.7, 2.2}}) {
    const SymMat2 gt = cm_noise(k, kFree, t, t0, NoiseReference::kIntervalStart);
    const SymMat2 g = gram_g(k, kFree, t, t0).g;
    const SymMat2 transported =
        congruence(symplectic_flow(kFree, -(t - t0)).transpose(), g);
    CHECK((gt - omega_conjugate(transported)).max_abs() < 1e-9);
  }
  CHECK(cm_noise(k, kFree, 1.0, 1.0, NoiseReference::kOrigin).max_abs() == 0.0);
}

TEST_CASE("white position noise block reproduces momentum diffusion") {
  const NoiseKernel k = make_white({1.0, 0.0, 0.0});
  for (const double t : {0.5, 1.0, 2.0}) {
    const SymMat2 gt = cm_noise(k, kFree, t, 0.0, NoiseReference::kIntervalStart);
    CHECK(gt.xx == doctest::Approx(t * t * t / 3.0).epsilon(1e-11));
    CHECK(gt.xp == doctest::Approx(t * t / 2.0).epsilon(1e-11));
    CHECK(gt.pp == doctest::Approx(t).epsilon(1e-11));
  }
}

TEST_CASE("channel construction and identity behaviour") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.0);
  const GaussianChannel id = gamma_channel(k, kFree, 0.0, 0.0);
  CHECK((id.a - Mat2::identity()).max_abs() == 0.0);
  CHECK(id.b.max_abs() == 0.0);
  CHECK(id.kind == MapKind::kGamma);

  const GaussianChannel ch = gamma_channel(k, kFree, 2.0, 0.5);
  CHECK((ch.a - symplectic_flow(kFree, 1.5)).max_abs() == 0.0);
  CHECK(ch.t == 2.0);
  CHECK(ch.t0 == 0.5);

  // Lambda and Gamma agree when the interval starts at the origin.
  const GaussianChannel lam0 = lambda_channel(k, kFree, 1.5, 0.0);
  const GaussianChannel gam0 = gamma_channel(k, kFree, 1.5, 0.0);
  CHECK((lam0.b - gam0.b).max_abs() < 1e-14);
  CHECK(lam0.kind == MapKind::kLambda);
}

TEST_CASE("OU dynamics is time homogeneous: Gamma(t,t0) = Gamma(t-t0,0)") {
  const NoiseKernel k = make_ou(0.7, 1.0, 0.4);
  for (const auto& [t0, t] : {std::pair{0.5, 1.7}, std::pair{2.0, 4.5}}) {
    const GaussianChannel a = gamma_channel(k, kFree, t, t0);
    const GaussianChannel b = gamma_channel(k, kFree, t - t0, 0.0);
    CHECK((a.a - b.a).max_abs() < 1e-14);
    CHECK((a.b - b.b).max_abs() < 1e-9);
  }
}

TEST_CASE("apply: frozen white-noise evolution of the vacuum") {
  const NoiseKernel k = make_white({1.0, 0.0, 0.0});
  const GaussianChannel ch = gamma_channel(k, kFree, 1.0, 0.0);
  const auto res = apply(ch, GaussianState::vacuum());
  CHECK(res.state.cm.xx == doctest::Approx(1.0 + 1.0 / 3.0).epsilon(1e-10));
  CHECK(res.state.cm.xp == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.state.cm.pp == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(res.validity.valid);
  CHECK(res.validity.margin == doctest::Approx(0.75).epsilon(1e-9));

  // Means transform with the linear part.
  const auto moved = apply(ch, GaussianState{{0.5, 0.0, 0.5}, {1.0, 2.0}});
  CHECK(moved.state.mean.x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(moved.state.mean.p == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("compose: algebra and time stamps") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.0);
  const GaussianChannel c1 = gamma_channel(k, kFree, 1.0, 0.0);
  const GaussianChannel c2 = gamma_channel(k, kFree, 2.0, 1.0);
  const GaussianChannel both = compose(c2, c1);
  CHECK(both.t == 2.0);
  CHECK(both.t0 == 0.0);
  CHECK(both.kind == MapKind::kComposed);
  // Composition behaves like sequential application on any state.
  const GaussianState s{SymMat2::diag(0.8, 0.9), {0.3, -0.2}};
  const auto seq = apply(c2, apply(c1, s).state).state;
  const auto one = apply(both, s).state;
  CHECK((seq.cm - one.cm).max_abs() < 1e-13);
  CHECK((seq.mean - one.mean).max_abs() < 1e-13);
}

TEST_CASE("white noise generates a semigroup") {
  const NoiseKernel k = make_white({1.0, 0.0, 0.5});
  const GaussianChannel a = gamma_channel(k, kFree, 1.0, 0.0);
  const GaussianChannel b = gamma_channel(k, kFree, 2.5, 1.0);
  const GaussianChannel direct = gamma_channel(k, kFree, 2.5, 0.0);
  const GaussianChannel chained = compose(b, a);
  CHECK((chained.a - direct.a).max_abs() < 1e-12);
  CHECK((chained.b - direct.b).max_abs() < 1e-9);
}

TEST_CASE("intertwiners intertwine: Lambda(t2,t1) o Gamma(t1,0) = Gamma(t2,0)") {
  const NoiseKernel k = make_ou(1.0, 1.0, 0.0);
  for (const double t1 : {0.5, 1.0, 2.0}) {
    for (const double dt : {0.5, 1.0, 2.0}) {
      const double t2 = t1 + dt;
      const GaussianChannel chained =
          compose(lambda_channel(k, kFree, t2, t1),
                  gamma_channel(k, kFree, t1, 0.0));
      const GaussianChannel direct = gamma_channel(k, kFree, t2, 0.0);
      CHECK((chained.a - direct.a).max_abs() < 1e-12);
      CHECK((chained.b - direct.b).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("semigroup deviation: frozen values and degenerate triples") {
  // Momentum-coupled OU at gamma = 1 on (0, 1, 2): the deviation lives in
  // the single pp entry, |2/e - 1 - 1/e^2|.
  const NoiseKernel mom = make_ou(1.0, 0.0, 1.0);
  const auto dev = semigroup_deviation(mom, kFree, 0.0, 1.0, 2.0);
  CHECK(dev.max_abs == doctest::Approx(0.39957640089372803).epsilon(1e-9));
  CHECK(dev.frobenius == doctest::Approx(0.39957640089372803).epsilon(1e-9));

  const NoiseKernel pos = make_ou(1.0, 1.0, 0.0);
  CHECK(semigroup_deviation(pos, kFree, 0.0, 1.0, 2.0).max_abs > 1e-3);

  const NoiseKernel white = make_white({1.0, 0.0, 0.5});
  CHECK(semigroup_deviation(white, kFree, 0.0, 1.0, 2.0).max_abs < 1e-9);

  for (const auto& k : {mom, pos, white}) {
    CHECK(semigroup_deviation(k, kFree, 0.5, 0.5, 2.0).max_abs < 1e-9);
    CHECK(semigroup_deviation(k, kFree, 0.5, 2.0, 2.0).max_abs < 1e-9);
  }
  CHECK_THROWS_AS(semigroup_deviation(pos, kFree, 0.0, 2.0, 1.0),
                  std::domain_error);
}

TEST_CASE("is_cp: Gamma always, Lambda only without position memory") {
  const NoiseKernel pos = make_ou(1.0, 1.0, 0.0);
  const NoiseKernel mom = make_ou(1.0, 0.0, 1.0);
  for (const double t0 : {0.3, 1.0, 2.0}) {
    for (const double dt : {0.1, 0.5, 2.0}) {
      const auto gam = is_cp(gamma_channel(pos, kFree, t0 + dt, t0));
      CHECK(gam.cp);
      const auto lam_mom = is_cp(lambda_channel(mom, kFree, t0 + dt, t0));
      CHECK(lam_mom.cp);
    }
    // Position-memory intertwiners fail CP on steps comparable to (or finer
    // than) the correlation time ...
    for (const double dt : {0.1, 0.5}) {
      const auto lam_pos = is_cp(lambda_channel(pos, kFree, t0 + dt, t0));
      CHECK_FALSE(lam_pos.cp);
      CHECK(lam_pos.witness < -1e-10);
    }
  }
  CHECK_FALSE(is_cp(lambda_channel(pos, kFree, 2.0, 1.0)).cp);
  // ... while a sufficiently coarse step can regain CP: non-CP-divisibility
  // is a statement about fine refinements, not about every decomposition.
  CHECK(is_cp(lambda_channel(pos, kFree, 4.0, 1.0)).cp);

  // White-noise intertwiners stay CP: no memory at all.
  const NoiseKernel white = make_white({1.0, 0.0, 0.0});
  CHECK(is_cp(lambda_channel(white, kFree, 1.5, 1.0)).cp);

  // Non-symplectic linear part: the eigenvalue criterion does not apply.
  GaussianChannel squeezer{Mat2{2.0, 0.0, 0.0, 1.0}, SymMat2::identity(),
                           MapKind::kComposed, 1.0, 0.0};
  CHECK_THROWS_AS(is_cp(squeezer), std::domain_error);
}

TEST_CASE("kraus_density: closed-form weights") {
  const KrausWeight id = kraus_density({SymMat2::identity(), 1.0, 0.0, 0.0});
  CHECK(id.normalization == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((id.inverse_covariance - SymMat2::identity()).max_abs() < 1e-14);

  // Diagonal g = diag(a, b): inverse covariance is diag(1/b, 1/a) because of
  // the omega conjugation.
  const KrausWeight d = kraus_density({SymMat2::diag(2.0, 0.5), 1.0, 0.0, 0.0});
  CHECK(d.normalization == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.inverse_covariance.xx == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(d.inverse_covariance.pp == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(d.inverse_covariance.xp == 0.0);

  CHECK_THROWS_AS(kraus_density({SymMat2::diag(1.0, 1e-13), 1.0, 0.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(kraus_density({SymMat2::diag(1.0, -0.1), 1.0, 0.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("kraus_density integrates to one") {
  TestRng rng(2301);
  const SymMat2 g = rng.spd(0.4, 2.5);
  const KrausWeight w = kraus_density({g, 1.0, 0.0, 0.0});
  const double lim = 10.0 * std::sqrt(g.eigenvalues().first);
  const int n = 400;
  const double h = 2.0 * lim / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
      total += wx * wy *
               kraus_density_at(w, {-lim + i * h, -lim + j * h});
    }
  }
  total *= h * h / (2.0 * M_PI);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

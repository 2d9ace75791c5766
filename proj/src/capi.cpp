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

// capi.cpp — extern "C" surface: translates between the POD types of
// include/nmgauss.h and the C++ core, and maps exceptions to status codes.

#include "nmgauss.h"

#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "channels.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "generator.hpp"
#include "montecarlo.hpp"
#include "noise.hpp"
#include "phase_space.hpp"

extern "C" {
struct nmg_kernel {
  nmg::NoiseKernel k;
};
struct nmg_hamiltonian {
  nmg::QuadraticHamiltonian h;
};
}

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
nmg_status guard(Fn&& fn) {
  try {
    fn();
    return NMG_OK;
  } catch (const nmg::numeric_error& e) {
    set_error(e.what());
    return NMG_ERR_NUMERIC;
  } catch (const nmg::consistency_error& e) {
    set_error(e.what());
    return NMG_ERR_CONSISTENCY;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return NMG_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return NMG_ERR_INVALID;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return NMG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return NMG_ERR_INTERNAL;
  }
}

nmg_status require(bool ok, const char* msg) {
  if (!ok) {
    set_error(msg);
    return NMG_ERR_INVALID;
  }
  return NMG_OK;
}

nmg::SymMat2 to_sym(const double m[3]) { return {m[0], m[1], m[2]}; }

void from_sym(const nmg::SymMat2& m, double out[3]) {
  out[0] = m.xx;
  out[1] = m.xp;
  out[2] = m.pp;
}

void from_mat(const nmg::Mat2& m, double out[4]) {
  out[0] = m.a11;
  out[1] = m.a12;
  out[2] = m.a21;
  out[3] = m.a22;
}

nmg::GaussianState to_state(const nmg_state* s) {
  return {to_sym(s->cm), {s->mean[0], s->mean[1]}};
}

void from_state(const nmg::GaussianState& st, nmg_state* out) {
  from_sym(st.cm, out->cm);
  out->mean[0] = st.mean.x;
  out->mean[1] = st.mean.p;
}

nmg::GaussianChannel to_channel(const nmg_channel* c) {
  return {nmg::Mat2{c->a[0], c->a[1], c->a[2], c->a[3]}, to_sym(c->b),
          static_cast<nmg::MapKind>(c->kind), c->t, c->t0};
}

void from_channel(const nmg::GaussianChannel& ch, nmg_channel* out) {
  from_mat(ch.a, out->a);
  from_sym(ch.b, out->b);
  out->t = ch.t;
  out->t0 = ch.t0;
  out->kind = static_cast<int>(ch.kind);
}

}  // namespace

extern "C" {

const char* nmg_status_name(nmg_status s) {
  switch (s) {
    case NMG_OK:
      return "ok";
    case NMG_ERR_INVALID:
      return "invalid argument";
    case NMG_ERR_DOMAIN:
      return "domain error";
    case NMG_ERR_NUMERIC:
      return "numeric error";
    case NMG_ERR_CONSISTENCY:
      return "consistency error";
    case NMG_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* nmg_last_error(void) { return g_last_error.c_str(); }

nmg_status nmg_kernel_white(const double weight[3], nmg_kernel** out) {
  if (auto rc = require(weight && out, "null pointer argument")) return rc;
  return guard([&] {
    *out = new nmg_kernel{nmg::make_white(to_sym(weight))};
  });
}

nmg_status nmg_kernel_ou(double gamma, double d_q, double d_p,
                         nmg_kernel** out) {
  if (auto rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] { *out = new nmg_kernel{nmg::make_ou(gamma, d_q, d_p)}; });
}

nmg_status nmg_kernel_tabulated_csv(const char* path, nmg_kernel** out) {
  if (auto rc = require(path && out, "null pointer argument")) return rc;
  return guard([&] {
    *out = new nmg_kernel{nmg::load_tabulated_csv(path)};
  });
}

void nmg_kernel_free(nmg_kernel* k) { delete k; }

nmg_status nmg_kernel_eval(const nmg_kernel* k, double t, double s,
                           double d_out[4]) {
  if (auto rc = require(k && d_out, "null pointer argument")) return rc;
  return guard([&] { from_mat(nmg::eval_kernel(k->k, t, s), d_out); });
}

nmg_status nmg_kernel_positive_type(const nmg_kernel* k, const double* times,
                                    size_t n_times, int* positive,
                                    double* min_eig) {
  if (auto rc = require(k && times && positive, "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    const auto res = nmg::check_positive_type(
        k->k, std::vector<double>(times, times + n_times));
    *positive = res.positive ? 1 : 0;
    if (min_eig != nullptr) {
      *min_eig = res.min_eigenvalue;
    }
  });
}

nmg_status nmg_kernel_describe(const nmg_kernel* k, char* buf, size_t len) {
  if (auto rc = require(k && buf && len > 0, "null or empty buffer")) return rc;
  return guard([&] {
    const std::string tag = nmg::describe(k->k);
    std::strncpy(buf, tag.c_str(), len - 1);
    buf[len - 1] = '\0';
  });
}

nmg_status nmg_hamiltonian_quadratic(const double hessian[3],
                                     nmg_hamiltonian** out) {
  if (auto rc = require(hessian && out, "null pointer argument")) return rc;
  return guard([&] {
    *out = new nmg_hamiltonian{nmg::QuadraticHamiltonian{to_sym(hessian)}};
  });
}

nmg_status nmg_hamiltonian_free_particle(nmg_hamiltonian** out) {
  if (auto rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] {
    *out = new nmg_hamiltonian{nmg::QuadraticHamiltonian::free_particle()};
  });
}

nmg_status nmg_hamiltonian_oscillator(nmg_hamiltonian** out) {
  if (auto rc = require(out != nullptr, "null pointer argument")) return rc;
  return guard([&] {
    *out = new nmg_hamiltonian{nmg::QuadraticHamiltonian::oscillator()};
  });
}

void nmg_hamiltonian_free(nmg_hamiltonian* h) { delete h; }

nmg_status nmg_symplectic_flow(const nmg_hamiltonian* h, double t,
                               double s_out[4]) {
  if (auto rc = require(h && s_out, "null pointer argument")) return rc;
  return guard([&] { from_mat(nmg::symplectic_flow(h->h, t), s_out); });
}

nmg_status nmg_state_validity(const nmg_state* s, int* valid, double* margin) {
  if (auto rc = require(s && valid, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::is_valid_state(to_state(s));
    *valid = res.valid ? 1 : 0;
    if (margin != nullptr) {
      *margin = res.margin;
    }
  });
}

nmg_status nmg_kossakowski(const nmg_kernel* k, const nmg_hamiltonian* h,
                           double t, double t0, nmg_method method,
                           double c_out[3]) {
  if (auto rc = require(k && h && c_out, "null pointer argument")) return rc;
  if (auto rc = require(method >= NMG_METHOD_AUTO &&
                            method <= NMG_METHOD_QUADRATURE,
                        "unknown method")) {
    return rc;
  }
  return guard([&] {
    const auto res = nmg::kossakowski(
        k->k, h->h, t, t0, static_cast<nmg::KossakowskiMethod>(method));
    from_sym(res.c, c_out);
  });
}

nmg_status nmg_kossakowski_negativity(const double c[3], double* eig_min,
                                      double* eig_max, int* negative) {
  if (auto rc = require(c && eig_min && eig_max && negative,
                        "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    const auto res =
        nmg::kossakowski_negativity(nmg::KossakowskiMatrix{to_sym(c), 0, 0});
    *eig_min = res.eig_min;
    *eig_max = res.eig_max;
    *negative = res.negative ? 1 : 0;
  });
}

nmg_status nmg_gram_g(const nmg_kernel* k, const nmg_hamiltonian* h, double t,
                      double t0, double g_out[3], double* route_discrepancy) {
  if (auto rc = require(k && h && g_out, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::gram_g(k->k, h->h, t, t0);
    from_sym(res.g, g_out);
    if (route_discrepancy != nullptr) {
      *route_discrepancy = res.route_discrepancy;
    }
  });
}

nmg_status nmg_gram_ell(const nmg_kernel* k, const nmg_hamiltonian* h,
                        double t, double t0, double l_out[3],
                        double* route_discrepancy) {
  if (auto rc = require(k && h && l_out, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::gram_ell(k->k, h->h, t, t0);
    from_sym(res.g, l_out);
    if (route_discrepancy != nullptr) {
      *route_discrepancy = res.route_discrepancy;
    }
  });
}

nmg_status nmg_gamma_channel(const nmg_kernel* k, const nmg_hamiltonian* h,
                             double t, double t0, nmg_channel* out) {
  if (auto rc = require(k && h && out, "null pointer argument")) return rc;
  return guard([&] { from_channel(nmg::gamma_channel(k->k, h->h, t, t0), out); });
}

nmg_status nmg_lambda_channel(const nmg_kernel* k, const nmg_hamiltonian* h,
                              double t, double t0, nmg_channel* out) {
  if (auto rc = require(k && h && out, "null pointer argument")) return rc;
  return guard(
      [&] { from_channel(nmg::lambda_channel(k->k, h->h, t, t0), out); });
}

nmg_status nmg_channel_apply(const nmg_channel* ch, const nmg_state* s,
                             nmg_state* out, int* valid, double* margin) {
  if (auto rc = require(ch && s && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::apply(to_channel(ch), to_state(s));
    from_state(res.state, out);
    if (valid != nullptr) {
      *valid = res.validity.valid ? 1 : 0;
    }
    if (margin != nullptr) {
      *margin = res.validity.margin;
    }
  });
}

nmg_status nmg_channel_compose(const nmg_channel* c2, const nmg_channel* c1,
                               nmg_channel* out) {
  if (auto rc = require(c2 && c1 && out, "null pointer argument")) return rc;
  return guard(
      [&] { from_channel(nmg::compose(to_channel(c2), to_channel(c1)), out); });
}

nmg_status nmg_channel_is_cp(const nmg_channel* ch, int* cp, double* witness) {
  if (auto rc = require(ch && cp, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::is_cp(to_channel(ch));
    *cp = res.cp ? 1 : 0;
    if (witness != nullptr) {
      *witness = res.witness;
    }
  });
}

nmg_status nmg_semigroup_deviation(const nmg_kernel* k,
                                   const nmg_hamiltonian* h, double t0,
                                   double t1, double t2, double* max_abs,
                                   double* frobenius) {
  if (auto rc = require(k && h && max_abs, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::semigroup_deviation(k->k, h->h, t0, t1, t2);
    *max_abs = res.max_abs;
    if (frobenius != nullptr) {
      *frobenius = res.frobenius;
    }
  });
}

nmg_status nmg_kraus_density(const double g[3], double* normalization,
                             double inv_cov_out[3]) {
  if (auto rc = require(g && normalization && inv_cov_out,
                        "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    const auto res = nmg::kraus_density(nmg::GramMatrix{to_sym(g), 0, 0, 0});
    *normalization = res.normalization;
    from_sym(res.inverse_covariance, inv_cov_out);
  });
}

nmg_status nmg_fidelity(const nmg_state* s1, const nmg_state* s2, double* f) {
  if (auto rc = require(s1 && s2 && f, "null pointer argument")) return rc;
  return guard([&] { *f = nmg::fidelity(to_state(s1), to_state(s2)); });
}

nmg_status nmg_fidelity_trajectory(const nmg_kernel* k,
                                   const nmg_hamiltonian* h,
                                   const nmg_state* s1, const nmg_state* s2,
                                   const double* times, size_t n_times,
                                   double* values_out) {
  if (auto rc = require(k && h && s1 && s2 && times && values_out,
                        "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    const auto tr = nmg::fidelity_trajectory(
        k->k, h->h, to_state(s1), to_state(s2),
        std::vector<double>(times, times + n_times));
    std::copy(tr.values.begin(), tr.values.end(), values_out);
  });
}

nmg_status nmg_decreasing_intervals(const double* times, const double* values,
                                    size_t n, double tol, nmg_interval* out,
                                    size_t cap, size_t* n_out,
                                    double* max_drop) {
  if (auto rc = require(times && values && n_out, "null pointer argument")) {
    return rc;
  }
  return guard([&] {
    nmg::FidelityTrajectory tr;
    tr.times.assign(times, times + n);
    tr.values.assign(values, values + n);
    const auto res = nmg::detect_nonmonotonicity(tr, tol);
    *n_out = res.intervals.size();
    if (out != nullptr) {
      const size_t m = std::min(cap, res.intervals.size());
      for (size_t i = 0; i < m; ++i) {
        out[i] = {res.intervals[i].t_begin, res.intervals[i].t_end,
                  res.intervals[i].drop};
      }
    }
    if (max_drop != nullptr) {
      *max_drop = res.max_drop;
    }
  });
}

nmg_status nmg_find_positivity_violation(const nmg_kernel* k,
                                         const nmg_hamiltonian* h, double t0,
                                         double dt, nmg_violation* out) {
  if (auto rc = require(k && h && out, "null pointer argument")) return rc;
  return guard([&] {
    *out = nmg_violation{};
    const auto res = nmg::find_positivity_violation(k->k, h->h, t0, dt);
    if (!res.has_value()) {
      out->found = 0;
      return;
    }
    out->found = 1;
    out->t0 = res->t0;
    out->t = res->t;
    from_sym(res->sigma0, out->sigma0);
    from_sym(nmg::certificate_input_cm(*res, h->h), out->sigma_in);
    from_mat(res->v, out->v);
    out->lambda_pos = res->lambda_pos;
    out->mu_neg = res->mu_neg;
    out->det_out = res->det_out;
  });
}

nmg_status nmg_empirical_g(const nmg_kernel* k, const nmg_hamiltonian* h,
                           double t0, double t, double dt, uint64_t n_paths,
                           uint64_t seed, nmg_ensemble* out) {
  if (auto rc = require(k && h && out, "null pointer argument")) return rc;
  return guard([&] {
    const auto res = nmg::empirical_g(k->k, h->h, t0, t, dt, n_paths, seed);
    from_sym(res.covariance, out->covariance);
    from_sym(res.stderr_jk, out->stderr_jk);
    from_sym(res.predicted, out->predicted);
    from_sym(res.z, out->z);
    out->mean[0] = res.mean.x;
    out->mean[1] = res.mean.p;
    out->mean_stderr[0] = res.mean_stderr.x;
    out->mean_stderr[1] = res.mean_stderr.p;
    out->n_paths = res.n_paths;
    out->seed = res.seed;
    out->t = res.t;
    out->t0 = res.t0;
    out->dt = res.dt;
    out->blocks = res.blocks;
  });
}

nmg_status nmg_sample_ou_displacement(double gamma, double d_q, double d_p,
                                      const nmg_hamiltonian* h, double t0,
                                      double t, double dt, uint64_t seed,
                                      double v_out[2]) {
  if (auto rc = require(h && v_out, "null pointer argument")) return rc;
  return guard([&] {
    const auto path = nmg::sample_ou_path(gamma, d_q, d_p, t0, t, dt, seed);
    const auto v = nmg::displacement_vector(path, h->h, t0);
    v_out[0] = v.x;
    v_out[1] = v.p;
  });
}

}  // extern "C"

/* Copyright 2026 The nmgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* nmgauss.h — public C API of the nmgauss library.
 *
 * nmgauss studies the averaged dynamics of one bosonic mode driven by
 * stationary Gaussian noise: the Kossakowski (diffusion) matrix of the
 * time-local generator, the Gaussian channels it generates, the intertwiners
 * between them, and two operational memory probes — start-time dependence of
 * the generator and failure of complete positivity of the intertwiners.
 *
 * Conventions: hbar = 1, phase-space vector r = (x, p), symplectic form
 * omega = [[0, 1], [-1, 0]]. Symmetric 2x2 matrices travel as double[3] in
 * [xx, xp, pp] order; dense 2x2 matrices as row-major double[4].
 *
 * Every function returns nmg_status; on failure nmg_last_error() carries a
 * thread-local description. Handles (noise kernels, Hamiltonians) are opaque
 * and freed with their nmg_*_free function; plain results are written through
 * caller-owned out parameters and never allocate.
 */

#ifndef NMGAUSS_H
#define NMGAUSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NMG_API __declspec(dllexport)
#else
#define NMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nmg_status {
  NMG_OK = 0,
  NMG_ERR_INVALID = 1,     /* malformed argument (bad weights, bad CSV, ...) */
  NMG_ERR_DOMAIN = 2,      /* valid argument outside the operation's domain */
  NMG_ERR_NUMERIC = 3,     /* quadrature or iteration failed to converge */
  NMG_ERR_CONSISTENCY = 4, /* redundant internal routes disagree */
  NMG_ERR_INTERNAL = 5     /* unexpected failure; please report */
} nmg_status;

NMG_API const char* nmg_status_name(nmg_status s);

/* Message describing the most recent failure on the calling thread; empty
 * string if none. The pointer stays valid until the next failing call. */
NMG_API const char* nmg_last_error(void);

/* ------------------------------------------------------------------ */
/* Noise kernels D(t, s)                                              */
/* ------------------------------------------------------------------ */

typedef struct nmg_kernel nmg_kernel;

/* White noise D = weight * delta(t - s); weight = [xx, xp, pp], PSD. */
NMG_API nmg_status nmg_kernel_white(const double weight[3], nmg_kernel** out);

/* Exponentially correlated (Ornstein-Uhlenbeck) kernel
 * D(t, s) = (gamma/2) e^{-gamma |t-s|} diag(d_q, d_p);
 * gamma > 0, d_q >= 0, d_p >= 0. */
NMG_API nmg_status nmg_kernel_ou(double gamma, double d_q, double d_p,
                                 nmg_kernel** out);

/* Kernel sampled on a rectangular (t, s) grid, loaded from CSV with header
 * "t,s,D11,D12,D21,D22"; bilinear interpolation, no extrapolation. */
NMG_API nmg_status nmg_kernel_tabulated_csv(const char* path,
                                            nmg_kernel** out);

NMG_API void nmg_kernel_free(nmg_kernel* k);

/* Kernel value at (t, s), row-major 2x2. White kernels return the Dirac
 * weight; treat it distributionally. */
NMG_API nmg_status nmg_kernel_eval(const nmg_kernel* k, double t, double s,
                                   double d_out[4]);

/* Bochner positive-type check on a finite time grid. */
NMG_API nmg_status nmg_kernel_positive_type(const nmg_kernel* k,
                                            const double* times,
                                            size_t n_times, int* positive,
                                            double* min_eig);

/* Short human-readable tag; truncates to len - 1 characters. */
NMG_API nmg_status nmg_kernel_describe(const nmg_kernel* k, char* buf,
                                       size_t len);

/* ------------------------------------------------------------------ */
/* Hamiltonians and symplectic flows                                  */
/* ------------------------------------------------------------------ */

typedef struct nmg_hamiltonian nmg_hamiltonian;

/* H = 1/2 r^T hessian r with hessian = [xx, xp, pp] (any signature). */
NMG_API nmg_status nmg_hamiltonian_quadratic(const double hessian[3],
                                             nmg_hamiltonian** out);
/* H = p^2 / 2. */
NMG_API nmg_status nmg_hamiltonian_free_particle(nmg_hamiltonian** out);
/* H = (x^2 + p^2) / 2. */
NMG_API nmg_status nmg_hamiltonian_oscillator(nmg_hamiltonian** out);

NMG_API void nmg_hamiltonian_free(nmg_hamiltonian* h);

/* S_t = exp(t omega hessian), row-major 2x2; exact closed form. */
NMG_API nmg_status nmg_symplectic_flow(const nmg_hamiltonian* h, double t,
                                       double s_out[4]);

/* ------------------------------------------------------------------ */
/* Gaussian states                                                    */
/* ------------------------------------------------------------------ */

typedef struct nmg_state {
  double cm[3];   /* covariance matrix [xx, xp, pp] */
  double mean[2]; /* mean vector (x, p) */
} nmg_state;

/* valid iff cm > 0 and det cm >= 1/4 - 1e-12; margin = det cm - 1/4. */
NMG_API nmg_status nmg_state_validity(const nmg_state* s, int* valid,
                                      double* margin);

/* ------------------------------------------------------------------ */
/* Time-local generator                                               */
/* ------------------------------------------------------------------ */

typedef enum nmg_method {
  NMG_METHOD_AUTO = 0,       /* closed form when available, else quadrature */
  NMG_METHOD_CLOSED = 1,     /* closed form only; error if none applies */
  NMG_METHOD_QUADRATURE = 2  /* force numerical integration */
} nmg_method;

/* Kossakowski matrix C(t, t0) of the dynamics started at t0; t >= t0. */
NMG_API nmg_status nmg_kossakowski(const nmg_kernel* k,
                                   const nmg_hamiltonian* h, double t,
                                   double t0, nmg_method method,
                                   double c_out[3]);

/* Eigen-range of a Kossakowski matrix; negative iff eig_min < -1e-12. */
NMG_API nmg_status nmg_kossakowski_negativity(const double c[3],
                                              double* eig_min,
                                              double* eig_max, int* negative);

/* ------------------------------------------------------------------ */
/* Channels and intertwiners                                          */
/* ------------------------------------------------------------------ */

typedef enum nmg_map_kind {
  NMG_MAP_GAMMA = 0,
  NMG_MAP_LAMBDA = 1,
  NMG_MAP_COMPOSED = 2
} nmg_map_kind;

/* sigma -> a sigma a^T + b, mean -> a mean. */
typedef struct nmg_channel {
  double a[4]; /* row-major 2x2 */
  double b[3]; /* [xx, xp, pp] */
  double t, t0;
  int kind; /* nmg_map_kind */
} nmg_channel;

/* Phase-space Gram matrix g(t, t0) of the averaged dynamics; evaluates two
 * independent integral routes and fails with NMG_ERR_CONSISTENCY if they
 * disagree beyond 1e-6 (route_discrepancy may be NULL). */
NMG_API nmg_status nmg_gram_g(const nmg_kernel* k, const nmg_hamiltonian* h,
                              double t, double t0, double g_out[3],
                              double* route_discrepancy);

/* Intertwiner Gram matrix l(t, t0), noise referenced to the origin;
 * t >= t0 >= 0. */
NMG_API nmg_status nmg_gram_ell(const nmg_kernel* k, const nmg_hamiltonian* h,
                                double t, double t0, double l_out[3],
                                double* route_discrepancy);

/* Dynamical map Gamma_{t,t0} (always CP up to round-off). */
NMG_API nmg_status nmg_gamma_channel(const nmg_kernel* k,
                                     const nmg_hamiltonian* h, double t,
                                     double t0, nmg_channel* out);

/* Intertwiner Lambda_{t,t0} with Lambda_{t,t0} o Gamma_{t0,0} = Gamma_{t,0};
 * not CP in general — that failure is the divisibility memory criterion. */
NMG_API nmg_status nmg_lambda_channel(const nmg_kernel* k,
                                      const nmg_hamiltonian* h, double t,
                                      double t0, nmg_channel* out);

/* valid / margin report whether the image is a physical state. */
NMG_API nmg_status nmg_channel_apply(const nmg_channel* ch,
                                     const nmg_state* s, nmg_state* out,
                                     int* valid, double* margin);

/* c2 after c1. */
NMG_API nmg_status nmg_channel_compose(const nmg_channel* c2,
                                       const nmg_channel* c1,
                                       nmg_channel* out);

/* CP test for channels with symplectic linear part: cp iff min eig b >=
 * -1e-10 (witness receives that eigenvalue; may be NULL). */
NMG_API nmg_status nmg_channel_is_cp(const nmg_channel* ch, int* cp,
                                     double* witness);

/* Deviation from the two-interval Gram composition law on t0 <= t1 <= t2;
 * zero iff the averaged dynamics forgets its start time. */
NMG_API nmg_status nmg_semigroup_deviation(const nmg_kernel* k,
                                           const nmg_hamiltonian* h,
                                           double t0, double t1, double t2,
                                           double* max_abs,
                                           double* frobenius);

/* Gaussian displacement weight of the channel with Gram matrix g:
 * F(y) = normalization * exp(-1/2 y^T inv_cov y), normalization =
 * 1/sqrt(det g); g must be strictly positive definite. */
NMG_API nmg_status nmg_kraus_density(const double g[3], double* normalization,
                                     double inv_cov_out[3]);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                        */
/* ------------------------------------------------------------------ */

/* Uhlmann fidelity of two valid one-mode Gaussian states, in [0, 1]. */
NMG_API nmg_status nmg_fidelity(const nmg_state* s1, const nmg_state* s2,
                                double* f);

/* F(t) = fidelity of the two states propagated by Gamma_{t,0}; times must be
 * strictly increasing with times[0] == 0; values_out holds n_times entries. */
NMG_API nmg_status nmg_fidelity_trajectory(const nmg_kernel* k,
                                           const nmg_hamiltonian* h,
                                           const nmg_state* s1,
                                           const nmg_state* s2,
                                           const double* times,
                                           size_t n_times,
                                           double* values_out);

typedef struct nmg_interval {
  double t_begin, t_end;
  double drop;
} nmg_interval;

/* Maximal decreasing runs of a sampled trajectory (drop per step > tol).
 * Writes at most cap intervals; *n_out is the true count. */
NMG_API nmg_status nmg_decreasing_intervals(const double* times,
                                            const double* values, size_t n,
                                            double tol, nmg_interval* out,
                                            size_t cap, size_t* n_out,
                                            double* max_drop);

typedef struct nmg_violation {
  int found;           /* 0: no negative direction at t0, rest undefined */
  double t0, t;        /* probed intertwiner Lambda_{t, t0} */
  double sigma0[3];    /* pure state reached at t0 */
  double sigma_in[3];  /* input at 0 whose image violates positivity */
  double v[4];         /* rotation diagonalizing omega^T C(t0,0) omega */
  double lambda_pos;   /* growing-direction eigenvalue */
  double mu_neg;       /* modulus of the shrinking-direction eigenvalue */
  double det_out;      /* det of the output covariance, < 1/4 - 1e-12 */
} nmg_violation;

/* Search for an explicit positivity violation of Lambda_{t0+dt, t0};
 * t0 > 0, dt > 0. found = 0 is success with no violation (e.g. momentum
 * coupling or white noise). */
NMG_API nmg_status nmg_find_positivity_violation(const nmg_kernel* k,
                                                 const nmg_hamiltonian* h,
                                                 double t0, double dt,
                                                 nmg_violation* out);

/* ------------------------------------------------------------------ */
/* Monte Carlo validation                                             */
/* ------------------------------------------------------------------ */

typedef struct nmg_ensemble {
  double covariance[3]; /* empirical Cov of the displacement vector */
  double stderr_jk[3];  /* jackknife standard error per entry */
  double predicted[3];  /* gram_g prediction */
  double z[3];          /* (covariance - predicted) / stderr_jk */
  double mean[2];       /* empirical mean displacement (should vanish) */
  double mean_stderr[2];
  uint64_t n_paths;
  uint64_t seed;
  double t, t0, dt;
  int blocks; /* jackknife blocks */
} nmg_ensemble;

/* Sample n_paths exact stationary OU paths, accumulate trapezoid
 * displacements, and compare their covariance against gram_g. The kernel
 * must be OU; deterministic for fixed seed independent of thread count. */
NMG_API nmg_status nmg_empirical_g(const nmg_kernel* k,
                                   const nmg_hamiltonian* h, double t0,
                                   double t, double dt, uint64_t n_paths,
                                   uint64_t seed, nmg_ensemble* out);

/* Single-path displacement vector (exposed for reproducibility checks). */
NMG_API nmg_status nmg_sample_ou_displacement(double gamma, double d_q,
                                              double d_p,
                                              const nmg_hamiltonian* h,
                                              double t0, double t, double dt,
                                              uint64_t seed, double v_out[2]);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NMGAUSS_H */

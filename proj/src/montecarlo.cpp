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

// montecarlo.cpp — OU path sampling and the empirical Gram estimate.

#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace nmg {

namespace {

// splitmix64 finalizer: decorrelates per-path seeds derived from
// (master seed, path index) so consecutive indices give independent streams.
uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Standard normals via Box-Muller on top of mt19937_64. The engine's output
// sequence is pinned by the standard, and Box-Muller is pinned here, so the
// sampler is reproducible across platforms (unlike std::normal_distribution,
// whose algorithm is implementation-defined).
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite; u2 in [0, 1).
    const double u1 = ((eng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = (eng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

size_t step_count(double t0, double t, double dt) {
  if (!(t > t0) || !(dt > 0.0)) {
    throw std::invalid_argument("path grid requires t > t0 and dt > 0");
  }
  const double steps = (t - t0) / dt;
  const auto n = static_cast<size_t>(std::llround(steps));
  if (n == 0 || std::abs(n * dt - (t - t0)) > 1e-9 * std::max(1.0, t - t0)) {
    throw std::invalid_argument("dt must divide t - t0");
  }
  return n;
}

struct OuParams {
  double gamma, d_q, d_p;
};

void sample_into(const OuParams& p, double t0, double dt, size_t n_steps,
                 uint64_t seed, std::vector<Vec2>* w) {
  NormalSampler normal(seed);
  const double decay = std::exp(-p.gamma * dt);
  const double var_q = 0.5 * p.gamma * p.d_q;
  const double var_p = 0.5 * p.gamma * p.d_p;
  const double sd_q = std::sqrt(var_q);
  const double sd_p = std::sqrt(var_p);
  const double step_factor = std::sqrt(-std::expm1(-2.0 * p.gamma * dt));
  w->resize(n_steps + 1);
  Vec2 cur{p.d_q > 0.0 ? sd_q * normal() : 0.0,
           p.d_p > 0.0 ? sd_p * normal() : 0.0};
  (*w)[0] = cur;
  for (size_t j = 1; j <= n_steps; ++j) {
    if (p.d_q > 0.0) {
      cur.x = decay * cur.x + sd_q * step_factor * normal();
    }
    if (p.d_p > 0.0) {
      cur.p = decay * cur.p + sd_p * step_factor * normal();
    }
    (*w)[j] = cur;
  }
  (void)t0;
}

Vec2 displacement_from(const std::vector<Vec2>& w,
                       const std::vector<Mat2>& flow_t, double dt) {
  // Composite trapezoid: half weights at both endpoints.
  const size_t n = w.size();
  Vec2 v;
  for (size_t j = 0; j < n; ++j) {
    const double weight = (j == 0 || j + 1 == n) ? 0.5 * dt : dt;
    const Vec2 term = flow_t[j] * w[j];
    v = v + weight * term;
  }
  return v;
}

std::vector<Mat2> flow_transpose_table(const QuadraticHamiltonian& h,
                                       double dt, size_t n_steps) {
  std::vector<Mat2> table(n_steps + 1);
  for (size_t j = 0; j <= n_steps; ++j) {
    table[j] = symplectic_flow(h, j * dt).transpose();
  }
  return table;
}

}  // namespace

NoisePath sample_ou_path(double gamma, double d_q, double d_p, double t0,
                         double t, double dt, uint64_t seed) {
  if (!(gamma > 0.0) || d_q < 0.0 || d_p < 0.0) {
    throw std::invalid_argument("sample_ou_path requires gamma > 0, d >= 0");
  }
  const size_t n_steps = step_count(t0, t, dt);
  NoisePath path{t0, dt, {}};
  sample_into({gamma, d_q, d_p}, t0, dt, n_steps, seed, &path.w);
  return path;
}

Vec2 displacement_vector(const NoisePath& path, const QuadraticHamiltonian& h,
                         double t0) {
  if (std::abs(path.t0 - t0) > 1e-12) {
    throw std::invalid_argument("path grid does not start at t0");
  }
  if (path.w.size() < 2) {
    throw std::invalid_argument("path needs at least two samples");
  }
  const auto table = flow_transpose_table(h, path.dt, path.w.size() - 1);
  return displacement_from(path.w, table, path.dt);
}

void CovAccumulator::add(const Vec2& v) {
  ++n;
  const Vec2 delta = v - mean;
  mean = mean + (1.0 / static_cast<double>(n)) * delta;
  const Vec2 delta2 = v - mean;
  m2.xx += delta.x * delta2.x;
  m2.xp += delta.x * delta2.p;
  m2.pp += delta.p * delta2.p;
}

void CovAccumulator::merge(const CovAccumulator& o) {
  if (o.n == 0) {
    return;
  }
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(o.n);
  const Vec2 delta = o.mean - mean;
  const double w = na * nb / (na + nb);
  m2.xx += o.m2.xx + w * delta.x * delta.x;
  m2.xp += o.m2.xp + w * delta.x * delta.p;
  m2.pp += o.m2.pp + w * delta.p * delta.p;
  mean = (1.0 / (na + nb)) * (na * mean + nb * o.mean);
  n += o.n;
}

SymMat2 CovAccumulator::covariance() const {
  if (n < 2) {
    throw std::domain_error("covariance needs at least two samples");
  }
  return (1.0 / static_cast<double>(n - 1)) * m2;
}

EnsembleEstimate empirical_g(const NoiseKernel& k,
                             const QuadraticHamiltonian& h, double t0, double t,
                             double dt, uint64_t n_paths, uint64_t seed) {
  const auto* ou = std::get_if<OuDiagonal>(&k);
  if (ou == nullptr) {
    throw std::invalid_argument("empirical_g requires an OU kernel");
  }
  if (n_paths < 100) {
    throw std::invalid_argument("empirical_g needs at least 100 paths");
  }
  const size_t n_steps = step_count(t0, t, dt);
  const auto table = flow_transpose_table(h, dt, n_steps);
  const OuParams params{ou->gamma, ou->d_q, ou->d_p};

  const int blocks = 100;
  std::vector<CovAccumulator> acc(blocks);
  const auto block_range = [&](int b) {
    const uint64_t lo = n_paths * static_cast<uint64_t>(b) / blocks;
    const uint64_t hi = n_paths * static_cast<uint64_t>(b + 1) / blocks;
    return std::pair<uint64_t, uint64_t>{lo, hi};
  };
  const auto run_block = [&](int b, std::vector<Vec2>* buffer) {
    const auto [lo, hi] = block_range(b);
    for (uint64_t i = lo; i < hi; ++i) {
      sample_into(params, t0, dt, n_steps, mix_seed(seed, i), buffer);
      acc[b].add(displacement_from(*buffer, table, dt));
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_workers = static_cast<int>(std::min<unsigned>(hw, 16));
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (int wkr = 0; wkr < n_workers; ++wkr) {
    workers.emplace_back([&, wkr]() {
      std::vector<Vec2> buffer;
      for (int b = wkr; b < blocks; b += n_workers) {
        run_block(b, &buffer);
      }
    });
  }
  for (auto& th : workers) {
    th.join();
  }

  // Merge in fixed block order: the result does not depend on scheduling.
  CovAccumulator total;
  for (const auto& a : acc) {
    total.merge(a);
  }
  const SymMat2 cov = total.covariance();

  // Delete-one-block jackknife for the error bars.
  std::vector<SymMat2> leave_out(blocks);
  for (int b = 0; b < blocks; ++b) {
    CovAccumulator rest;
    for (int c = 0; c < blocks; ++c) {
      if (c != b) {
        rest.merge(acc[c]);
      }
    }
    leave_out[b] = rest.covariance();
  }
  SymMat2 jk_mean;
  for (const auto& m : leave_out) {
    jk_mean = jk_mean + (1.0 / blocks) * m;
  }
  SymMat2 var;
  for (const auto& m : leave_out) {
    const SymMat2 d = m - jk_mean;
    var.xx += d.xx * d.xx;
    var.xp += d.xp * d.xp;
    var.pp += d.pp * d.pp;
  }
  const double jk_factor = static_cast<double>(blocks - 1) / blocks;
  const SymMat2 se{std::sqrt(jk_factor * var.xx), std::sqrt(jk_factor * var.xp),
                   std::sqrt(jk_factor * var.pp)};

  const SymMat2 predicted = gram_g(k, h, t, t0).g;
  const auto zscore = [](double diff, double err) {
    if (err == 0.0) {
      return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return diff / err;
  };
  const SymMat2 z{zscore(cov.xx - predicted.xx, se.xx),
                  zscore(cov.xp - predicted.xp, se.xp),
                  zscore(cov.pp - predicted.pp, se.pp)};
  const double nd = static_cast<double>(total.n);
  const Vec2 mean_se{std::sqrt(std::max(0.0, cov.xx) / nd),
                     std::sqrt(std::max(0.0, cov.pp) / nd)};
  return {cov,        se,   predicted, z,  total.mean, mean_se,
          total.n,    seed, t,         t0, dt,         blocks};
}

}  // namespace nmg

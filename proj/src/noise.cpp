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

// noise.cpp — kernel constructors, CSV loading, evaluation, positive-type.

#include "noise.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nmg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

NoiseKernel make_white(const SymMat2& weight) {
  if (weight.min_eigenvalue() < -1e-12) {
    throw std::invalid_argument(
        "white noise weight must be positive semidefinite");
  }
  return WhiteNoise{weight};
}

NoiseKernel make_ou(double gamma, double d_q, double d_p) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("OU kernel requires gamma > 0");
  }
  if (d_q < 0.0 || d_p < 0.0) {
    throw std::invalid_argument("OU kernel weights must be >= 0");
  }
  return OuDiagonal{gamma, d_q, d_p};
}

NoiseKernel make_tabulated(std::vector<double> times,
                           std::vector<Mat2> values) {
  const size_t n = times.size();
  if (n == 0) {
    throw std::invalid_argument("tabulated kernel needs at least one time");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw std::invalid_argument(
        "tabulated kernel times must be strictly increasing");
  }
  if (values.size() != n * n) {
    throw std::invalid_argument("tabulated kernel values must be an n*n grid");
  }
  // Stored samples must be a symmetric kernel: D(t_i, t_j) = D(t_j, t_i)^T.
  double scale = 1.0;
  for (const Mat2& m : values) {
    scale = std::max(scale, m.max_abs());
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const Mat2 diff = values[i * n + j] - values[j * n + i].transpose();
      if (diff.max_abs() > 1e-9 * scale) {
        throw std::invalid_argument(
            "tabulated kernel violates D(t,s) = D(s,t)^T beyond 1e-9");
      }
    }
  }
  return TabulatedKernel{std::move(times), std::move(values)};
}

NoiseKernel load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open kernel CSV: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("kernel CSV is empty: " + path);
  }
  {
    std::string header = trim(line);
    header.erase(std::remove_if(header.begin(), header.end(),
                                [](char c) { return c == ' ' || c == '\t'; }),
                 header.end());
    if (header != "t,s,D11,D12,D21,D22") {
      throw std::invalid_argument(
          "kernel CSV must start with header 't,s,D11,D12,D21,D22'");
    }
  }
  struct Row {
    double t, s;
    Mat2 d;
  };
  std::vector<Row> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    Row r;
    std::array<double, 6> f{};
    std::istringstream ss(stripped);
    std::string field;
    size_t idx = 0;
    while (std::getline(ss, field, ',')) {
      if (idx >= 6) {
        break;
      }
      try {
        size_t used = 0;
        f[idx] = std::stod(trim(field), &used);
        if (used != trim(field).size()) {
          throw std::invalid_argument("trailing characters");
        }
      } catch (const std::exception&) {
        throw std::invalid_argument("kernel CSV line " + std::to_string(lineno) +
                                    ": cannot parse field " +
                                    std::to_string(idx + 1));
      }
      ++idx;
    }
    if (idx != 6) {
      throw std::invalid_argument("kernel CSV line " + std::to_string(lineno) +
                                  ": expected 6 fields");
    }
    r.t = f[0];
    r.s = f[1];
    r.d = Mat2{f[2], f[3], f[4], f[5]};
    rows.push_back(r);
  }
  if (rows.empty()) {
    throw std::invalid_argument("kernel CSV has no data rows: " + path);
  }
  // Collect the time axis from both columns; require a bit-identical shared
  // axis (the format guarantees a full rectangular grid).
  std::vector<double> axis;
  for (const Row& r : rows) {
    axis.push_back(r.t);
    axis.push_back(r.s);
  }
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  const size_t n = axis.size();
  if (rows.size() != n * n) {
    throw std::invalid_argument(
        "kernel CSV must contain exactly one row per (t, s) grid pair");
  }
  const auto index_of = [&](double v) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), v);
    if (it == axis.end() || *it != v) {
      throw std::invalid_argument("kernel CSV grid is not rectangular");
    }
    return static_cast<size_t>(it - axis.begin());
  };
  std::vector<Mat2> values(n * n);
  std::vector<bool> seen(n * n, false);
  for (const Row& r : rows) {
    const size_t key = index_of(r.t) * n + index_of(r.s);
    if (seen[key]) {
      throw std::invalid_argument("kernel CSV contains a duplicate (t, s) row");
    }
    seen[key] = true;
    values[key] = r.d;
  }
  return make_tabulated(std::move(axis), std::move(values));
}

namespace {

Mat2 eval_tabulated(const TabulatedKernel& k, double t, double s) {
  const std::vector<double>& ax = k.times;
  const size_t n = ax.size();
  if (t < ax.front() || t > ax.back() || s < ax.front() || s > ax.back()) {
    throw std::domain_error("tabulated kernel evaluated outside its grid");
  }
  const auto cell = [&](double v) {
    // Index i with ax[i] <= v <= ax[i+1]; the top edge folds into the last
    // cell so v == ax.back() stays in range.
    size_t i = static_cast<size_t>(
        std::upper_bound(ax.begin(), ax.end(), v) - ax.begin());
    if (i > 0) {
      --i;
    }
    if (i + 1 >= n) {
      i = n - 2;
    }
    return i;
  };
  if (n == 1) {
    return k.values.front();
  }
  const auto bilinear = [&](double a, double b) {
    const size_t i = cell(a), j = cell(b);
    const double ft = (a - ax[i]) / (ax[i + 1] - ax[i]);
    const double fs = (b - ax[j]) / (ax[j + 1] - ax[j]);
    const Mat2& v00 = k.values[i * n + j];
    const Mat2& v10 = k.values[(i + 1) * n + j];
    const Mat2& v01 = k.values[i * n + j + 1];
    const Mat2& v11 = k.values[(i + 1) * n + j + 1];
    return ((1.0 - ft) * (1.0 - fs)) * v00 + (ft * (1.0 - fs)) * v10 +
           ((1.0 - ft) * fs) * v01 + (ft * fs) * v11;
  };
  // Symmetrize so eval(t,s) == eval(s,t)^T holds exactly even though the
  // stored samples only satisfy it to the load-time tolerance.
  return 0.5 * (bilinear(t, s) + bilinear(s, t).transpose());
}

}  // namespace

Mat2 eval_kernel(const NoiseKernel& k, double t, double s) {
  if (const auto* w = std::get_if<WhiteNoise>(&k)) {
    return w->weight.full();
  }
  if (const auto* ou = std::get_if<OuDiagonal>(&k)) {
    const double amp = 0.5 * ou->gamma * std::exp(-ou->gamma * std::abs(t - s));
    return {amp * ou->d_q, 0.0, 0.0, amp * ou->d_p};
  }
  return eval_tabulated(std::get<TabulatedKernel>(k), t, s);
}

PositiveTypeResult check_positive_type(const NoiseKernel& k,
                                       const std::vector<double>& times) {
  if (const auto* w = std::get_if<WhiteNoise>(&k)) {
    // The Dirac factor is positive, so positive-type reduces to PSD weight.
    const double lo = w->weight.min_eigenvalue();
    return {lo >= -1e-10, lo};
  }
  if (times.empty()) {
    throw std::invalid_argument("positive-type check needs at least one time");
  }
  const size_t n = times.size();
  Eigen::MatrixXd block(2 * n, 2 * n);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      const Mat2 d = eval_kernel(k, times[a], times[b]);
      block(2 * a, 2 * b) = d.a11;
      block(2 * a, 2 * b + 1) = d.a12;
      block(2 * a + 1, 2 * b) = d.a21;
      block(2 * a + 1, 2 * b + 1) = d.a22;
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (block + block.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym,
                                                        Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  return {lo >= -1e-10, lo};
}

std::string describe(const NoiseKernel& k) {
  char buf[128];
  if (const auto* w = std::get_if<WhiteNoise>(&k)) {
    std::snprintf(buf, sizeof(buf), "white(d=[%g,%g;%g,%g])", w->weight.xx,
                  w->weight.xp, w->weight.xp, w->weight.pp);
    return buf;
  }
  if (const auto* ou = std::get_if<OuDiagonal>(&k)) {
    std::snprintf(buf, sizeof(buf), "ou(gamma=%g,d_q=%g,d_p=%g)", ou->gamma,
                  ou->d_q, ou->d_p);
    return buf;
  }
  const auto& tab = std::get<TabulatedKernel>(k);
  std::snprintf(buf, sizeof(buf), "tabulated(n=%zu)", tab.times.size());
  return buf;
}

}  // namespace nmg

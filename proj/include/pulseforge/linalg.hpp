// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The PulseForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Dense real symmetric eigensolver (cyclic Jacobi), Toeplitz band-power
// matrices and a partially pivoted Gaussian elimination solver.

#include "pulseforge/common.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace pulseforge::linalg {

template <typename Real>
struct EigenPair {
  Real value;
  Vector<Real> vector;
};

template <typename Real>
struct JacobiOptions {
  Real tolerance = Real(1e-12);  // off-diagonal Frobenius norm, relative to ||S||_F
  int max_sweeps = 100;
};

/// 2 sin(d w) / d with the d = 0 limit 2w. `d` may be non-integer.
template <typename Real>
Real band_integral(Real d, Real omega, Real guard = Real(1e-9)) {
  if (std::abs(d) < guard) return Real(2) * omega;
  return Real(2) * std::sin(d * omega) / d;
}

/// S[m, n] = integral over |w| <= wc of e^{i(m-n)w} dw. Toeplitz, symmetric.
template <typename Real = double>
Matrix<Real> passband_gram(Index order, Real omega_c) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "passband_gram needs order >= 1");
  if (!(omega_c > Real(0)) || omega_c > Real(kPi) + Real(1e-12))
    throw Error(ErrorCode::BadCutoff, "cut-off must lie in (0, pi]");
  Vector<Real> row(order);
  for (Index d = 0; d < order; ++d) row(d) = band_integral<Real>(Real(d), omega_c, Real(0.5));
  Matrix<Real> s(order, order);
  for (Index m = 0; m < order; ++m)
    for (Index n = 0; n < order; ++n) s(m, n) = row(std::abs(m - n));
  return s;
}

template <typename Real>
bool is_symmetric(const Matrix<Real>& s, Real rel_tol = Real(1e-12)) {
  if (s.rows() != s.cols()) return false;
  const Real scale = std::max(s.cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j) - s(j, i)) > rel_tol * scale) return false;
  return true;
}

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations. Pairs come
/// back sorted by descending value; each vector has unit norm and a
/// non-negative element sum.
template <typename Real>
std::vector<EigenPair<Real>> eig_sym(const Matrix<Real>& s, const JacobiOptions<Real>& opt = {}) {
  if (s.rows() != s.cols() || s.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "eig_sym needs a non-empty square matrix");
  if (!is_symmetric<Real>(s)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");

  const Index n = s.rows();
  Matrix<Real> a = (s + s.transpose()) / Real(2);
  Matrix<Real> v = Matrix<Real>::Identity(n, n);
  const Real norm = a.norm();
  const Real threshold = opt.tolerance * (norm > Real(0) ? norm : Real(1));

  auto off_norm = [&] {
    Real acc = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i) acc += a(i, j) * a(i, j);
    return std::sqrt(Real(2) * acc);
  };

  bool converged = off_norm() <= threshold;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Real apq = a(p, q);
        if (apq == Real(0)) continue;
        // Rotation angle that annihilates a(p, q); small-root form of tan.
        const Real theta = (a(q, q) - a(p, p)) / (Real(2) * apq);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real sn = t * c;

        for (Index k = 0; k < n; ++k) {
          const Real akp = a(k, p);
          const Real akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Real apk = a(p, k);
          const Real aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Real(0);
        for (Index k = 0; k < n; ++k) {
          const Real vkp = v(k, p);
          const Real vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= threshold;
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap reached");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a(x, x) > a(y, y); });

  std::vector<EigenPair<Real>> out;
  out.reserve(order.size());
  for (Index i : order) {
    Vector<Real> vec = v.col(i);
    vec.normalize();
    if (vec.sum() < Real(0)) vec = -vec;
    out.push_back({a(i, i), std::move(vec)});
  }
  return out;
}

/// Solves S h = b by Gaussian elimination with partial pivoting.
template <typename Real>
Vector<Real> solve(const Matrix<Real>& s, const Vector<Real>& b) {
  if (s.rows() != s.cols() || s.rows() != b.size())
    throw Error(ErrorCode::InvalidArgument, "solve: shape mismatch");
  const Index n = s.rows();
  Matrix<Real> a = s;
  Vector<Real> x = b;
  const Real scale = s.cwiseAbs().maxCoeff();
  const Real floor = Real(1e-13) * (scale > Real(0) ? scale : Real(1));

  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    a.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
    pivot += k;
    if (std::abs(a(pivot, k)) < floor) throw Error(ErrorCode::Singular, "pivot below 1e-13 ||S||");
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      std::swap(x(k), x(pivot));
    }
    for (Index i = k + 1; i < n; ++i) {
      const Real f = a(i, k) / a(k, k);
      if (f == Real(0)) continue;
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
      x(i) -= f * x(k);
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    Real acc = x(k);
    for (Index j = k + 1; j < n; ++j) acc -= a(k, j) * x(j);
    x(k) = acc / a(k, k);
  }
  return x;
}

}  // namespace pulseforge::linalg

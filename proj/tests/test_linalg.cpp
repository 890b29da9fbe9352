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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pulseforge/linalg.hpp"

#include <random>

using namespace pulseforge;

namespace {

MatrixXd random_symmetric(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
  return 0.5 * (a + a.transpose());
}

// Power iteration with Hotelling deflation on a shifted, positive definite
// copy; returns eigenvalues in descending order.
VectorXd power_iteration_oracle(const MatrixXd& s) {
  const Index n = s.rows();
  const double shift = s.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  MatrixXd a = s + shift * MatrixXd::Identity(n, n);
  VectorXd values(n);
  for (Index k = 0; k < n; ++k) {
    VectorXd v = VectorXd::Ones(n) + 0.01 * VectorXd::LinSpaced(n, 0.0, 1.0);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 200000; ++it) {
      VectorXd w = a * v;
      const double next = v.dot(w);
      v = w.normalized();
      if (std::abs(next - lambda) < 1e-15 * std::abs(next) && it > 50) break;
      lambda = next;
    }
    lambda = v.dot(a * v);
    values(k) = lambda - shift;
    a -= lambda * v * v.transpose();
  }
  return values;
}

}  // namespace

TEST_CASE("passband_gram entries") {
  const MatrixXd s = linalg::passband_gram<double>(3, 0.2 * kPi);
  CHECK(s(1, 1) == doctest::Approx(0.4 * kPi).epsilon(1e-14));
  CHECK(std::abs(linalg::passband_gram<double>(2, kPi)(0, 1)) < 1e-14);
  CHECK(std::abs(linalg::passband_gram<double>(3, kPi / 2)(0, 2)) < 1e-14);
  CHECK_THROWS_AS(linalg::passband_gram<double>(3, 0.0), Error);
  CHECK_THROWS_AS(linalg::passband_gram<double>(3, 3.5), Error);
}

TEST_CASE("passband_gram trace and eigenvalue bounds") {
  for (Index m : {5, 17, 33}) {
    for (double wc : {0.1, 0.9, 2.5}) {
      const MatrixXd s = linalg::passband_gram<double>(m, wc) / kTwoPi;
      CHECK(s.trace() == doctest::Approx(static_cast<double>(m) * wc / kPi).epsilon(1e-10));
      for (const auto& p : linalg::eig_sym<double>(s)) {
        CHECK(p.value >= -1e-9);
        CHECK(p.value <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("eig_sym small examples") {
  const auto id = linalg::eig_sym<double>(MatrixXd::Identity(3, 3));
  for (const auto& p : id) CHECK(p.value == doctest::Approx(1.0));
  MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const auto pairs = linalg::eig_sym<double>(a);
  CHECK(pairs[0].value == doctest::Approx(3.0));
  CHECK(pairs[1].value == doctest::Approx(1.0));
  CHECK(pairs[0].vector(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(pairs[0].vector(1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(std::abs(pairs[1].vector(0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(pairs[1].vector.sum() >= 0.0);
}

TEST_CASE("eig_sym leading Slepian concentration") {
  const MatrixXd s = linalg::passband_gram<double>(33, 0.2 * kPi) / kTwoPi;
  const auto pairs = linalg::eig_sym<double>(s);
  CHECK(1.0 - pairs[0].value == doctest::Approx(1.5820e-8).epsilon(0.05));
}

TEST_CASE("eig_sym agrees with the power-iteration oracle") {
  std::mt19937_64 rng(21);
  for (Index n = 1; n <= 8; ++n) {
    const MatrixXd s = random_symmetric(rng, n);
    const auto pairs = linalg::eig_sym<double>(s);
    const VectorXd oracle = power_iteration_oracle(s);
    for (Index k = 0; k < n; ++k) CHECK(pairs[static_cast<std::size_t>(k)].value == doctest::Approx(oracle(k)).epsilon(1e-7));
  }
}

TEST_CASE("eig_sym reconstruction, orthonormality and residuals") {
  std::mt19937_64 rng(4);
  for (Index n : {2, 7, 20, 64}) {
    const MatrixXd s = random_symmetric(rng, n);
    const auto pairs = linalg::eig_sym<double>(s);
    MatrixXd recon = MatrixXd::Zero(n, n), v(n, n);
    for (Index k = 0; k < n; ++k) {
      const auto& p = pairs[static_cast<std::size_t>(k)];
      recon += p.value * p.vector * p.vector.transpose();
      v.col(k) = p.vector;
      CHECK(std::abs(p.vector.norm() - 1.0) < 1e-12);
      CHECK((s * p.vector - p.value * p.vector).norm() < 1e-9 * s.norm());
      CHECK(p.vector.sum() >= 0.0);
      if (k > 0) CHECK(pairs[static_cast<std::size_t>(k - 1)].value >= p.value);
    }
    CHECK((recon - s).norm() < 1e-8 * s.norm());
    CHECK((v.transpose() * v - MatrixXd::Identity(n, n)).norm() < 1e-9);
  }
}

TEST_CASE("eig_sym rejects asymmetric input") {
  MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(linalg::eig_sym<double>(a), Error);
}

TEST_CASE("eig_sym is templated on the scalar") {
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic> a(2, 2);
  a << 2.f, 1.f, 1.f, 2.f;
  linalg::JacobiOptions<float> opt;
  opt.tolerance = 1e-6f;
  const auto pairs = linalg::eig_sym<float>(a, opt);
  CHECK(pairs[0].value == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("solve") {
  VectorXd b(3);
  b << 1, 2, 3;
  CHECK((linalg::solve<double>(MatrixXd::Identity(3, 3), b) - b).norm() < 1e-15);
  MatrixXd d(2, 2);
  d << 2, 0, 0, 4;
  VectorXd rhs(2);
  rhs << 2, 8;
  const VectorXd x = linalg::solve<double>(d, rhs);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(2.0));

  std::mt19937_64 rng(9);
  MatrixXd s = random_symmetric(rng, 10) + 10.0 * MatrixXd::Identity(10, 10);
  std::normal_distribution<double> g;
  VectorXd h(10);
  for (Index i = 0; i < 10; ++i) h(i) = g(rng);
  const VectorXd got = linalg::solve<double>(s, VectorXd(s * h));
  CHECK((got - h).cwiseAbs().maxCoeff() < 1e-8);

  MatrixXd sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(linalg::solve<double>(sing, rhs), Error);
}

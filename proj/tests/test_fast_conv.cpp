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

#include "pulseforge/fast_conv.hpp"
#include "pulseforge/fir_design.hpp"
#include "pulseforge/spectral.hpp"

#include <random>

using namespace pulseforge;

namespace {

VectorXcd random_signal(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
  return v;
}

VectorXcd real_signal(std::initializer_list<double> xs) {
  VectorXcd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("fft examples") {
  VectorXcd delta = VectorXcd::Zero(8);
  delta(0) = 1.0;
  CHECK((fft(delta) - VectorXcd::Ones(8)).norm() < 1e-15);
  const VectorXcd y = fft(VectorXcd::Ones(4));
  CHECK(std::abs(y(0) - cd(4.0)) < 1e-15);
  CHECK(y.tail(3).norm() < 1e-15);
  CHECK_THROWS_AS(fft(VectorXcd::Ones(6)), Error);
  CHECK_THROWS_AS(fft(VectorXcd()), Error);
  CHECK((fft(real_signal({2.5})) - real_signal({2.5})).norm() == 0.0);
}

TEST_CASE("fft matches the direct dft") {
  std::mt19937_64 rng(2024);
  for (Index n : {2, 16, 256}) {
    const VectorXcd x = random_signal(rng, n);
    const VectorXcd ref = dft(x);
    CHECK((fft(x) - ref).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    CHECK((fft(x, true) - dft(x, true)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fft round trip up to 2^14") {
  std::mt19937_64 rng(1);
  for (Index n = 1; n <= (Index{1} << 14); n <<= 1) {
    const VectorXcd x = random_signal(rng, n);
    CHECK((fft(fft(x), true) - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fft is templated on the scalar") {
  Radix2Fft<float> f(8);
  Vector<std::complex<float>> x = Vector<std::complex<float>>::Zero(8);
  x(0) = 1.0f;
  CHECK((f.forward(x) - Vector<std::complex<float>>::Ones(8)).norm() < 1e-6f);
}

TEST_CASE("block plan sizes") {
  const BlockPlan p(VectorXcd::Ones(73), 183);
  CHECK(p.fft_length() == 256);
  CHECK(p.block_length() == 183);
  CHECK(p.kernel_length() == 73);
  const BlockPlan q(VectorXcd::Ones(5), 10);
  CHECK(q.fft_length() == 16);
  CHECK(q.block_length() == 11);
}

TEST_CASE("convolve_block examples") {
  std::mt19937_64 rng(8);
  const BlockPlan ident(real_signal({1.0}), 7);
  VectorXcd blk = VectorXcd::Zero(8);
  blk.head(7) = random_signal(rng, 7);
  CHECK((convolve_block(ident, blk) - blk).cwiseAbs().maxCoeff() < 1e-14);

  const BlockPlan two(real_signal({1.0, 1.0}), 3);
  REQUIRE(two.fft_length() == 8);
  VectorXcd x = VectorXcd::Zero(8);
  x.head(3) = real_signal({1, 2, 3});
  const VectorXcd y = convolve_block(two, x);
  const VectorXcd expect = real_signal({1, 3, 5, 3, 0, 0, 0, 0});
  CHECK((y - expect).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(convolve_block(two, VectorXcd::Ones(8)), Error);
  CHECK_THROWS_AS(convolve_block(two, VectorXcd::Zero(4)), Error);
}

TEST_CASE("splice examples") {
  const BlockPlan plan(real_signal({1.0, 1.0}), 2);
  REQUIRE(plan.block_length() == 2);
  SpliceState st(2);
  VectorXcd blk = VectorXcd::Zero(4);
  blk.head(2) = real_signal({1, 1});
  const VectorXcd first_out = convolve_block(plan, blk);
  const VectorXcd y0 = splice(st, first_out);
  CHECK((y0 - first_out.head(2)).norm() == 0.0);
  const VectorXcd y1 = splice(st, convolve_block(plan, blk));
  CHECK((y0 - real_signal({1, 2})).norm() < 1e-14);
  CHECK((y1 - real_signal({2, 2})).norm() < 1e-14);
  CHECK(st.block_index == 2);
}

TEST_CASE("overlap-add: pulse straddling a block boundary") {
  const VectorXcd kernel = slepian_lowpass({36, 4.0 / 73.0}).values.cast<cd>();
  const BlockPlan plan(kernel, 183);
  REQUIRE(plan.fft_length() == 256);
  VectorXcd stream = VectorXcd::Zero(1000);
  stream.segment(183 - 36, 73) = kernel;
  const VectorXcd direct = convolve(stream, kernel).head(1000);
  CHECK((overlap_add(plan, stream) - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("overlap-add matches direct convolution on random cases") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> klen(1, 73), slen(1, 1000), req(1, 300);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXcd kernel = random_signal(rng, klen(rng));
    const VectorXcd stream = random_signal(rng, slen(rng));
    const BlockPlan plan(kernel, req(rng));
    const VectorXcd direct = convolve(stream, kernel).head(stream.size());
    CHECK((overlap_add(plan, stream) - direct).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("kernel spectrum is computed once per plan") {
  std::mt19937_64 rng(3);
  const BlockPlan plan(random_signal(rng, 9), 20);
  CHECK(plan.engine().calls() == 1);
  const VectorXcd stream = random_signal(rng, 230);
  (void)overlap_add(plan, stream);
  const Index blocks = (230 + plan.block_length() - 1) / plan.block_length();
  // One forward and one inverse per block, plus the single kernel transform.
  CHECK(plan.engine().calls() == static_cast<std::uint64_t>(1 + 2 * blocks));
}

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

#include "pulseforge/fir_design.hpp"
#include "pulseforge/iir_design.hpp"
#include "pulseforge/spectral.hpp"

using namespace pulseforge;

namespace {

// Expanded coefficient view of the cascade evaluated at z.
cd cascade_response(const std::vector<Biquad>& sections, cd z) {
  const cd zi = 1.0 / z;
  cd h{1.0, 0.0};
  for (const Biquad& s : sections) h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
  return h;
}

double phase_delay_fd(const RationalSystem& sys) {
  const double dw = 1e-5;
  return -(std::arg(sys.response(dw)) - std::arg(sys.response(-dw))) / (2.0 * dw);
}

}  // namespace

TEST_CASE("Butterworth design invariants") {
  for (Index m : {1, 2, 4, 7, 12}) {
    for (double fc : {0.05, 0.2, 0.3, 0.45}) {
      const RationalSystem h = butterworth_discrete(m, fc);
      CHECK(h.order() == 2 * m);
      CHECK(std::abs(h.response(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(h.response(kPi)) < 1e-12);
      CHECK(h.is_real());
      for (cd z : h.zeros()) CHECK(std::abs(z + 1.0) < 1e-15);
    }
  }
  CHECK(std::abs(butterworth_discrete(4, 0.3).response(kTwoPi * 0.3)) < 0.5);
  CHECK_THROWS_AS(butterworth_discrete(13, 0.3), Error);
  CHECK_THROWS_AS(butterworth_discrete(4, 0.5), Error);
  CHECK_THROWS_AS(butterworth_discrete(0, 0.3), Error);
}

TEST_CASE("analog prototype poles are roots of A(s)") {
  const AnalogButterworthPrototype proto{4, kTwoPi * 0.3};
  for (cd s : proto.poles()) {
    CHECK(std::abs(std::abs(s) - proto.omega_c) < 1e-12);
    CHECK(std::abs(s.real()) > 1e-3);
    const double m = static_cast<double>(proto.half_order);
    const cd a = std::pow(-1.0 / (proto.omega_c * proto.omega_c), m) * std::pow(s, 2.0 * m) + 1.0;
    CHECK(std::abs(a) < 1e-9);
  }
}

TEST_CASE("non-causal Butterworth is monotone, flat at dc and has a wide null") {
  const RationalSystem h = butterworth_discrete(4, 0.3);
  const FrequencyGrid grid = FrequencyGrid::linspace(0.0, kPi, 4096);
  const VectorXd mag = sample_response(h, grid).magnitude();
  for (Index i = 1; i < mag.size(); ++i) CHECK(mag(i) <= mag(i - 1) + 1e-14);
  const double step = 1e-3;
  const double a0 = std::abs(h.response(0.0)), ap = std::abs(h.response(step)), am = std::abs(h.response(-step));
  CHECK(std::abs((ap - am) / (2 * step)) < 1e-4);
  CHECK(std::abs((ap - 2 * a0 + am) / (step * step)) < 1e-4);
  const double n0 = std::abs(h.response(kPi)), n1 = std::abs(h.response(kPi - step));
  CHECK(n0 < 1e-6);
  CHECK(std::abs((n0 - n1) / step) < 1e-6);
}

TEST_CASE("sections reproduce the pole/zero view") {
  const RationalSystem h = butterworth_discrete(5, 0.2);
  const CausalitySplit split = split_causal(h);
  for (const RationalSystem* sys : {&split.causal}) {
    const auto sections = sys->sections();
    for (int k = 0; k < 256; ++k) {
      const cd z = std::polar(1.0, kTwoPi * k / 256.0);
      CHECK(std::abs(cascade_response(sections, z) - sys->evaluate(z)) < 1e-9);
    }
  }
  const auto mirror_sections = split.anticausal.mirrored().sections();
  for (int k = 0; k < 256; ++k) {
    const cd z = std::polar(1.0, kTwoPi * k / 256.0);
    CHECK(std::abs(cascade_response(mirror_sections, z) - split.anticausal.evaluate(1.0 / z)) < 1e-9);
  }
  // Ascending pole radius.
  const auto secs = split.causal.sections();
  double last = 0.0;
  for (const Biquad& s : secs) {
    const double r = std::sqrt(std::abs(s.a2)) > 0 ? std::sqrt(std::abs(s.a2)) : std::abs(s.a1);
    CHECK(r >= last - 1e-12);
    last = r;
  }
}

TEST_CASE("causality split") {
  const RationalSystem h = butterworth_discrete(4, 0.3);
  const CausalitySplit split = split_causal(h);
  CHECK(split.causal.poles().size() == 4);
  CHECK(split.anticausal.poles().size() == 4);
  CHECK(split.causal.zeros().size() == 4);
  CHECK(split.anticausal.zeros().size() == 4);
  for (cd p : split.causal.poles()) CHECK(std::abs(p) < 1.0);
  for (cd p : split.anticausal.poles()) CHECK(std::abs(p) > 1.0);
  CHECK(std::abs(split.causal.evaluate(1.0) - cd(1.0)) < 1e-12);
  CHECK(std::abs(split.anticausal.evaluate(1.0) - cd(1.0)) < 1e-12);
  const FrequencyGrid grid = FrequencyGrid::uniform(4096);
  for (Index i = 0; i < grid.size(); ++i) {
    const double parent = std::abs(h.response(grid[i]));
    CHECK(std::abs(std::abs(split.causal.response(grid[i])) * std::abs(split.anticausal.response(grid[i])) - parent) < 1e-8);
  }

  const RationalSystem causal_only({cd(-1.0)}, {cd(0.5), cd(-0.25)}, cd(0.3));
  const CausalitySplit s2 = split_causal(causal_only);
  CHECK(s2.anticausal.poles().empty());
  CHECK(s2.anticausal.zeros().empty());
  CHECK(std::abs(s2.anticausal.gain() - cd(1.0)) < 1e-12);

  CHECK_THROWS_AS(split_causal(RationalSystem({}, {cd(0.0, 1.0), cd(0.0, -1.0)}, cd(1.0))), Error);
}

TEST_CASE("filter examples") {
  VectorXd x(5);
  x << 1, -2, 3, 0.5, 4;
  CHECK((filter(RationalSystem::identity(), x) - x).norm() < 1e-15);

  const RationalSystem one_pole({cd(0.0)}, {cd(0.5)}, cd(1.0));
  VectorXd imp = VectorXd::Zero(12);
  imp(0) = 1.0;
  const VectorXd h = filter(one_pole, imp);
  for (Index n = 0; n < 12; ++n) CHECK(h(n) == doctest::Approx(std::pow(0.5, static_cast<double>(n))));

  const RealTaps r = impulse_response(split_causal(butterworth_discrete(4, 0.3)).causal, 33);
  Index peak = 0;
  r.values.cwiseAbs().maxCoeff(&peak);
  CHECK(peak >= 1);
  CHECK(peak <= 3);
  CHECK(std::abs(r.values(32)) < 1e-3 * std::abs(r.values(peak)));

  // Backward direction equals forward on the reversed input.
  const VectorXd b = filter(one_pole, x, Direction::Backward);
  const VectorXd f = filter(one_pole, VectorXd(x.reverse()));
  CHECK((b - f.reverse()).norm() < 1e-15);
  VectorXcd xc = x.cast<cd>() * cd(0.0, 1.0);
  CHECK((filter(one_pole, xc) - filter(one_pole, x).cast<cd>() * cd(0.0, 1.0)).norm() < 1e-14);

  CHECK_THROWS_AS(filter(RationalSystem({}, {cd(2.0)}, cd(1.0)), x), Error);
}

TEST_CASE("stability and decay horizon") {
  for (Index m : {1, 4, 8}) {
    const RationalSystem c = split_causal(butterworth_discrete(m, 0.05)).causal;
    for (cd p : c.poles()) CHECK(std::abs(p) < 1.0);
    const Index n_ext = decay_horizon(c);
    const RealTaps r = impulse_response(c, 10 * n_ext + 1);
    CHECK(std::abs(r.values(10 * n_ext)) < 1e-10);
  }
}

TEST_CASE("non-causal impulse") {
  const CausalitySplit split = split_causal(butterworth_discrete(4, 0.3));
  const RealTaps t16 = noncausal_impulse(split, 16);
  CHECK(t16.length() == 33);
  CHECK(t16.origin == 16);
  CHECK(t16.is_symmetric(1e-6));
  const ResponseCurve c = sample_response(t16, FrequencyGrid::uniform(4096));
  CHECK(c.values.imag().cwiseAbs().maxCoeff() < 1e-6);

  // Side-lobe mismatch shrinks with K.
  auto mismatch = [&](Index k) {
    const RealTaps t = noncausal_impulse(split, k);
    double worst = 0.0;
    for (double w = 0.0; w <= kPi; w += 0.01)
      worst = std::max(worst, std::abs(std::abs(dtft(t, w)) - std::abs(butterworth_discrete(4, 0.3).response(w))));
    return worst;
  };
  CHECK(mismatch(8) > mismatch(16));

  Index k = 40;
  while (std::abs(noncausal_impulse(split, k).values(0)) >= 1e-12) k += 20;
  CHECK(noncausal_impulse(split, k).sum() == doctest::Approx(1.0).epsilon(1e-6));

  // Forward first, then backward: same samples.
  const Index n = 401, centre = 200;
  VectorXd x = VectorXd::Zero(n);
  x(centre) = 1.0;
  VectorXd y = filter(split.causal, x);
  y = filter(split.anticausal.mirrored(), y, Direction::Backward);
  for (Index m = -16; m <= 16; ++m) CHECK(std::abs(y(centre + m) - t16.at(m)) < 1e-9);
}

TEST_CASE("group delay at dc") {
  CHECK(group_delay_dc(RationalSystem::delay(3)) == doctest::Approx(3.0).epsilon(1e-14));
  const RationalSystem causal = split_causal(butterworth_discrete(4, 0.3)).causal;
  const double q = group_delay_dc(causal);
  CHECK(std::abs(q - 1.3863) < 1e-3);
  CHECK(q == doctest::Approx(phase_delay_fd(causal)).epsilon(1e-6));

  const RealTaps sym = slepian_lowpass({6, 0.1});
  CHECK(group_delay_dc(RealTaps::causal(sym.values)) == doctest::Approx(6.0).epsilon(1e-12));
  const double dw = 1e-5;
  const RealTaps delayed = RealTaps::causal(sym.values);
  const double fd = -(std::arg(dtft(delayed, dw)) - std::arg(dtft(delayed, -dw))) / (2 * dw);
  CHECK(fd == doctest::Approx(6.0).epsilon(1e-6));

  CHECK_THROWS_AS(group_delay_dc(RationalSystem({cd(1.0)}, {cd(0.5)}, cd(1.0))), Error);
}

TEST_CASE("Slepian pulse through the causal factor") {
  const RealTaps pulse = slepian_lowpass({8, 0.3, DegeneratePolicy::ProjectDc});
  const RealTaps unit = RealTaps::centered(pulse.values / pulse.values.norm());
  const RationalSystem causal = split_causal(butterworth_discrete(4, 0.3)).causal;
  VectorXd x = VectorXd::Zero(64);
  x.segment(0, unit.length()) = unit.values;
  const VectorXd y = filter(causal, x);
  Index pin = 0, pout = 0;
  const double in_peak = x.maxCoeff(&pin);
  const double out_peak = y.maxCoeff(&pout);
  CHECK(std::abs(out_peak - in_peak) < 0.05 * in_peak);
  CHECK(pout - pin >= 1);
  CHECK(pout - pin <= 2);
}

TEST_CASE("mirror and product") {
  const RationalSystem a({cd(-0.5)}, {cd(0.25), cd(0.0, 0.5), cd(0.0, -0.5)}, cd(2.0));
  const RationalSystem m = a.mirrored();
  for (double w : {0.1, 1.0, 2.5}) {
    const cd z = std::polar(1.0, w);
    CHECK(std::abs(m.evaluate(z) - a.evaluate(1.0 / z)) < 1e-12);
    CHECK(std::abs((a * m).evaluate(z) - a.evaluate(z) * m.evaluate(z)) < 1e-12);
  }
}

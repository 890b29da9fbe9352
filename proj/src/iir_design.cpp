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

#include "pulseforge/iir_design.hpp"

#include <algorithm>
#include <limits>

namespace pulseforge {

namespace {

constexpr double kRootTol = 1e-9;
constexpr double kOriginTol = 1e-300;

// Groups roots into conjugate pairs and real singles. Pairs come first,
// then reals; pairs are sorted by ascending radius.
struct RootGroups {
  std::vector<std::pair<cd, cd>> pairs;
  std::vector<cd> singles;
};

RootGroups group_roots(std::vector<cd> roots) {
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a.imag() > b.imag();
  });
  RootGroups g;
  std::vector<bool> used(roots.size(), false);
  std::vector<cd> reals;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(roots[i].imag()) <= kRootTol * std::max(1.0, std::abs(roots[i]))) {
      reals.push_back(cd(roots[i].real(), 0.0));
      continue;
    }
    std::size_t best = roots.size();
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double err = std::abs(roots[j] - std::conj(roots[i]));
      if (err < best_err) {
        best_err = err;
        best = j;
      }
    }
    if (best == roots.size() || best_err > 1e-6 * std::max(1.0, std::abs(roots[i])))
      throw Error(ErrorCode::InvalidArgument, "complex root without a conjugate partner");
    used[best] = true;
    g.pairs.emplace_back(roots[i], std::conj(roots[i]));
  }
  // Real roots pair up two at a time in radius order.
  std::size_t k = 0;
  for (; k + 1 < reals.size(); k += 2) g.pairs.emplace_back(reals[k], reals[k + 1]);
  if (k < reals.size()) g.singles.push_back(reals[k]);
  return g;
}

// Coefficients of prod (1 - r z^-1) over the given roots (at most two).
std::array<double, 3> poly_inverse_z(const std::vector<cd>& roots) {
  std::array<cd, 3> c{cd(1.0), cd(0.0), cd(0.0)};
  for (cd r : roots) {
    c[2] = c[2] - r * c[1];
    c[1] = c[1] - r * c[0];
  }
  return {c[0].real(), c[1].real(), c[2].real()};
}

template <typename Vec>
Vec run_sections(const std::vector<Biquad>& sections, Vec x) {
  using S = typename Vec::Scalar;
  for (const Biquad& s : sections) {
    S w1 = S(0), w2 = S(0);
    for (Index n = 0; n < x.size(); ++n) {
      const S in = x(n);
      const S out = s.b0 * in + w1;
      w1 = s.b1 * in - s.a1 * out + w2;
      w2 = s.b2 * in - s.a2 * out;
      x(n) = out;
    }
  }
  return x;
}

template <typename Vec>
Vec filter_impl(const RationalSystem& sys, const Vec& x, Direction direction) {
  if (!sys.is_causal()) throw Error(ErrorCode::NotCausal, "filter needs a causal system (mirror anti-causal factors)");
  if (!sys.is_real()) throw Error(ErrorCode::InvalidArgument, "filter needs a real system");
  const auto sections = sys.sections();
  if (direction == Direction::Forward) return run_sections(sections, x);
  Vec r = x.reverse();
  r = run_sections(sections, std::move(r));
  return r.reverse();
}

}  // namespace

RationalSystem::RationalSystem(std::vector<cd> zeros, std::vector<cd> poles, cd gain)
    : zeros_(std::move(zeros)), poles_(std::move(poles)), gain_(gain) {}

RationalSystem RationalSystem::delay(Index samples) {
  if (samples < 0) throw Error(ErrorCode::InvalidArgument, "delay must be non-negative");
  return RationalSystem({}, std::vector<cd>(static_cast<std::size_t>(samples), cd(0.0)), cd(1.0));
}

cd RationalSystem::evaluate(cd z) const {
  cd num = gain_;
  for (cd b : zeros_) num *= (z - b);
  cd den{1.0, 0.0};
  for (cd a : poles_) den *= (z - a);
  return num / den;
}

cd RationalSystem::log_derivative(cd z) const {
  cd acc{0.0, 0.0};
  for (cd b : zeros_) acc += 1.0 / (z - b);
  for (cd a : poles_) acc -= 1.0 / (z - a);
  return acc;
}

bool RationalSystem::is_real(double tol) const {
  if (std::abs(gain_.imag()) > tol * std::max(1.0, std::abs(gain_))) return false;
  try {
    (void)group_roots(zeros_);
    (void)group_roots(poles_);
  } catch (const Error&) {
    return false;
  }
  return true;
}

bool RationalSystem::is_causal() const {
  if (zeros_.size() > poles_.size()) return false;
  return std::all_of(poles_.begin(), poles_.end(), [](cd p) { return std::abs(p) < 1.0; });
}

std::vector<Biquad> RationalSystem::sections() const {
  if (!is_causal()) throw Error(ErrorCode::NotCausal, "sections need a causal system");
  const RootGroups pg = group_roots(poles_);
  const RootGroups zg = group_roots(zeros_);

  std::vector<std::vector<cd>> pole_groups;
  for (auto& p : pg.pairs) pole_groups.push_back({p.first, p.second});
  for (auto& p : pg.singles) pole_groups.push_back({p});
  auto radius = [](const std::vector<cd>& g) {
    double r = 0.0;
    for (cd p : g) r = std::max(r, std::abs(p));
    return r;
  };
  std::stable_sort(pole_groups.begin(), pole_groups.end(),
                   [&](const auto& a, const auto& b) { return radius(a) < radius(b); });

  // Two-pole sections take a zero pair when one is left, otherwise up to two
  // real zeros; one-pole sections take one real zero.
  std::vector<std::pair<cd, cd>> zero_pairs = zg.pairs;
  std::vector<cd> zero_singles = zg.singles;
  std::reverse(zero_pairs.begin(), zero_pairs.end());
  std::reverse(zero_singles.begin(), zero_singles.end());
  auto split_real_pair = [&]() {
    for (std::size_t i = zero_pairs.size(); i-- > 0;) {
      if (zero_pairs[i].first.imag() == 0.0) {
        zero_singles.push_back(zero_pairs[i].first);
        zero_singles.push_back(zero_pairs[i].second);
        zero_pairs.erase(zero_pairs.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
    }
    return false;
  };
  std::vector<std::vector<cd>> zero_groups;
  for (const auto& g : pole_groups) {
    std::vector<cd> take;
    if (g.size() == 2 && !zero_pairs.empty()) {
      take = {zero_pairs.back().first, zero_pairs.back().second};
      zero_pairs.pop_back();
    } else {
      while (take.size() < g.size() && (!zero_singles.empty() || split_real_pair())) {
        take.push_back(zero_singles.back());
        zero_singles.pop_back();
      }
    }
    zero_groups.push_back(std::move(take));
  }
  if (!zero_pairs.empty() || !zero_singles.empty())
    throw Error(ErrorCode::NotCausal, "zeros cannot be distributed over the sections");

  const std::size_t count = std::max<std::size_t>(1, pole_groups.size());
  std::vector<Biquad> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::vector<cd> poles = i < pole_groups.size() ? pole_groups[i] : std::vector<cd>{};
    const std::vector<cd> zeros = i < zero_groups.size() ? zero_groups[i] : std::vector<cd>{};
    if (zeros.size() > poles.size() && !poles.empty())
      throw Error(ErrorCode::NotCausal, "section would need more zeros than poles");
    const auto a = poly_inverse_z(poles);
    auto b = poly_inverse_z(zeros);
    // Missing zeros sit at infinity: each one delays the numerator by a sample.
    const std::size_t shift = poles.size() - std::min(poles.size(), zeros.size());
    std::array<double, 3> bs{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k + shift < 3; ++k) bs[k + shift] = b[k];
    b = bs;
    Biquad s;
    s.b0 = b[0];
    s.b1 = b[1];
    s.b2 = b[2];
    s.a1 = a[1];
    s.a2 = a[2];
    out.push_back(s);
  }
  const double g = gain_.real();
  out.front().b0 *= g;
  out.front().b1 *= g;
  out.front().b2 *= g;
  return out;
}

RationalSystem RationalSystem::mirrored() const {
  std::vector<cd> zeros, poles;
  cd gain = gain_;
  Index z_power = 0;  // accumulated z^k factor
  for (cd b : zeros_) {
    if (std::abs(b) < kOriginTol) {
      z_power -= 1;
    } else {
      gain *= -b;
      zeros.push_back(1.0 / b);
      z_power -= 1;
    }
  }
  for (cd a : poles_) {
    if (std::abs(a) < kOriginTol) {
      z_power += 1;
    } else {
      gain /= -a;
      poles.push_back(1.0 / a);
      z_power += 1;
    }
  }
  for (; z_power > 0; --z_power) zeros.push_back(cd(0.0));
  for (; z_power < 0; ++z_power) poles.push_back(cd(0.0));
  return RationalSystem(std::move(zeros), std::move(poles), gain);
}

RationalSystem RationalSystem::operator*(const RationalSystem& other) const {
  std::vector<cd> zeros = zeros_, poles = poles_;
  zeros.insert(zeros.end(), other.zeros_.begin(), other.zeros_.end());
  poles.insert(poles.end(), other.poles_.begin(), other.poles_.end());
  return RationalSystem(std::move(zeros), std::move(poles), gain_ * other.gain_);
}

std::vector<cd> AnalogButterworthPrototype::poles() const {
  // (-s^2 / wc^2)^M = -1  =>  -s^2 / wc^2 = e^{i pi (2k + 1) / M}.
  std::vector<cd> out;
  out.reserve(static_cast<std::size_t>(2 * half_order));
  const double m = static_cast<double>(half_order);
  for (Index k = 0; k < half_order; ++k) {
    const cd r = std::polar(1.0, kPi * (2.0 * static_cast<double>(k) + 1.0) / m);
    const cd s = std::sqrt(-r) * omega_c;
    out.push_back(s);
    out.push_back(-s);
  }
  return out;
}

cd AnalogButterworthPrototype::evaluate(cd s) const {
  const cd base = -1.0 / (omega_c * omega_c);
  return 1.0 / (std::pow(base, static_cast<double>(half_order)) * std::pow(s, 2.0 * static_cast<double>(half_order)) + 1.0);
}

RationalSystem butterworth_discrete(Index half_order, double f_c) {
  if (half_order < 1) throw Error(ErrorCode::InvalidArgument, "half-order must be >= 1");
  if (half_order > kMaxButterworthHalfOrder) throw Error(ErrorCode::OrderTooHigh, "half-order above 12");
  if (!(f_c > 0.0 && f_c < 0.5)) throw Error(ErrorCode::BadCutoff, "cut-off must lie in (0, 0.5)");

  const AnalogButterworthPrototype proto{half_order, kTwoPi * f_c};
  std::vector<cd> poles;
  for (cd s : proto.poles()) poles.push_back((2.0 + s) / (2.0 - s));
  std::vector<cd> zeros(poles.size(), cd(-1.0, 0.0));

  cd dc{1.0, 0.0};
  for (cd a : poles) dc *= (1.0 - a);
  const double gain = (dc / std::pow(2.0, static_cast<double>(poles.size()))).real();
  return RationalSystem(std::move(zeros), std::move(poles), cd(gain, 0.0));
}

CausalitySplit split_causal(const RationalSystem& sys) {
  std::vector<cd> inside, outside;
  for (cd p : sys.poles()) {
    const double r = std::abs(p);
    if (std::abs(r - 1.0) <= kRootTol) throw Error(ErrorCode::PoleOnUnitCircle, "pole on the unit circle");
    (r < 1.0 ? inside : outside).push_back(p);
  }
  std::vector<cd> zeros = sys.zeros();
  std::stable_sort(zeros.begin(), zeros.end(), [](cd a, cd b) { return std::abs(a) > std::abs(b); });
  const std::size_t n_anti = std::min(outside.size(), zeros.size());
  std::vector<cd> zeros_anti(zeros.begin(), zeros.begin() + static_cast<std::ptrdiff_t>(n_anti));
  std::vector<cd> zeros_causal(zeros.begin() + static_cast<std::ptrdiff_t>(n_anti), zeros.end());

  // The anti-causal factor is scaled for unit dc gain and the causal factor
  // keeps the rest, so a zero-phase parent with H(1) = 1 yields two unit-gain
  // factors and a causal parent yields an identity anti-causal factor.
  RationalSystem anti(std::move(zeros_anti), std::move(outside), cd(1.0));
  cd g_anti{1.0, 0.0};
  const cd dc = anti.evaluate(cd(1.0));
  if (std::abs(dc) > 1e-300 && std::isfinite(std::abs(dc))) g_anti = 1.0 / dc;
  anti = RationalSystem(anti.zeros(), anti.poles(), g_anti);
  RationalSystem causal(std::move(zeros_causal), std::move(inside), sys.gain() / g_anti);
  return {std::move(causal), std::move(anti)};
}

VectorXcd filter(const RationalSystem& sys, const VectorXcd& x, Direction direction) {
  return filter_impl(sys, x, direction);
}

VectorXd filter(const RationalSystem& sys, const VectorXd& x, Direction direction) {
  return filter_impl(sys, x, direction);
}

Index decay_horizon(const RationalSystem& causal, double tol) {
  double r = 0.0;
  for (cd p : causal.poles()) r = std::max(r, std::abs(p));
  const Index order = causal.order();
  if (r >= 1.0) throw Error(ErrorCode::NotCausal, "decay horizon needs poles inside the unit circle");
  if (r < 1e-12) return order + 1;
  return static_cast<Index>(std::ceil(std::log(tol) / std::log(r))) + order;
}

RealTaps impulse_response(const RationalSystem& causal, Index length) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "impulse length must be >= 1");
  VectorXd x = VectorXd::Zero(length);
  x(0) = 1.0;
  return RealTaps::causal(filter(causal, x));
}

RealTaps noncausal_impulse(const CausalitySplit& split, Index half_length) {
  if (half_length < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  const RationalSystem backward = split.anticausal.mirrored();
  const Index ext = std::max(decay_horizon(split.causal), decay_horizon(backward));
  const Index centre = half_length + ext;
  VectorXd x = VectorXd::Zero(centre + half_length + 1);
  x(centre) = 1.0;
  VectorXd y = filter(backward, x, Direction::Backward);
  y = filter(split.causal, y, Direction::Forward);
  return RealTaps::centered(y.segment(centre - half_length, 2 * half_length + 1));
}

double group_delay_dc(const RationalSystem& sys) {
  const cd one{1.0, 0.0};
  for (cd b : sys.zeros())
    if (std::abs(b - one) < 1e-12) throw Error(ErrorCode::ZeroAtDc, "H(1) = 0");
  const cd h = sys.evaluate(one);
  if (std::abs(h) < 1e-300) throw Error(ErrorCode::ZeroAtDc, "H(1) = 0");
  // d/dw log H(e^{iw}) = i z H'(z)/H(z); at z = 1 the group delay is the
  // negated real part of H'/H (equivalently Im{i H'/H} with the sign of -dphi/dw).
  return -sys.log_derivative(one).real();
}

double group_delay_dc(const RealTaps& taps) {
  double num = 0.0;
  const double den = taps.sum();
  if (std::abs(den) < 1e-300) throw Error(ErrorCode::ZeroAtDc, "taps sum to zero");
  for (Index i = 0; i < taps.length(); ++i) num += static_cast<double>(i - taps.origin) * taps.values(i);
  return num / den;
}

}  // namespace pulseforge

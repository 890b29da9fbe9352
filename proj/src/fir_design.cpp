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

#include "pulseforge/fir_design.hpp"

#include "pulseforge/linalg.hpp"
#include "pulseforge/spectral.hpp"

namespace pulseforge {

namespace {
constexpr double kGapFloor = 1e-10;
constexpr double kDcFloor = 1e-12;
}  // namespace

void SlepianSpec::validate() const {
  if (half_length < 1) throw Error(ErrorCode::InvalidArgument, "Slepian half-length must be >= 1");
  if (!(cutoff > 0.0 && cutoff < 0.5)) throw Error(ErrorCode::BadCutoff, "Slepian cut-off must lie in (0, 0.5)");
}

SlepianDesign slepian_design(const SlepianSpec& spec) {
  spec.validate();
  const Index m = spec.length();
  const MatrixXd s = linalg::passband_gram<double>(m, spec.omega_c()) / kTwoPi;
  const auto pairs = linalg::eig_sym<double>(s);

  const double gap = m > 1 ? pairs[0].value - pairs[1].value : 1.0;
  VectorXd h = pairs[0].vector;
  if (gap < kGapFloor) {
    if (spec.degenerate == DegeneratePolicy::Throw)
      throw Error(ErrorCode::IllConditioned, "leading concentrations differ by less than 1e-10");
    VectorXd acc = VectorXd::Zero(m);
    const VectorXd ones = VectorXd::Ones(m);
    for (const auto& p : pairs) {
      if (pairs[0].value - p.value >= kGapFloor) break;
      acc += p.vector.dot(ones) * p.vector;
    }
    // S is persymmetric, so the exact projection of the all-ones vector is
    // symmetric; averaging with the reversal removes rounding from mixing
    // across the near-degenerate edge.
    acc = 0.5 * (acc + acc.reverse()).eval();
    h = acc.normalized();
  }

  const double c_dc = h.sum();
  if (std::abs(c_dc) < kDcFloor) throw Error(ErrorCode::IllConditioned, "leading eigenvector has zero dc gain");
  RealTaps taps = RealTaps::centered(h / c_dc);
  const double conc = passband_concentration(taps, spec.omega_c());
  return {std::move(taps), conc, pairs[0].value, gap};
}

double passband_concentration(const RealTaps& taps, double omega_c) {
  const MatrixXd s = linalg::passband_gram<double>(taps.length(), omega_c);
  const VectorXd& h = taps.values;
  return h.dot(s * h) / (kTwoPi * h.squaredNorm());
}

RealTaps windowed_sinc(double f_snc, const RealTaps& window) {
  if (!(f_snc > 0.0 && f_snc < 0.5)) throw Error(ErrorCode::BadCutoff, "sinc cut-off must lie in (0, 0.5)");
  if (window.origin * 2 + 1 != window.length())
    throw Error(ErrorCode::InvalidArgument, "window must be centered with odd length");
  const double omega = kTwoPi * f_snc;
  VectorXd v(window.length());
  for (Index i = 0; i < v.size(); ++i) {
    const double m = static_cast<double>(i - window.origin);
    v(i) = sinc_time(m, omega) * window.values(i);
  }
  const double dc = v.sum();
  if (std::abs(dc) < kDcFloor) throw Error(ErrorCode::IllConditioned, "windowed sinc has zero dc gain");
  return RealTaps::centered(v / dc);
}

WiseSpec WiseSpec::from_cycles(Index m, double q, double f_lo, double f_hi, double w_pass, double w_stop) {
  WiseSpec s;
  s.length = m;
  s.delay = q;
  s.omega_lo = kTwoPi * f_lo;
  s.omega_hi = kTwoPi * f_hi;
  s.pass_weight = w_pass;
  s.stop_weight = w_stop;
  return s;
}

void WiseSpec::validate() const {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "WISE length must be >= 1");
  if (!(omega_lo > 0.0 && omega_lo <= omega_hi && omega_hi < kPi))
    throw Error(ErrorCode::BadCutoff, "need 0 < omega_lo <= omega_hi < pi");
  if (!(pass_weight > 0.0 && stop_weight > 0.0))
    throw Error(ErrorCode::InvalidArgument, "WISE weights must be positive");
  if (!std::isfinite(delay)) throw Error(ErrorCode::InvalidArgument, "group delay must be finite");
}

WiseSystem wise_system(const WiseSpec& spec) {
  spec.validate();
  const Index m = spec.length;
  const MatrixXd pass = linalg::passband_gram<double>(m, spec.omega_lo);
  const MatrixXd stop = kTwoPi * MatrixXd::Identity(m, m) - linalg::passband_gram<double>(m, spec.omega_hi);

  WiseSystem sys;
  sys.sxx = spec.pass_weight * pass + spec.stop_weight * stop;
  sys.sxy.resize(m);
  for (Index i = 0; i < m; ++i)
    sys.sxy(i) = spec.pass_weight * linalg::band_integral<double>(static_cast<double>(i) - spec.delay, spec.omega_lo);
  // |D(w)|^2 = 1 over the pass band, so the constant is w_pass * 2 w_lo.
  sys.syy = spec.pass_weight * 2.0 * spec.omega_lo;
  return sys;
}

double wise_value(const WiseSystem& sys, const VectorXd& h) {
  return h.dot(sys.sxx * h) - 2.0 * h.dot(sys.sxy) + sys.syy;
}

WiseDesign wise_lowpass(const WiseSpec& spec) {
  const WiseSystem sys = wise_system(spec);
  VectorXd h = linalg::solve<double>(sys.sxx, sys.sxy);
  const double wise = wise_value(sys, h);
  const double c_dc = h.sum();
  if (std::abs(c_dc) < kDcFloor) throw Error(ErrorCode::IllConditioned, "WISE solution has zero dc gain");
  return {RealTaps::causal(h / c_dc), std::move(h), wise};
}

}  // namespace pulseforge

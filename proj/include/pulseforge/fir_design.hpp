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

#include "pulseforge/common.hpp"

namespace pulseforge {

/// What slepian_lowpass does when the two leading concentrations are
/// numerically indistinguishable.
enum class DegeneratePolicy {
  Throw,
  /// Project the all-ones vector onto the near-degenerate leading subspace,
  /// i.e. the maximally concentrated shape with the largest dc response.
  ProjectDc,
};

struct SlepianSpec {
  Index half_length = 16;  // K, length M = 2K + 1
  double cutoff = 0.1;     // f_c, cycles/sample
  DegeneratePolicy degenerate = DegeneratePolicy::Throw;

  Index length() const { return 2 * half_length + 1; }
  double omega_c() const { return kTwoPi * cutoff; }
  void validate() const;
};

struct SlepianDesign {
  RealTaps taps;           // unit dc gain
  double concentration;    // pass-band power fraction of the taps
  double eigenvalue;       // leading eigenvalue of S_wc / 2pi
  double eigen_gap;        // leading minus second eigenvalue
};

SlepianDesign slepian_design(const SlepianSpec& spec);

/// Maximal pass-band power concentration low-pass, scaled for unit dc gain.
inline RealTaps slepian_lowpass(const SlepianSpec& spec) { return slepian_design(spec).taps; }

/// Fraction of the taps' power that lies inside |w| <= omega_c (Rayleigh quotient).
double passband_concentration(const RealTaps& taps, double omega_c);

/// Sampled sinc with cut-off f_snc tapered by `window`, then scaled for unit
/// dc gain. The window must be centered.
RealTaps windowed_sinc(double f_snc, const RealTaps& window);

struct WiseSpec {
  Index length = 33;          // M
  double delay = 16.0;        // q, samples; may be non-integer
  double omega_lo = 0.0;      // pass-band edge, rad/sample
  double omega_hi = 0.0;      // stop-band edge, rad/sample
  double pass_weight = 1.0;
  double stop_weight = 1000.0;

  /// Edges given in cycles/sample.
  static WiseSpec from_cycles(Index m, double q, double f_lo, double f_hi, double w_pass, double w_stop);
  void validate() const;
};

struct WiseDesign {
  RealTaps taps;        // causal, normalized for unit dc gain
  VectorXd raw;         // minimizer before dc normalization
  double wise;          // weighted integral of squared error of `raw`
};

/// Least-squared-error low-pass with pass-band group delay q.
WiseDesign wise_lowpass(const WiseSpec& spec);

/// Normal-equation pieces of the squared-error criterion; exposed for tests.
struct WiseSystem {
  MatrixXd sxx;
  VectorXd sxy;
  double syy;
};
WiseSystem wise_system(const WiseSpec& spec);

/// h' Sxx h - 2 h' sxy + syy.
double wise_value(const WiseSystem& sys, const VectorXd& h);

}  // namespace pulseforge

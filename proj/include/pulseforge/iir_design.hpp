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

#include <vector>

namespace pulseforge {

/// One second-order section, (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
/// First-order sections carry b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// H(z) = gain * prod(z - zero) / prod(z - pole). Pole/zero/gain is the
/// source of truth; `sections()` derives the difference-equation cascade.
class RationalSystem {
 public:
  RationalSystem() = default;
  RationalSystem(std::vector<cd> zeros, std::vector<cd> poles, cd gain);

  static RationalSystem identity() { return {}; }
  static RationalSystem delay(Index samples);

  const std::vector<cd>& zeros() const { return zeros_; }
  const std::vector<cd>& poles() const { return poles_; }
  cd gain() const { return gain_; }
  Index order() const { return static_cast<Index>(poles_.size()); }

  cd evaluate(cd z) const;
  cd response(double omega) const { return evaluate(std::polar(1.0, omega)); }
  /// H'(z) / H(z).
  cd log_derivative(cd z) const;

  /// Real gain and every complex root paired with its conjugate.
  bool is_real(double tol = 1e-9) const;
  /// Realizable by a forward recursion: all poles inside the unit circle and
  /// no more zeros than poles.
  bool is_causal() const;

  /// Cascade realization. Conjugate pole pairs take zero pairs; sections are
  /// ordered by ascending pole radius. Requires a real, causal system.
  std::vector<Biquad> sections() const;

  /// H(1/z): the time-reversed system.
  RationalSystem mirrored() const;

  RationalSystem operator*(const RationalSystem& other) const;

 private:
  std::vector<cd> zeros_;
  std::vector<cd> poles_;
  cd gain_{1.0, 0.0};
};

/// Continuous relative-time Butterworth prototype of order 2M:
/// B(s) = 1, A(s) = (-1/wc^2)^M s^{2M} + 1.
struct AnalogButterworthPrototype {
  Index half_order = 4;
  double omega_c = 0.3 * kTwoPi;

  /// The 2M roots of A(s), equally spaced on the circle of radius wc.
  std::vector<cd> poles() const;
  cd evaluate(cd s) const;
};

/// Bilinear discretization s = 2(z - 1)/(z + 1) of the prototype with cut-off
/// 2 pi f_c. Non-causal (zero phase), unit dc gain, 2M zeros at z = -1.
RationalSystem butterworth_discrete(Index half_order, double f_c);

inline constexpr Index kMaxButterworthHalfOrder = 12;

struct CausalitySplit {
  RationalSystem causal;      // |pole| < 1, run forward
  RationalSystem anticausal;  // |pole| > 1, run backward
};

CausalitySplit split_causal(const RationalSystem& sys);

enum class Direction { Forward, Backward };

/// Runs the section cascade with zero initial state. Backward processes the
/// newest sample first; pass the mirror of an anti-causal factor.
VectorXcd filter(const RationalSystem& sys, const VectorXcd& x, Direction direction = Direction::Forward);
VectorXd filter(const RationalSystem& sys, const VectorXd& x, Direction direction = Direction::Forward);

/// Samples until the slowest pole decays below `tol`:
/// ceil(ln tol / ln r_max) + order.
Index decay_horizon(const RationalSystem& causal, double tol = 1e-12);

/// First `length` samples of the impulse response of a causal system.
RealTaps impulse_response(const RationalSystem& causal, Index length);

/// Zero-phase impulse response h[m], m = -K..K, obtained by filtering a unit
/// impulse backward through the anti-causal factor and then forward through
/// the causal factor.
RealTaps noncausal_impulse(const CausalitySplit& split, Index half_length);

/// Pass-band group delay at dc, -d phase / d omega at omega -> 0, evaluated
/// analytically from the logarithmic derivative at z = 1.
double group_delay_dc(const RationalSystem& sys);

/// Same quantity for a tap sequence, with m measured from the taps' origin.
double group_delay_dc(const RealTaps& taps);

}  // namespace pulseforge

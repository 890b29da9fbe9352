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

class RationalSystem;

/// Strictly increasing relative angular frequencies in [-pi, pi].
class FrequencyGrid {
 public:
  explicit FrequencyGrid(VectorXd points);

  /// n points uniformly spaced on [-pi, pi).
  static FrequencyGrid uniform(Index n = 4096);
  /// n points uniformly spaced on [lo, hi], both ends included.
  static FrequencyGrid linspace(double lo, double hi, Index n);

  const VectorXd& points() const { return points_; }
  Index size() const { return points_.size(); }
  double operator[](Index i) const { return points_(i); }

 private:
  VectorXd points_;
};

struct ResponseCurve {
  FrequencyGrid grid;
  VectorXcd values;

  VectorXd magnitude() const { return values.cwiseAbs(); }
  VectorXd phase() const { return values.unaryExpr([](cd v) { return std::arg(v); }); }
};

/// H(w) = sum_m h[m] e^{-imw}, with m measured from the taps' origin.
template <typename Scalar>
cd dtft(const Taps<Scalar>& taps, double omega) {
  cd acc{0.0, 0.0};
  for (Index i = 0; i < taps.length(); ++i) {
    const double m = static_cast<double>(i - taps.origin);
    acc += cd(taps.values(i)) * std::polar(1.0, -m * omega);
  }
  return acc;
}

/// Reference O(N^2) DFT. The inverse divides by N.
VectorXcd dft(const VectorXcd& x, bool invert = false);

/// sin(W t) / (W t), with the removable singularity handled.
double sinc_time(double t, double omega_pulse);

/// Normalized Dirichlet kernel (1/M) sum_{m=-K..K} e^{-im phi}, phi = omega - shift.
/// Equals 1 at phi = 0 (mod 2 pi).
double dirichlet(double omega, Index m_odd, double shift = 0.0);

template <typename Scalar>
ResponseCurve sample_response(const Taps<Scalar>& taps, const FrequencyGrid& grid) {
  VectorXcd v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v(i) = dtft(taps, grid[i]);
  return {grid, std::move(v)};
}

/// Evaluates B(z)/A(z) at z = e^{iw}; throws PoleOnGridPoint when |A| < 1e-14.
ResponseCurve sample_response(const RationalSystem& sys, const FrequencyGrid& grid);

/// (1 / 2pi) times the trapezoidal integral of |H|^2 over the uniform grid's period.
double band_power(const ResponseCurve& curve);

}  // namespace pulseforge

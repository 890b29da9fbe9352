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

#include "pulseforge/spectral.hpp"

#include "pulseforge/iir_design.hpp"

namespace pulseforge {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadCutoff: return "BadCutoff";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::PoleOnUnitCircle: return "PoleOnUnitCircle";
    case ErrorCode::PoleOnGridPoint: return "PoleOnGridPoint";
    case ErrorCode::NotCausal: return "NotCausal";
    case ErrorCode::ZeroAtDc: return "ZeroAtDc";
    case ErrorCode::BadSymbolCount: return "BadSymbolCount";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::OrthogonalityFailure: return "OrthogonalityFailure";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::BadBlockShape: return "BadBlockShape";
  }
  return "Unknown";
}

FrequencyGrid::FrequencyGrid(VectorXd points) : points_(std::move(points)) {
  if (points_.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty frequency grid");
  for (Index i = 0; i < points_.size(); ++i) {
    if (!(points_(i) >= -kPi && points_(i) <= kPi))
      throw Error(ErrorCode::InvalidArgument, "grid point outside [-pi, pi]");
    if (i > 0 && !(points_(i) > points_(i - 1)))
      throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::uniform(Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid size must be >= 1");
  VectorXd p(n);
  for (Index i = 0; i < n; ++i) p(i) = -kPi + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  return FrequencyGrid(std::move(p));
}

FrequencyGrid FrequencyGrid::linspace(double lo, double hi, Index n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "linspace needs n >= 2");
  VectorXd p = VectorXd::LinSpaced(n, lo, hi);
  p(n - 1) = hi;
  return FrequencyGrid(std::move(p));
}

VectorXcd dft(const VectorXcd& x, bool invert) {
  const Index n = x.size();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dft needs length >= 1");
  const double sign = invert ? 1.0 : -1.0;
  VectorXcd out(n);
  for (Index k = 0; k < n; ++k) {
    cd acc{0.0, 0.0};
    for (Index j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays accurate for long inputs.
      const Index kj = (k * j) % n;
      acc += x(j) * std::polar(1.0, sign * kTwoPi * static_cast<double>(kj) / static_cast<double>(n));
    }
    out(k) = invert ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

double sinc_time(double t, double omega_pulse) {
  if (!(omega_pulse > 0.0)) throw Error(ErrorCode::InvalidArgument, "pulse bandwidth must be positive");
  const double x = omega_pulse * t;
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double dirichlet(double omega, Index m_odd, double shift) {
  if (m_odd < 1 || m_odd % 2 == 0) throw Error(ErrorCode::InvalidArgument, "Dirichlet length must be odd");
  const double phi = std::remainder(omega - shift, kTwoPi);
  const double m = static_cast<double>(m_odd);
  const double den = std::sin(phi / 2.0);
  // Odd M: the kernel is +1 at every multiple of 2 pi.
  if (std::abs(phi / 2.0) < 1e-8) return 1.0 - (m * m - 1.0) * phi * phi / 24.0;
  return std::sin(m * phi / 2.0) / (m * den);
}

ResponseCurve sample_response(const RationalSystem& sys, const FrequencyGrid& grid) {
  VectorXcd v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const cd z = std::polar(1.0, grid[i]);
    cd den{1.0, 0.0};
    for (cd a : sys.poles()) den *= (z - a);
    if (std::abs(den) < 1e-14) throw Error(ErrorCode::PoleOnGridPoint, "pole on the unit circle at a grid point");
    cd num = sys.gain();
    for (cd b : sys.zeros()) num *= (z - b);
    v(i) = num / den;
  }
  return {grid, std::move(v)};
}

double band_power(const ResponseCurve& curve) {
  const VectorXd& w = curve.grid.points();
  const Index n = w.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (Index i = 0; i + 1 < n; ++i)
    acc += 0.5 * (std::norm(curve.values(i)) + std::norm(curve.values(i + 1))) * (w(i + 1) - w(i));
  // A grid that starts at -pi and stops short of pi closes the period back to
  // the first point.
  const double gap = (w(0) + kTwoPi) - w(n - 1);
  if (std::abs(w(0) + kPi) < 1e-12 && gap > 1e-12)
    acc += 0.5 * (std::norm(curve.values(n - 1)) + std::norm(curve.values(0))) * gap;
  return acc / kTwoPi;
}

}  // namespace pulseforge

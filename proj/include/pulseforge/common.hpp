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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace pulseforge {

using Index = Eigen::Index;
using cd = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using VectorXcd = Vector<cd>;
using MatrixXd = Matrix<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  InvalidArgument,
  BadCutoff,
  NotSymmetric,
  NoConvergence,
  Singular,
  IllConditioned,
  OrderTooHigh,
  PoleOnUnitCircle,
  PoleOnGridPoint,
  NotCausal,
  ZeroAtDc,
  BadSymbolCount,
  SymbolOutOfRange,
  OrthogonalityFailure,
  NotPowerOfTwo,
  BadBlockShape,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename Scalar>
using real_t = typename Eigen::NumTraits<Scalar>::Real;

/// Finite tap sequence h[m]. `origin` is the storage index of m = 0, so
/// m runs from -origin to length()-1-origin. Causal taps have origin 0;
/// centered length-(2K+1) taps have origin K.
template <typename Scalar>
struct Taps {
  Vector<Scalar> values;
  Index origin = 0;

  Taps() = default;
  Taps(Vector<Scalar> v, Index o) : values(std::move(v)), origin(o) { validate(); }

  static Taps causal(Vector<Scalar> v) { return Taps(std::move(v), 0); }

  static Taps centered(Vector<Scalar> v) {
    if (v.size() % 2 == 0) throw Error(ErrorCode::InvalidArgument, "centered taps need odd length");
    const Index k = v.size() / 2;
    return Taps(std::move(v), k);
  }

  static Taps identity() {
    Vector<Scalar> v(1);
    v(0) = Scalar(1);
    return causal(std::move(v));
  }

  Index length() const { return values.size(); }
  Index first_index() const { return -origin; }
  Index last_index() const { return values.size() - 1 - origin; }

  /// h[m] with zero outside the support.
  Scalar at(Index m) const {
    const Index i = m + origin;
    return (i < 0 || i >= values.size()) ? Scalar(0) : values(i);
  }

  Scalar sum() const { return values.sum(); }

  real_t<Scalar> energy() const { return values.squaredNorm(); }

  bool is_symmetric(real_t<Scalar> tol) const {
    if (origin * 2 + 1 != values.size()) return false;
    for (Index m = 1; m <= origin; ++m)
      if (std::abs(at(m) - at(-m)) > tol) return false;
    return true;
  }

  void validate() const {
    if (values.size() < 1) throw Error(ErrorCode::InvalidArgument, "taps must have length >= 1");
    if (origin < 0 || origin >= values.size())
      throw Error(ErrorCode::InvalidArgument, "taps origin outside [0, M-1]");
  }
};

using RealTaps = Taps<double>;
using ComplexTaps = Taps<cd>;

template <typename Scalar>
Taps<cd> to_complex(const Taps<Scalar>& t) {
  return Taps<cd>(t.values.template cast<cd>(), t.origin);
}

/// Direct convolution y[n] = sum_m b[m] x[n-m]; full length N+M-1.
template <typename A, typename B>
auto convolve(const Vector<A>& x, const Vector<B>& h) {
  using R = decltype(A() * B());
  Vector<R> y = Vector<R>::Zero(x.size() + h.size() - 1);
  for (Index n = 0; n < x.size(); ++n) {
    if (x(n) == A(0)) continue;
    for (Index m = 0; m < h.size(); ++m) y(n + m) += x(n) * h(m);
  }
  return y;
}

}  // namespace pulseforge

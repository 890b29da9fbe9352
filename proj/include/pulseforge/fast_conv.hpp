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

#include <cstdint>
#include <vector>

namespace pulseforge {

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 transform with the bit-reversal permutation and twiddle
/// factors tabulated once for a fixed length.
template <typename Real>
class Radix2Fft {
 public:
  using Complex = std::complex<Real>;
  using CVector = Vector<Complex>;

  explicit Radix2Fft(Index n) : n_(n) {
    if (!is_power_of_two(n)) throw Error(ErrorCode::NotPowerOfTwo, "FFT length must be a power of two");
    Index bits = 0;
    while ((Index{1} << bits) < n) ++bits;
    reversed_.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      Index r = 0;
      for (Index b = 0; b < bits; ++b)
        if (i & (Index{1} << b)) r |= Index{1} << (bits - 1 - b);
      reversed_[static_cast<std::size_t>(i)] = r;
    }
    twiddle_.resize(static_cast<std::size_t>(std::max<Index>(1, n / 2)));
    for (Index k = 0; k < n / 2; ++k)
      twiddle_[static_cast<std::size_t>(k)] =
          std::polar(Real(1), -Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(k) / static_cast<Real>(n));
  }

  Index size() const { return n_; }

  CVector forward(const CVector& x) const { return transform(x, false); }
  /// Inverse transform, scaled by 1/N.
  CVector inverse(const CVector& x) const { return transform(x, true); }

  /// Number of transforms run through this object.
  std::uint64_t calls() const { return calls_; }

 private:
  CVector transform(const CVector& x, bool invert) const {
    if (x.size() != n_) throw Error(ErrorCode::BadBlockShape, "input length does not match the FFT size");
    ++calls_;
    CVector a(n_);
    for (Index i = 0; i < n_; ++i) a(reversed_[static_cast<std::size_t>(i)]) = x(i);
    for (Index len = 2; len <= n_; len <<= 1) {
      const Index half = len / 2;
      const Index stride = n_ / len;
      for (Index start = 0; start < n_; start += len) {
        for (Index j = 0; j < half; ++j) {
          Complex w = twiddle_[static_cast<std::size_t>(j * stride)];
          if (invert) w = std::conj(w);
          const Complex u = a(start + j);
          const Complex v = a(start + j + half) * w;
          a(start + j) = u + v;
          a(start + j + half) = u - v;
        }
      }
    }
    if (invert) a /= static_cast<Real>(n_);
    return a;
  }

  Index n_;
  std::vector<Index> reversed_;
  std::vector<Complex> twiddle_;
  mutable std::uint64_t calls_ = 0;
};

/// One-shot transform; the inverse divides by N.
VectorXcd fft(const VectorXcd& x, bool invert = false);

/// Kernel transform and block sizes for overlap-add: B = L + M is a power of
/// two and H[k] is computed once at construction.
class BlockPlan {
 public:
  /// B is the smallest power of two >= requested_block + M; L = B - M.
  BlockPlan(const VectorXcd& kernel, Index requested_block);

  Index kernel_length() const { return m_; }
  Index block_length() const { return l_; }
  Index fft_length() const { return fft_.size(); }
  const VectorXcd& kernel_spectrum() const { return h_; }
  const Radix2Fft<double>& engine() const { return fft_; }

 private:
  Index m_;
  Index l_;
  Radix2Fft<double> fft_;
  VectorXcd h_;
};

/// Filters one zero-padded block of length B whose last M entries are zero.
/// The result is the full linear convolution of the unpadded block with the
/// kernel, transients included.
VectorXcd convolve_block(const BlockPlan& plan, const VectorXcd& padded_block);

/// Running tail of the previous block for overlap-add splicing.
struct SpliceState {
  VectorXcd carry;
  Index block_index = 0;

  explicit SpliceState(Index m) : carry(VectorXcd::Zero(m)) {}
};

/// Adds the carried termination transient to the block's initiation transient
/// and returns the L finished samples; the block's new tail becomes the carry.
VectorXcd splice(SpliceState& state, const VectorXcd& block_out);

/// Streaming overlap-add over a finite stream. The final partial block is
/// zero-padded; the output has the stream's length.
VectorXcd overlap_add(const BlockPlan& plan, const VectorXcd& stream);

}  // namespace pulseforge

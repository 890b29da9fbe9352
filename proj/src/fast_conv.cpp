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

#include "pulseforge/fast_conv.hpp"

namespace pulseforge {

VectorXcd fft(const VectorXcd& x, bool invert) {
  const Radix2Fft<double> engine(x.size());
  return invert ? engine.inverse(x) : engine.forward(x);
}

namespace {

Index block_size_for(Index requested, Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "kernel must have at least one tap");
  if (requested < 1) throw Error(ErrorCode::InvalidArgument, "block length must be >= 1");
  Index b = 1;
  while (b < requested + m) b <<= 1;
  return b;
}

}  // namespace

BlockPlan::BlockPlan(const VectorXcd& kernel, Index requested_block)
    : m_(kernel.size()), l_(0), fft_(block_size_for(requested_block, kernel.size())) {
  l_ = fft_.size() - m_;
  VectorXcd padded = VectorXcd::Zero(fft_.size());
  padded.head(m_) = kernel;
  h_ = fft_.forward(padded);
}

VectorXcd convolve_block(const BlockPlan& plan, const VectorXcd& padded_block) {
  const Index b = plan.fft_length();
  if (padded_block.size() != b) throw Error(ErrorCode::BadBlockShape, "block length must equal B");
  if (padded_block.tail(plan.kernel_length()).cwiseAbs().maxCoeff() != 0.0)
    throw Error(ErrorCode::BadBlockShape, "the last M samples of a block must be zero");
  const VectorXcd x = plan.engine().forward(padded_block);
  return plan.engine().inverse(VectorXcd(x.cwiseProduct(plan.kernel_spectrum())));
}

VectorXcd splice(SpliceState& state, const VectorXcd& block_out) {
  const Index m = state.carry.size();
  const Index b = block_out.size();
  const Index l = b - m;
  if (l < 1) throw Error(ErrorCode::BadBlockShape, "block output shorter than the carry");
  // Block outputs overlap by M samples, which may reach past L when L < M:
  // fold the whole carry in, emit the first L samples and keep the remainder.
  VectorXcd acc = block_out;
  acc.head(m) += state.carry;
  VectorXcd out = acc.head(l);
  state.carry = acc.tail(m);
  ++state.block_index;
  return out;
}

VectorXcd overlap_add(const BlockPlan& plan, const VectorXcd& stream) {
  const Index n = stream.size();
  const Index l = plan.block_length();
  const Index b = plan.fft_length();
  SpliceState state(plan.kernel_length());
  VectorXcd out(n);
  VectorXcd block(b);
  for (Index start = 0; start < n; start += l) {
    const Index take = std::min(l, n - start);
    block.setZero();
    block.head(take) = stream.segment(start, take);
    const VectorXcd y = splice(state, convolve_block(plan, block));
    out.segment(start, take) = y.head(take);
  }
  return out;
}

}  // namespace pulseforge

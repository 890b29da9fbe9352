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

#include "pulseforge/modem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pulseforge {

/// One published number a preset run must reproduce. Either
/// |observed - value| <= tolerance, or observed within [min, max].
struct ExpectedMetric {
  std::string key;
  std::optional<double> value;
  std::optional<double> tolerance;
  std::optional<double> min;
  std::optional<double> max;

  bool accepts(double observed) const;
};

/// Overlap-add setup of the FFT convolution preset.
struct FastConvSpec {
  Index kernel_half_length = 36;  // M = 73
  Index requested_block = 183;    // L
  Index pulses = 20;              // length of the synthetic pulse stream
  std::uint64_t seed = 1;
};

struct Preset {
  std::string name;
  std::string description;
  std::optional<LinkSpec> link;
  std::optional<FastConvSpec> fastconv;
  std::vector<ExpectedMetric> expected;
};

std::vector<std::string> preset_names();
/// Throws InvalidArgument for an unknown name.
Preset preset(const std::string& name);

/// LinkSpec <-> JSON text. Field order is fixed.
std::string link_spec_to_json(const LinkSpec& spec, int indent = 2);
LinkSpec link_spec_from_json(const std::string& text);

/// Preset <-> JSON text, including its expected-metric block.
std::string preset_to_json(const Preset& p, int indent = 2);
Preset preset_from_json(const std::string& text);

}  // namespace pulseforge

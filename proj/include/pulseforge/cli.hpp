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

#include "pulseforge/presets.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pulseforge::cli {

/// Observed value of one expected metric.
struct MetricCheck {
  ExpectedMetric expected;
  double observed = 0.0;
  bool pass = false;
};

struct VerifyOutcome {
  std::string preset;
  std::vector<MetricCheck> checks;
  bool pass = false;
};

/// Runs a preset and compares every entry of its expected-metric block.
VerifyOutcome verify_preset(const Preset& p, unsigned threads = 1);

/// JSON report for a LinkReport; fixed field order, 12 significant digits.
std::string link_report_json(const LinkSpec& spec, const LinkConfig& cfg, const LinkReport& r);

/// Entry point of the pulseforge tool. `args` excludes the program name.
/// Returns 0 on success, 1 on a metric mismatch and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pulseforge::cli

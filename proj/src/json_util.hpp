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

#include "json.hpp"
#include "pulseforge/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace pulseforge::detail {

using Json = nlohmann::ordered_json;

/// The value as printed with 12 significant digits; reports store these so
/// their text is stable across platforms.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

inline Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

inline Json complex_pair(cd v) { return Json::array({num(v.real()), num(v.imag())}); }

inline std::optional<double> opt_double(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace pulseforge::detail

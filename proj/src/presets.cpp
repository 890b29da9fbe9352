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

#include "pulseforge/presets.hpp"

#include "json_util.hpp"

#include <set>

namespace pulseforge {

using detail::Json;

namespace {

LinkSpec base_link(const std::string& name) {
  LinkSpec s;
  s.name = name;
  s.pulse_half_length = 12;
  s.symbols = 4;
  s.rho = 2.0;
  s.pulses = 10000;
  s.snr_db = 0.0;
  s.seed = 1;
  return s;
}

ExpectedMetric near(std::string key, double value, double tol) {
  ExpectedMetric m;
  m.key = std::move(key);
  m.value = value;
  m.tolerance = tol;
  return m;
}

ExpectedMetric within(std::string key, std::optional<double> lo, std::optional<double> hi) {
  ExpectedMetric m;
  m.key = std::move(key);
  m.min = lo;
  m.max = hi;
  return m;
}

const char* noise_name(NoiseLaw n) { return n == NoiseLaw::Gaussian ? "gaussian" : "uniform"; }

NoiseLaw parse_noise(const std::string& s) {
  if (s == "gaussian") return NoiseLaw::Gaussian;
  if (s == "uniform") return NoiseLaw::Uniform;
  throw Error(ErrorCode::InvalidArgument, "noise must be 'gaussian' or 'uniform'");
}

const char* equalizer_name(Equalizer e) {
  switch (e) {
    case Equalizer::Calibrated: return "calibrated";
    case Equalizer::Narrowband: return "narrowband";
    case Equalizer::None: return "none";
  }
  return "calibrated";
}

Equalizer parse_equalizer(const std::string& s) {
  if (s == "calibrated") return Equalizer::Calibrated;
  if (s == "narrowband") return Equalizer::Narrowband;
  if (s == "none") return Equalizer::None;
  throw Error(ErrorCode::InvalidArgument, "equalizer must be 'calibrated', 'narrowband' or 'none'");
}

Json opt_json(double v) { return v > 0.0 ? Json(v) : Json(nullptr); }

Json pulse_json(const PulseSpec& p) {
  Json j;
  j["kind"] = p.kind;
  j["cutoff"] = opt_json(p.cutoff);
  j["half_order"] = p.half_order;
  return j;
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(where) + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!ok.count(item.key())) throw Error(ErrorCode::InvalidArgument, "unknown key '" + item.key() + "' in " + where);
}

PulseSpec pulse_from(const Json& j, const char* where) {
  check_keys(j, {"kind", "cutoff", "half_order", "recursive"}, where);
  PulseSpec p;
  p.kind = j.value("kind", p.kind);
  p.cutoff = detail::opt_double(j, "cutoff").value_or(0.0);
  p.half_order = j.value("half_order", p.half_order);
  return p;
}

Json link_json(const LinkSpec& s) {
  Json j;
  j["name"] = s.name;
  j["pulse_half_length"] = s.pulse_half_length;
  j["symbols"] = s.symbols;
  j["rho"] = s.rho;
  j["pulses"] = s.pulses;
  j["snr_db"] = s.snr_db ? Json(*s.snr_db) : Json(nullptr);
  j["noise"] = noise_name(s.noise);
  j["seed"] = s.seed;
  j["subchannel_pairs"] = s.subchannel_pairs;
  j["subcarrier_spacing"] = opt_json(s.subcarrier_spacing);
  j["carrier"] = s.carrier;
  j["shaping"] = pulse_json(s.shaping);
  if (s.receive) {
    Json r = pulse_json(*s.receive);
    r["recursive"] = s.receive_recursive;
    j["receive"] = r;
  } else {
    j["receive"] = "matched";
  }
  j["downconv"] = Json{{"half_order", s.downconv_half_order}, {"factor", s.downconv_factor}};
  j["channel_cutoff"] = opt_json(s.channel_cutoff);
  j["equalizer"] = equalizer_name(s.equalizer);
  j["orthogonality_tol"] = s.orthogonality_tol;
  j["threads"] = s.threads;
  return j;
}

LinkSpec link_from(const Json& j) {
  check_keys(j,
             {"name", "pulse_half_length", "symbols", "rho", "pulses", "snr_db", "noise", "seed", "subchannel_pairs",
              "subcarrier_spacing", "carrier", "shaping", "receive", "downconv", "channel_cutoff", "equalizer",
              "orthogonality_tol", "threads"},
             "link config");
  LinkSpec s;
  s.name = j.value("name", s.name);
  s.pulse_half_length = j.value("pulse_half_length", s.pulse_half_length);
  s.symbols = j.value("symbols", s.symbols);
  s.rho = j.value("rho", s.rho);
  s.pulses = j.value("pulses", s.pulses);
  s.snr_db = detail::opt_double(j, "snr_db");
  s.noise = parse_noise(j.value("noise", std::string("gaussian")));
  s.seed = j.value("seed", s.seed);
  s.subchannel_pairs = j.value("subchannel_pairs", s.subchannel_pairs);
  s.subcarrier_spacing = detail::opt_double(j, "subcarrier_spacing").value_or(0.0);
  s.carrier = j.value("carrier", s.carrier);
  if (j.contains("shaping")) s.shaping = pulse_from(j.at("shaping"), "shaping");
  if (j.contains("receive")) {
    const Json& r = j.at("receive");
    if (r.is_string()) {
      if (r.get<std::string>() != "matched") throw Error(ErrorCode::InvalidArgument, "receive must be 'matched' or an object");
    } else {
      s.receive = pulse_from(r, "receive");
      s.receive_recursive = r.value("recursive", false);
    }
  }
  if (j.contains("downconv")) {
    const Json& d = j.at("downconv");
    check_keys(d, {"half_order", "factor"}, "downconv");
    s.downconv_half_order = d.value("half_order", s.downconv_half_order);
    s.downconv_factor = d.value("factor", s.downconv_factor);
  }
  s.channel_cutoff = detail::opt_double(j, "channel_cutoff").value_or(0.0);
  s.equalizer = parse_equalizer(j.value("equalizer", std::string("calibrated")));
  s.orthogonality_tol = j.value("orthogonality_tol", s.orthogonality_tol);
  s.threads = j.value("threads", s.threads);
  return s;
}

Json metric_json(const ExpectedMetric& m) {
  Json j;
  j["key"] = m.key;
  if (m.value) j["value"] = *m.value;
  if (m.tolerance) j["tolerance"] = *m.tolerance;
  if (m.min) j["min"] = *m.min;
  if (m.max) j["max"] = *m.max;
  return j;
}

ExpectedMetric metric_from(const Json& j) {
  check_keys(j, {"key", "value", "tolerance", "min", "max"}, "expected metric");
  ExpectedMetric m;
  m.key = j.at("key").get<std::string>();
  m.value = detail::opt_double(j, "value");
  m.tolerance = detail::opt_double(j, "tolerance");
  m.min = detail::opt_double(j, "min");
  m.max = detail::opt_double(j, "max");
  return m;
}

}  // namespace

bool ExpectedMetric::accepts(double observed) const {
  if (!std::isfinite(observed)) return false;
  if (value && std::abs(observed - *value) > tolerance.value_or(0.0)) return false;
  if (min && observed < *min) return false;
  if (max && observed > *max) return false;
  return true;
}

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example4", "example5", "example6", "example7"};
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "example1") {
    LinkSpec s = base_link(name);
    s.pulses = 10;
    s.snr_db.reset();
    p.description = "Noise-free short Slepian pulses, 4 symbols";
    p.link = s;
    p.expected = {near("symbol_errors", 0, 0), within("max_deviation", std::nullopt, 1e-3)};
  } else if (name == "example2") {
    p.description = "Short Slepian pulses (K=12), 4 symbols, 0 dB Gaussian noise";
    p.link = base_link(name);
    p.expected = {near("delta_sharp", 2.500, 1e-2), near("bit_rate", 0.0800, 1e-4),
                  within("symbol_errors", 1, 30), within("dispersion_ratio", 0.95, 1.05)};
  } else if (name == "example3") {
    LinkSpec s = base_link(name);
    s.pulse_half_length = 36;
    p.description = "Longer Slepian pulses (K=36), 4 symbols";
    p.link = s;
    p.expected = {near("delta_sharp", 4.2720, 1e-2), near("bit_rate", 0.0274, 1e-4), near("symbol_errors", 0, 0)};
  } else if (name == "example4") {
    LinkSpec s = base_link(name);
    s.pulse_half_length = 124;
    s.symbols = 8;
    p.description = "Long Slepian pulses (K=124), 8 symbols";
    p.link = s;
    p.expected = {near("delta_sharp", 4.2700, 1e-2), near("bit_rate", 0.0120, 1e-4), near("symbol_errors", 0, 0)};
  } else if (name == "example5") {
    LinkSpec s = base_link(name);
    s.pulse_half_length = 124;
    s.symbols = 2;
    s.subchannel_pairs = 3;
    p.description = "Long Slepian pulses on 7 orthogonal sub-channels, 2 tokens each";
    p.link = s;
    p.expected = {near("delta_sharp", 4.2173, 1e-2), near("bit_rate", 0.0281, 1e-4),
                  near("channel_cutoff", 0.1124, 1e-4)};
  } else if (name == "example6") {
    LinkSpec s = base_link(name);
    s.pulse_half_length = 124;
    s.symbols = 2;
    s.subchannel_pairs = 3;
    s.shaping = PulseSpec{"butterworth", 2.0 / 249.0, 3};
    s.receive = PulseSpec{"butterworth", 2.0 / 249.0, 3};
    s.receive_recursive = true;
    s.subcarrier_spacing = 8.0 / 249.0;
    s.downconv_half_order = 3;
    s.orthogonality_tol = 0.05;
    p.description = "Mirrored Butterworth FIR on tx, causal 3rd-order Butterworth recursion on rx, 7 sub-channels";
    p.link = s;
    p.expected = {near("delta_sharp", 4.2176, 1e-2)};
  } else if (name == "example7") {
    p.description = "Overlap-add FFT convolution, M=73, B=256, L=183";
    p.fastconv = FastConvSpec{};
    p.expected = {near("kernel_length", 73, 0), near("fft_length", 256, 0), near("block_length", 183, 0),
                  within("max_abs_error", std::nullopt, 1e-9)};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "'");
  }
  return p;
}

std::string link_spec_to_json(const LinkSpec& spec, int indent) { return link_json(spec).dump(indent); }

LinkSpec link_spec_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  try {
    return link_from(j);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad link config: ") + e.what());
  }
}

std::string preset_to_json(const Preset& p, int indent) {
  Json j;
  j["name"] = p.name;
  j["description"] = p.description;
  if (p.link) j["link"] = link_json(*p.link);
  if (p.fastconv) {
    const FastConvSpec& f = *p.fastconv;
    j["fastconv"] = Json{{"kernel_half_length", f.kernel_half_length},
                         {"requested_block", f.requested_block},
                         {"pulses", f.pulses},
                         {"seed", f.seed}};
  }
  Json e = Json::array();
  for (const auto& m : p.expected) e.push_back(metric_json(m));
  j["expected"] = e;
  return j.dump(indent);
}

Preset preset_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    check_keys(j, {"name", "description", "link", "fastconv", "expected"}, "preset");
    Preset p;
    p.name = j.at("name").get<std::string>();
    p.description = j.value("description", std::string());
    if (j.contains("link")) p.link = link_from(j.at("link"));
    if (j.contains("fastconv")) {
      const Json& f = j.at("fastconv");
      check_keys(f, {"kernel_half_length", "requested_block", "pulses", "seed"}, "fastconv");
      FastConvSpec s;
      s.kernel_half_length = f.value("kernel_half_length", s.kernel_half_length);
      s.requested_block = f.value("requested_block", s.requested_block);
      s.pulses = f.value("pulses", s.pulses);
      s.seed = f.value("seed", s.seed);
      p.fastconv = s;
    }
    for (const auto& m : j.value("expected", Json::array())) p.expected.push_back(metric_from(m));
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad preset JSON: ") + e.what());
  }
}

}  // namespace pulseforge

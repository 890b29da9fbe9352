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

#include "pulseforge/cli.hpp"

#include "CLI11.hpp"
#include "json_util.hpp"
#include "pulseforge/fast_conv.hpp"
#include "pulseforge/fir_design.hpp"
#include "pulseforge/iir_design.hpp"
#include "pulseforge/spectral.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pulseforge::cli {

using detail::Json;
using detail::num;

namespace {

// Thrown for malformed command lines and input files; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Walks a JSON tree and rounds every float to 12 significant digits.
void round_tree(Json& j) {
  if (j.is_number_float()) {
    j = detail::round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_tree(v);
  }
}

std::string dump(Json j) {
  round_tree(j);
  return j.dump(2) + "\n";
}

// --- CSV sample files ---------------------------------------------------

struct CsvSeries {
  VectorXcd values;
  Index origin = 0;
  bool complex = false;
};

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& s, const std::string& where) {
  const char* b = s.c_str();
  while (std::isspace(static_cast<unsigned char>(*b))) ++b;
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  while (end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == b || (end && *end != '\0') || !std::isfinite(v)) throw UsageError(where + ": '" + s + "' is not a number");
  return v;
}

// Reads "index,value" or "index,re,im" rows; an optional header line and
// '#' comments are skipped. Every row must have the same column count and
// the indices must be consecutive.
CsvSeries read_series(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t columns = 0;
  Index lineno = 0, first = 0, expect = 0;
  std::vector<cd> vals;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_row(line);
    const std::string where = path + ":" + std::to_string(lineno);
    const bool alpha = std::any_of(line.begin(), line.end(), [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E';
    });
    if (columns == 0) {
      columns = cells.size();
      if (columns != 2 && columns != 3) throw UsageError(where + ": expected 2 or 3 columns, got " + std::to_string(columns));
      if (alpha && !header_seen) {
        header_seen = true;
        continue;
      }
    } else if (cells.size() != columns) {
      throw UsageError(where + ": expected " + std::to_string(columns) + " columns, got " + std::to_string(cells.size()));
    }
    const double idx = parse_number(cells[0], where);
    if (idx != std::floor(idx)) throw UsageError(where + ": index must be an integer");
    const auto n = static_cast<Index>(idx);
    if (vals.empty()) {
      first = n;
      expect = n;
    }
    if (n != expect) throw UsageError(where + ": indices must be consecutive");
    ++expect;
    const double re = parse_number(cells[1], where);
    const double im = columns == 3 ? parse_number(cells[2], where) : 0.0;
    vals.emplace_back(re, im);
  }
  if (vals.empty()) throw UsageError(path + ": no samples");
  CsvSeries s;
  s.values = Eigen::Map<VectorXcd>(vals.data(), static_cast<Index>(vals.size()));
  s.origin = -first;
  s.complex = columns == 3;
  return s;
}

template <typename Scalar>
std::string taps_csv(const Taps<Scalar>& t) {
  std::string s = is_complex_v<Scalar> ? "m,re,im\n" : "m,value\n";
  for (Index i = 0; i < t.length(); ++i) {
    s += std::to_string(i - t.origin) + ",";
    if constexpr (is_complex_v<Scalar>)
      s += fmt(t.values(i).real()) + "," + fmt(t.values(i).imag()) + "\n";
    else
      s += fmt(t.values(i)) + "\n";
  }
  return s;
}

Json taps_json(const RealTaps& t) {
  Json j;
  j["length"] = t.length();
  j["origin"] = t.origin;
  Json v = Json::array();
  for (Index i = 0; i < t.length(); ++i) v.push_back(t.values(i));
  j["values"] = v;
  return j;
}

Json roots_json(const std::vector<cd>& r) {
  Json a = Json::array();
  for (cd v : r) a.push_back(detail::complex_pair(v));
  return a;
}

std::string curve_csv(const ResponseCurve& c) {
  std::string s = "omega,f,re,im,mag,phase\n";
  for (Index i = 0; i < c.grid.size(); ++i) {
    const double w = c.grid[i];
    const cd v = c.values(i);
    s += fmt(w) + "," + fmt(w / kTwoPi) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "," + fmt(std::abs(v)) + "," +
         fmt(std::arg(v)) + "\n";
  }
  return s;
}

Json curve_json(const ResponseCurve& c) {
  Json j;
  Json omega = Json::array(), f = Json::array(), re = Json::array(), im = Json::array(), mag = Json::array(),
       ph = Json::array();
  for (Index i = 0; i < c.grid.size(); ++i) {
    const cd v = c.values(i);
    omega.push_back(c.grid[i]);
    f.push_back(c.grid[i] / kTwoPi);
    re.push_back(v.real());
    im.push_back(v.imag());
    mag.push_back(std::abs(v));
    ph.push_back(std::arg(v));
  }
  j["omega"] = omega;
  j["f"] = f;
  j["re"] = re;
  j["im"] = im;
  j["mag"] = mag;
  j["phase"] = ph;
  return j;
}

FrequencyGrid make_grid(Index points, std::optional<double> flo, std::optional<double> fhi) {
  if (points < 2) throw UsageError("--points must be >= 2");
  if (flo || fhi) {
    if (!(flo && fhi)) throw UsageError("--flo and --fhi go together");
    return FrequencyGrid::linspace(kTwoPi * *flo, kTwoPi * *fhi, points);
  }
  return FrequencyGrid::uniform(points);
}

// --- seeds and threads --------------------------------------------------

void apply_overrides(LinkSpec& s, const std::optional<std::uint64_t>& seed, const std::optional<unsigned>& threads) {
  if (const char* env = std::getenv("PULSEFORGE_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError("PULSEFORGE_SEED must be an unsigned integer");
    s.seed = v;
  }
  if (seed) s.seed = *seed;
  if (threads) s.threads = *threads;
}

// --- overlap-add helpers -------------------------------------------------

struct FastConvResult {
  Index kernel_length, fft_length, block_length;
  VectorXcd output;
  double max_abs_error;
};

FastConvResult run_fastconv(const VectorXcd& kernel, const VectorXcd& input, Index block) {
  const BlockPlan plan(kernel, block);
  // Trailing zeros let the stream flush the last termination transient, so
  // the spliced output is the full linear convolution.
  VectorXcd padded = VectorXcd::Zero(input.size() + kernel.size() - 1);
  padded.head(input.size()) = input;
  FastConvResult r{plan.kernel_length(), plan.fft_length(), plan.block_length(), overlap_add(plan, padded), 0.0};
  const VectorXcd direct = convolve(input, kernel);
  r.max_abs_error = (r.output - direct).cwiseAbs().maxCoeff();
  return r;
}

FastConvResult run_fastconv(const FastConvSpec& f) {
  LinkSpec s;
  s.pulse_half_length = f.kernel_half_length;
  s.pulses = f.pulses;
  s.seed = f.seed;
  const LinkConfig cfg = build_link(s);
  const VectorXcd kernel = to_complex(cfg.shaping).values;
  return run_fastconv(kernel, pulse_train(cfg, draw_symbols(cfg)), f.requested_block);
}

// --- link metrics --------------------------------------------------------

double dispersion_ratio(const LinkReport& r) {
  // The per-symbol ratio farthest from one.
  if (!r.measured || r.stats.empty()) return std::numeric_limits<double>::quiet_NaN();
  double worst = 1.0;
  for (const auto& st : r.stats) {
    const double q = st.dispersion / r.measured->delta_sigma;
    if (std::abs(q - 1.0) > std::abs(worst - 1.0)) worst = q;
  }
  return worst;
}

bool needs_simulation(const std::vector<ExpectedMetric>& expected) {
  for (const auto& m : expected)
    if (m.key == "symbol_errors" || m.key == "max_deviation" || m.key == "dispersion_ratio") return true;
  return false;
}

}  // namespace

std::string link_report_json(const LinkSpec& spec, const LinkConfig& cfg, const LinkReport& r) {
  Json j;
  j["name"] = spec.name;
  j["config"] = Json::parse(link_spec_to_json(spec, -1));
  // The thread count does not change the numbers, so it stays out of the
  // report and reports compare equal across thread counts.
  j["config"].erase("threads");

  Json d;
  d["pulse_length"] = cfg.pulse_length();
  d["subchannels"] = cfg.subchannels();
  d["sampling_delay"] = cfg.sampling_delay();
  d["channel_cutoff"] = cfg.channel_cutoff;
  d["subcarrier_spacing"] = cfg.subcarrier_spacing;
  d["phi0"] = cfg.constellation.phi0;
  d["phi_delta"] = cfg.constellation.phi_delta;
  Json gains = Json::array();
  for (cd g : cfg.equalizer_gains) gains.push_back(detail::complex_pair(g));
  d["equalizer_gains"] = gains;
  j["derived"] = d;

  Json a;
  a["wng"] = num(r.analytic.wng);
  a["cpp"] = num(r.analytic.cpp);
  a["sigma2"] = num(r.analytic.sigma2);
  const auto res = [](const std::optional<Resolvability>& v, Json& o) {
    o["delta_rho"] = v ? num(v->delta_rho) : Json(nullptr);
    o["delta_sigma"] = v ? num(v->delta_sigma) : Json(nullptr);
    o["delta_sharp"] = v ? num(v->delta_sharp) : Json(nullptr);
  };
  res(r.analytic.resolvability, a);
  a["bit_rate"] = num(r.analytic.bit_rate);
  a["capacity"] = num(r.analytic.capacity);
  j["analytic"] = a;

  Json m;
  m["signal_power"] = num(r.signal_power);
  m["sigma2"] = num(r.sigma2);
  res(r.measured, m);
  m["decisions"] = r.decisions;
  m["errors"] = r.errors;
  m["symbol_error_rate"] = num(r.decisions > 0 ? static_cast<double>(r.errors) / static_cast<double>(r.decisions) : 0.0);
  m["max_deviation"] = num(r.max_deviation);
  m["dispersion_ratio"] = num(dispersion_ratio(r));
  j["measured"] = m;

  Json stats = Json::array();
  for (const auto& st : r.stats) {
    Json s;
    s["subchannel"] = st.subchannel;
    s["symbol"] = st.symbol;
    s["count"] = st.count;
    s["mean"] = detail::complex_pair(st.mean);
    s["dispersion"] = num(st.dispersion);
    stats.push_back(s);
  }
  j["symbols"] = stats;
  return dump(j);
}

VerifyOutcome verify_preset(const Preset& p, unsigned threads) {
  VerifyOutcome out;
  out.preset = p.name;
  std::map<std::string, double> observed;
  if (p.link) {
    LinkSpec s = *p.link;
    s.threads = threads;
    const LinkConfig cfg = build_link(s);
    const LinkMetrics a = analytic_link_metrics(cfg);
    if (a.resolvability) observed["delta_sharp"] = a.resolvability->delta_sharp;
    observed["bit_rate"] = a.bit_rate;
    observed["channel_cutoff"] = cfg.channel_cutoff;
    if (needs_simulation(p.expected)) {
      const LinkReport r = simulate_link(cfg);
      observed["symbol_errors"] = static_cast<double>(r.errors);
      observed["max_deviation"] = r.max_deviation;
      observed["dispersion_ratio"] = dispersion_ratio(r);
    }
  }
  if (p.fastconv) {
    const FastConvResult r = run_fastconv(*p.fastconv);
    observed["kernel_length"] = static_cast<double>(r.kernel_length);
    observed["fft_length"] = static_cast<double>(r.fft_length);
    observed["block_length"] = static_cast<double>(r.block_length);
    observed["max_abs_error"] = r.max_abs_error;
  }
  out.pass = true;
  for (const auto& e : p.expected) {
    MetricCheck c;
    c.expected = e;
    const auto it = observed.find(e.key);
    c.observed = it == observed.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
    c.pass = e.accepts(c.observed);
    out.pass = out.pass && c.pass;
    out.checks.push_back(c);
  }
  return out;
}

namespace {

// --- subcommands ---------------------------------------------------------

struct FirArgs {
  std::string method, format = "json", out, degenerate = "throw";
  std::optional<Index> m, k;
  double fc = 0.1;
  std::optional<double> fsnc, feig;
  double flo = 0.0, fhi = 0.0, wpass = 1.0, wstop = 1000.0;
  std::optional<double> q;
};

Index resolve_length(const FirArgs& a, Index fallback_k) {
  if (a.m && a.k && *a.m != 2 * *a.k + 1) throw UsageError("--m and --k disagree (M = 2K + 1)");
  if (a.k) return 2 * *a.k + 1;
  if (a.m) return *a.m;
  return 2 * fallback_k + 1;
}

int design_fir(const FirArgs& a, std::ostream& out) {
  Json j;
  j["method"] = a.method;
  RealTaps taps;
  Json metrics;
  const DegeneratePolicy policy = a.degenerate == "project-dc" ? DegeneratePolicy::ProjectDc : DegeneratePolicy::Throw;
  if (a.method == "slepian") {
    const Index m = resolve_length(a, 16);
    if (m % 2 == 0) throw UsageError("Slepian length must be odd");
    SlepianSpec s{m / 2, a.fc, policy};
    const SlepianDesign d = slepian_design(s);
    taps = d.taps;
    j["params"] = Json{{"m", m}, {"k", m / 2}, {"fc", a.fc}, {"degenerate", a.degenerate}};
    metrics["concentration"] = d.concentration;
    metrics["stopband_power"] = 1.0 - d.concentration;
    metrics["eigenvalue"] = d.eigenvalue;
    metrics["eigen_gap"] = d.eigen_gap;
  } else if (a.method == "sinc") {
    const Index m = resolve_length(a, 16);
    if (m % 2 == 0) throw UsageError("windowed-sinc length must be odd");
    const double fsnc = a.fsnc.value_or(a.fc);
    const double feig = a.feig.value_or(a.fc);
    const RealTaps window = slepian_lowpass(SlepianSpec{m / 2, feig, policy});
    taps = windowed_sinc(fsnc, window);
    j["params"] = Json{{"m", m}, {"k", m / 2}, {"fsnc", fsnc}, {"feig", feig}, {"degenerate", a.degenerate}};
    metrics["concentration"] = passband_concentration(taps, kTwoPi * fsnc);
    metrics["stopband_power"] = 1.0 - metrics["concentration"].get<double>();
  } else {
    const Index m = resolve_length(a, 16);
    const double q = a.q.value_or(static_cast<double>(m - 1) / 2.0);
    const WiseSpec s = WiseSpec::from_cycles(m, q, a.flo, a.fhi, a.wpass, a.wstop);
    const WiseDesign d = wise_lowpass(s);
    taps = d.taps;
    j["params"] = Json{{"m", m}, {"q", q}, {"flo", a.flo}, {"fhi", a.fhi}, {"wpass", a.wpass}, {"wstop", a.wstop}};
    metrics["wise"] = d.wise;
  }
  metrics["dc_gain"] = taps.sum();
  metrics["wng"] = taps.energy();
  metrics["group_delay_dc"] = group_delay_dc(taps);
  if (a.format == "csv") {
    emit(taps_csv(taps), a.out, out);
    return 0;
  }
  j["taps"] = taps_json(taps);
  j["metrics"] = metrics;
  emit(dump(j), a.out, out);
  return 0;
}

struct IirArgs {
  Index half_order = 4;
  double fc = 0.3;
  std::string split = "noncausal", format = "json", out;
  Index k = 0, points = 512;
};

Json sections_json(const RationalSystem& sys) {
  Json a = Json::array();
  for (const Biquad& b : sys.sections())
    a.push_back(Json{{"b0", b.b0}, {"b1", b.b1}, {"b2", b.b2}, {"a1", b.a1}, {"a2", b.a2}});
  return a;
}

int design_iir(const IirArgs& a, std::ostream& out) {
  const RationalSystem sys = butterworth_discrete(a.half_order, a.fc);
  const CausalitySplit split = split_causal(sys);
  const RationalSystem& chosen = a.split == "causal" ? split.causal : a.split == "anticausal" ? split.anticausal : sys;
  // Forward passes run the causal factor, backward passes the time-reversed
  // anticausal factor.
  const bool fwd = a.split != "anticausal";
  const bool bwd = a.split != "causal";
  const RationalSystem backward = split.anticausal.mirrored();

  if (a.format == "sos") {
    std::string s = "pass,section,b0,b1,b2,a1,a2\n";
    const auto add = [&](const char* pass, const RationalSystem& r) {
      const auto secs = r.sections();
      for (std::size_t i = 0; i < secs.size(); ++i) {
        const Biquad& b = secs[i];
        s += std::string(pass) + "," + std::to_string(i) + "," + fmt(b.b0) + "," + fmt(b.b1) + "," + fmt(b.b2) + "," +
             fmt(b.a1) + "," + fmt(b.a2) + "\n";
      }
    };
    if (fwd) add("forward", split.causal);
    if (bwd) add("backward", backward);
    emit(s, a.out, out);
    return 0;
  }
  if (a.format == "response") {
    emit(curve_csv(sample_response(chosen, FrequencyGrid::uniform(a.points))), a.out, out);
    return 0;
  }

  Json j;
  j["half_order"] = a.half_order;
  j["fc"] = a.fc;
  j["split"] = a.split;
  j["order"] = chosen.order();
  j["gain"] = detail::complex_pair(chosen.gain());
  j["zeros"] = roots_json(chosen.zeros());
  j["poles"] = roots_json(chosen.poles());
  j["dc_gain"] = std::abs(chosen.evaluate(1.0));
  j["nyquist_gain"] = std::abs(chosen.evaluate(-1.0));
  j["group_delay_dc"] = group_delay_dc(chosen);
  if (a.split == "causal") j["decay_horizon"] = decay_horizon(split.causal);
  j["sections"] = Json{{"forward", fwd ? sections_json(split.causal) : Json::array()},
                       {"backward", bwd ? sections_json(backward) : Json::array()}};
  if (a.k > 0) {
    if (a.split == "causal")
      j["impulse"] = taps_json(impulse_response(split.causal, a.k));
    else if (a.split == "anticausal")
      j["impulse"] = taps_json(noncausal_impulse(CausalitySplit{RationalSystem::identity(), split.anticausal}, a.k));
    else
      j["impulse"] = taps_json(noncausal_impulse(split, a.k));
  }
  emit(dump(j), a.out, out);
  return 0;
}

struct AnalyzeArgs {
  std::string taps, format = "csv", out, split = "noncausal";
  std::optional<Index> half_order;
  double fc = 0.3;
  Index points = 512;
  std::optional<double> flo, fhi;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.taps.empty() == !a.half_order) throw UsageError("give exactly one of --taps or --half-order");
  const FrequencyGrid grid = make_grid(a.points, a.flo, a.fhi);
  Json j;
  const ResponseCurve curve = [&] {
    if (!a.taps.empty()) {
      const CsvSeries s = read_series(a.taps);
      j["source"] = Json{{"taps", a.taps}, {"length", s.values.size()}, {"origin", s.origin}};
      return sample_response(ComplexTaps(s.values, s.origin), grid);
    }
    const RationalSystem sys = butterworth_discrete(*a.half_order, a.fc);
    const CausalitySplit split = split_causal(sys);
    const RationalSystem& chosen = a.split == "causal" ? split.causal : a.split == "anticausal" ? split.anticausal : sys;
    j["source"] = Json{{"half_order", *a.half_order}, {"fc", a.fc}, {"split", a.split}};
    return sample_response(chosen, grid);
  }();
  if (a.format == "csv") {
    emit(curve_csv(curve), a.out, out);
    return 0;
  }
  j["points"] = grid.size();
  // Band power integrates one period, so it is only reported on the full grid.
  j["band_power"] = (a.flo || a.fhi) ? Json(nullptr) : num(band_power(curve));
  j["curve"] = curve_json(curve);
  emit(dump(j), a.out, out);
  return 0;
}

struct SimArgs {
  std::string config, preset, out, dump_tx, dump_rx, dump_points;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool emit_config = false;
};

int simulate(const SimArgs& a, std::ostream& out) {
  if (a.config.empty() == a.preset.empty()) throw UsageError("give exactly one of --config or --preset");
  LinkSpec spec;
  if (!a.config.empty()) {
    const std::string text = slurp(a.config);
    // Accepts a bare link config or a preset file that wraps one.
    const Json probe = Json::parse(text, nullptr, false);
    if (probe.is_object() && probe.contains("link") && probe.contains("expected")) {
      const Preset p = preset_from_json(text);
      spec = *p.link;
    } else {
      spec = link_spec_from_json(text);
    }
  } else {
    const Preset p = preset(a.preset);
    if (!p.link) throw UsageError("preset '" + a.preset + "' has no link configuration");
    spec = *p.link;
  }
  apply_overrides(spec, a.seed, a.threads);
  if (a.emit_config) {
    emit(link_spec_to_json(spec) + "\n", a.out, out);
    return 0;
  }
  const LinkConfig cfg = build_link(spec);
  const LinkReport r = simulate_link(cfg);

  if (!a.dump_tx.empty()) {
    std::string s = "n,value\n";
    for (Index n = 0; n < r.tx_waveform.size(); ++n) s += std::to_string(n) + "," + fmt(r.tx_waveform(n)) + "\n";
    emit(s, a.dump_tx, out);
  }
  if (!a.dump_rx.empty()) {
    std::string s = "n,subchannel,re,im\n";
    for (Index k = -cfg.subchannel_pairs; k <= cfg.subchannel_pairs; ++k) {
      const VectorXcd y = matched_output(cfg, r.rx_waveform, k);
      for (Index n = 0; n < y.size(); ++n)
        s += std::to_string(n) + "," + std::to_string(k) + "," + fmt(y(n).real()) + "," + fmt(y(n).imag()) + "\n";
    }
    emit(s, a.dump_rx, out);
  }
  if (!a.dump_points.empty()) {
    std::string s = "n,subchannel,re,im,tx_symbol,rx_symbol\n";
    const Index mt = cfg.subchannels();
    for (Index i = 0; i < r.rx_points.size(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      s += std::to_string(i / mt) + "," + std::to_string(i % mt - cfg.subchannel_pairs) + "," +
           fmt(r.rx_points(i).real()) + "," + fmt(r.rx_points(i).imag()) + "," + std::to_string(r.tx_symbols[u]) +
           "," + std::to_string(r.rx_symbols[u]) + "\n";
    }
    emit(s, a.dump_points, out);
  }
  emit(link_report_json(spec, cfg, r), a.out, out);
  return 0;
}

struct FastConvArgs {
  std::string kernel, input, out;
  Index block = 0;
};

int fastconv(const FastConvArgs& a, std::ostream& out) {
  const CsvSeries h = read_series(a.kernel);
  const CsvSeries x = read_series(a.input);
  if (a.block < 1) throw UsageError("--block must be >= 1");
  const FastConvResult r = run_fastconv(h.values, x.values, a.block);
  const bool ok = r.max_abs_error < 1e-9;
  // Output index n counts from the input's origin plus the kernel's, so the
  // labels line up with sum_m h[m] x[n - m].
  const Index first = -x.origin - h.origin;
  std::string s = "# verified=" + std::string(ok ? "true" : "false") + " max_abs_error=" + fmt(r.max_abs_error) +
                  " kernel_length=" + std::to_string(r.kernel_length) + " fft_length=" +
                  std::to_string(r.fft_length) + " block_length=" + std::to_string(r.block_length) + "\n";
  s += "n,re,im\n";
  for (Index i = 0; i < r.output.size(); ++i)
    s += std::to_string(first + i) + "," + fmt(r.output(i).real()) + "," + fmt(r.output(i).imag()) + "\n";
  emit(s, a.out, out);
  return ok ? 0 : 1;
}

struct VerifyArgs {
  std::string preset, file, out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool emit_preset = false;
};

int verify(const VerifyArgs& a, std::ostream& out) {
  if (a.preset.empty() == a.file.empty()) throw UsageError("give exactly one of --preset or --file");
  Preset p = a.file.empty() ? preset(a.preset) : preset_from_json(slurp(a.file));
  if (p.link) apply_overrides(*p.link, a.seed, std::nullopt);
  if (a.emit_preset) {
    emit(preset_to_json(p) + "\n", a.out, out);
    return 0;
  }
  const VerifyOutcome v = verify_preset(p, a.threads.value_or(1));

  Json j;
  j["preset"] = v.preset;
  j["description"] = p.description;
  if (p.link) j["seed"] = p.link->seed;
  j["pass"] = v.pass;
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    Json e;
    e["key"] = c.expected.key;
    e["observed"] = num(c.observed);
    if (c.expected.value) e["expected"] = *c.expected.value;
    if (c.expected.tolerance) e["tolerance"] = *c.expected.tolerance;
    if (c.expected.min) e["min"] = *c.expected.min;
    if (c.expected.max) e["max"] = *c.expected.max;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  emit(dump(j), a.out, out);
  return v.pass ? 0 : 1;
}

void error_json(std::ostream& err, const std::string& code, const std::string& message) {
  Json j;
  j["error"] = Json{{"code", code}, {"message", message}};
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-shaping filter design, analysis and modem simulation", "pulseforge"};
  app.require_subcommand(1);

  FirArgs fir;
  auto* c_fir = app.add_subcommand("design-fir", "Design a linear-phase or least-squares FIR low-pass");
  c_fir->add_option("--method", fir.method, "slepian | sinc | wise")->required()->check(CLI::IsMember({"slepian", "sinc", "wise"}));
  c_fir->add_option("--m", fir.m, "Filter length M");
  c_fir->add_option("--k", fir.k, "Half length K, M = 2K + 1");
  c_fir->add_option("--fc", fir.fc, "Cut-off, cycles/sample (Slepian concentration band)");
  c_fir->add_option("--fsnc", fir.fsnc, "Sinc cut-off, cycles/sample");
  c_fir->add_option("--feig", fir.feig, "Slepian window cut-off, cycles/sample");
  c_fir->add_option("--flo", fir.flo, "WISE pass-band edge, cycles/sample");
  c_fir->add_option("--fhi", fir.fhi, "WISE stop-band edge, cycles/sample");
  c_fir->add_option("--wpass", fir.wpass, "WISE pass-band weight");
  c_fir->add_option("--wstop", fir.wstop, "WISE stop-band weight");
  c_fir->add_option("--q", fir.q, "WISE target delay in samples");
  c_fir->add_option("--degenerate", fir.degenerate, "throw | project-dc")->check(CLI::IsMember({"throw", "project-dc"}));
  c_fir->add_option("--format", fir.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  c_fir->add_option("--out", fir.out, "Output path (default stdout)");

  IirArgs iir;
  auto* c_iir = app.add_subcommand("design-iir", "Discretize a Butterworth low-pass and split it by causality");
  c_iir->add_option("--half-order", iir.half_order, "Half order M (filter order 2M)");
  c_iir->add_option("--fc", iir.fc, "Cut-off, cycles/sample");
  c_iir->add_option("--split", iir.split, "causal | anticausal | noncausal")->check(CLI::IsMember({"causal", "anticausal", "noncausal"}));
  c_iir->add_option("--k", iir.k, "Impulse response length (causal) or half length");
  c_iir->add_option("--format", iir.format, "json | sos | response")->check(CLI::IsMember({"json", "sos", "response"}));
  c_iir->add_option("--points", iir.points, "Grid size for --format response");
  c_iir->add_option("--out", iir.out, "Output path (default stdout)");

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "Sample a frequency response");
  c_an->add_option("--taps", an.taps, "Taps CSV (m,value or m,re,im)");
  c_an->add_option("--half-order", an.half_order, "Butterworth half order instead of taps");
  c_an->add_option("--fc", an.fc, "Butterworth cut-off, cycles/sample");
  c_an->add_option("--split", an.split, "causal | anticausal | noncausal")->check(CLI::IsMember({"causal", "anticausal", "noncausal"}));
  c_an->add_option("--points", an.points, "Number of grid points");
  c_an->add_option("--flo", an.flo, "Lower grid edge, cycles/sample");
  c_an->add_option("--fhi", an.fhi, "Upper grid edge, cycles/sample");
  c_an->add_option("--format", an.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  c_an->add_option("--out", an.out, "Output path (default stdout)");

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate-link", "Run the modem link and report resolvability and errors");
  c_sim->add_option("--config", sim.config, "Link config JSON file");
  c_sim->add_option("--preset", sim.preset, "Built-in preset name");
  c_sim->add_option("--seed", sim.seed, "Override the seed");
  c_sim->add_option("--threads", sim.threads, "Monte-Carlo threads")->check(CLI::PositiveNumber);
  c_sim->add_option("--dump-tx", sim.dump_tx, "CSV of the transmitted waveform");
  c_sim->add_option("--dump-rx", sim.dump_rx, "CSV of the full-rate matched-filter outputs");
  c_sim->add_option("--dump-points", sim.dump_points, "CSV of the sampled constellation points");
  c_sim->add_flag("--emit-config", sim.emit_config, "Print the resolved config and exit");
  c_sim->add_option("--out", sim.out, "Report path (default stdout)");

  FastConvArgs fc;
  auto* c_fc = app.add_subcommand("fastconv", "Overlap-add FFT convolution with a direct-convolution check");
  c_fc->add_option("--kernel", fc.kernel, "Kernel CSV")->required();
  c_fc->add_option("--input", fc.input, "Input CSV")->required();
  c_fc->add_option("--block", fc.block, "Requested block length L")->required();
  c_fc->add_option("--out", fc.out, "Output path (default stdout)");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run a preset and compare against its published values");
  c_ver->add_option("--preset", ver.preset, "Preset name: " + [] {
    std::string s;
    for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  c_ver->add_option("--file", ver.file, "Preset JSON file");
  c_ver->add_option("--seed", ver.seed, "Override the seed");
  c_ver->add_option("--threads", ver.threads, "Monte-Carlo threads")->check(CLI::PositiveNumber);
  c_ver->add_flag("--emit-preset", ver.emit_preset, "Print the preset JSON and exit");
  c_ver->add_option("--out", ver.out, "Report path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  }

  try {
    if (c_fir->parsed()) return design_fir(fir, out);
    if (c_iir->parsed()) return design_iir(iir, out);
    if (c_an->parsed()) return analyze(an, out);
    if (c_sim->parsed()) return simulate(sim, out);
    if (c_fc->parsed()) return fastconv(fc, out);
    if (c_ver->parsed()) return verify(ver, out);
  } catch (const UsageError& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  } catch (const Error& e) {
    error_json(err, to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_json(err, "InternalError", e.what());
    return 2;
  }
  error_json(err, "UsageError", "no subcommand");
  return 2;
}

}  // namespace pulseforge::cli

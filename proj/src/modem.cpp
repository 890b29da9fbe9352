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

#include "pulseforge/modem.hpp"

#include "pulseforge/fir_design.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace pulseforge {

namespace {

constexpr std::uint64_t kSymbolStream = 0x8000000000000000ull;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Marsaglia polar method; returns deviates in pairs.
struct PolarGaussian {
  bool has_spare = false;
  double spare = 0.0;

  double operator()(std::mt19937_64& rng) {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u, v, s;
    do {
      u = 2.0 * unit_uniform(rng) - 1.0;
      v = 2.0 * unit_uniform(rng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * f;
    has_spare = true;
    return u * f;
  }
};

// Modulated sub-channel pulses h_k[i] = h[i] e^{i w_k (i - origin)}, k = -K~..K~.
std::vector<VectorXcd> modulated_pulses(const LinkConfig& cfg) {
  std::vector<VectorXcd> out;
  const RealTaps& h = cfg.shaping;
  for (Index k = -cfg.subchannel_pairs; k <= cfg.subchannel_pairs; ++k) {
    VectorXcd v(h.length());
    const double w = cfg.subcarrier(k);
    for (Index i = 0; i < h.length(); ++i) v(i) = h.values(i) * std::polar(1.0, w * static_cast<double>(i - h.origin));
    out.push_back(std::move(v));
  }
  return out;
}

VectorXcd train_from_points(const LinkConfig& cfg, const VectorXcd& points) {
  const Index mt = cfg.subchannels();
  const Index n_pulses = points.size() / mt;
  const Index m_up = cfg.pulse_length();
  const std::vector<VectorXcd> pulses = modulated_pulses(cfg);
  const Index len = cfg.shaping.length();
  VectorXcd train = VectorXcd::Zero(n_pulses * m_up + len - 1);
  for (Index n = 0; n < n_pulses; ++n)
    for (Index j = 0; j < mt; ++j) {
      const cd phi = points(n * mt + j);
      if (phi == cd(0.0)) continue;
      train.segment(n * m_up, len) += phi * pulses[static_cast<std::size_t>(j)];
    }
  return train;
}

VectorXd real_carrier(const VectorXcd& train, double carrier) {
  VectorXd out(train.size());
  const double w = kTwoPi * carrier;
  for (Index n = 0; n < train.size(); ++n) out(n) = (train(n) * std::polar(1.0, w * static_cast<double>(n))).real();
  return out;
}

// Down-sampled, derotated points of every sub-channel before equalization.
VectorXcd raw_points(const LinkConfig& cfg, const VectorXd& rx, Index n_pulses) {
  const Index mt = cfg.subchannels();
  const Index m_up = cfg.pulse_length();
  const Index delay = cfg.sampling_delay();
  if (rx.size() < (n_pulses - 1) * m_up + delay + 1)
    throw Error(ErrorCode::InvalidArgument, "received waveform shorter than the sampling budget");
  const VectorXcd y = filter(cfg.downconv, mix_down(rx, cfg.carrier));
  const Index n_len = (n_pulses - 1) * m_up + delay + 1;

  VectorXcd points(n_pulses * mt);
  for (Index j = 0; j < mt; ++j) {
    const double w = cfg.subcarrier(j - cfg.subchannel_pairs);
    VectorXcd z(n_len);
    for (Index n = 0; n < n_len; ++n) z(n) = y(n) * std::polar(1.0, -w * static_cast<double>(n));
    if (cfg.matched.recursive()) z = filter(*cfg.matched.iir, z);
    for (Index p = 0; p < n_pulses; ++p) {
      const Index s = p * m_up + delay;
      cd acc{0.0, 0.0};
      if (cfg.matched.recursive()) {
        acc = z(s);
      } else {
        const VectorXd& h = cfg.matched.fir.values;
        const Index top = std::min(h.size() - 1, s);
        for (Index i = 0; i <= top; ++i) acc += h(i) * z(s - i);
      }
      const double centre = static_cast<double>(p * m_up + cfg.shaping.origin);
      points(p * mt + j) = acc * std::polar(1.0, w * centre);
    }
  }
  return points;
}

std::vector<cd> calibrate(const LinkConfig& cfg) {
  const Index mt = cfg.subchannels();
  const double target = cpp(cfg.matched.taps(), cfg.shaping);
  std::vector<cd> gains;
  for (Index j = 0; j < mt; ++j) {
    VectorXcd probe = VectorXcd::Zero(mt);
    probe(j) = 1.0;
    const VectorXd burst = real_carrier(train_from_points(cfg, probe), cfg.carrier);
    VectorXd wave = VectorXd::Zero(std::max(burst.size(), cfg.sampling_delay() + 1));
    wave.head(burst.size()) = burst;
    const cd v = raw_points(cfg, wave, 1)(j);
    if (std::abs(v) < 1e-300) throw Error(ErrorCode::Singular, "probe pulse did not reach the receiver");
    gains.push_back(target / v);
  }
  return gains;
}

RealTaps pulse_taps(const PulseSpec& p, Index k_up, double default_cutoff) {
  const Index m = 2 * k_up + 1;
  const double fc = p.cutoff > 0.0 ? p.cutoff : default_cutoff;
  if (p.kind == "slepian") return slepian_lowpass({k_up, fc});
  if (p.kind == "rectangular") return RealTaps::centered(VectorXd::Constant(m, 1.0 / static_cast<double>(m)));
  if (p.kind == "butterworth") {
    // Truncated causal impulse response, mirrored so it ends at m = 0.
    const RationalSystem causal = split_causal(butterworth_discrete(p.half_order, fc)).causal;
    const RealTaps r = impulse_response(causal, m);
    return RealTaps(r.values.reverse(), m - 1);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pulse kind '" + p.kind + "'");
}

}  // namespace

Constellation make_constellation(Index symbols, double rho) {
  if (symbols < 2) throw Error(ErrorCode::BadSymbolCount, "need at least two symbols");
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "pulse magnitude must be positive");
  Constellation c;
  c.symbols = symbols;
  c.phi_delta = kTwoPi / static_cast<double>(symbols);
  c.phi0 = symbols > 2 ? c.phi_delta / 2.0 : c.phi_delta / 4.0;
  c.rho = rho;
  return c;
}

Index decide(const Constellation& c, cd point) {
  if (point == cd(0.0)) return -1;
  Index best = 0;
  double best_angle = kPi + 1.0;
  for (Index k = 0; k < c.symbols; ++k) {
    const double a = std::abs(std::arg(point * std::polar(1.0, -c.phase(k))));
    if (a < best_angle) {
      best_angle = a;
      best = k;
    }
  }
  return best;
}

RealTaps MatchedFilter::taps() const {
  if (!recursive()) return fir;
  return impulse_response(*iir, decay_horizon(*iir) + 1);
}

Index LinkConfig::sampling_delay() const {
  const double q = group_delay_dc(downconv);
  return shaping.origin + matched.origin() + static_cast<Index>(std::lround(q));
}

LinkConfig build_link(const LinkSpec& spec) {
  if (spec.pulse_half_length < 1) throw Error(ErrorCode::InvalidArgument, "pulse half-length must be >= 1");
  if (spec.pulses < 1) throw Error(ErrorCode::InvalidArgument, "pulse count must be >= 1");
  if (spec.subchannel_pairs < 0) throw Error(ErrorCode::InvalidArgument, "sub-channel pairs must be >= 0");
  if (!(spec.carrier > 0.0 && spec.carrier < 0.5)) throw Error(ErrorCode::BadCutoff, "carrier must lie in (0, 0.5)");
  if (spec.snr_db && !std::isfinite(*spec.snr_db)) throw Error(ErrorCode::InvalidArgument, "SNR must be finite");

  LinkConfig cfg;
  cfg.pulse_half_length = spec.pulse_half_length;
  cfg.carrier = spec.carrier;
  cfg.pulses = spec.pulses;
  cfg.snr_db = spec.snr_db;
  cfg.noise = spec.noise;
  cfg.seed = spec.seed;
  cfg.subchannel_pairs = spec.subchannel_pairs;
  cfg.constellation = make_constellation(spec.symbols, spec.rho);
  cfg.equalizer = spec.equalizer;
  cfg.threads = std::max(1u, spec.threads);

  const Index m = cfg.pulse_length();
  const double f_pulse = spec.shaping.cutoff > 0.0 ? spec.shaping.cutoff : 4.0 / static_cast<double>(m);
  cfg.shaping = pulse_taps(spec.shaping, spec.pulse_half_length, f_pulse);
  cfg.subcarrier_spacing = spec.subcarrier_spacing > 0.0 ? spec.subcarrier_spacing : 2.0 * f_pulse;

  double scale = 1.0;
  if (cfg.subchannel_pairs > 0) {
    scale = 1.0 / cfg.shaping.values.norm();
    cfg.shaping.values *= scale;
    (void)subchannel_bank(cfg.shaping, cfg.subchannel_pairs, cfg.subcarrier_spacing, spec.orthogonality_tol);
  }

  if (!spec.receive) {
    cfg.matched.fir = matched_filter(cfg.shaping);
  } else if (spec.receive_recursive) {
    if (spec.receive->kind != "butterworth")
      throw Error(ErrorCode::InvalidArgument, "only a butterworth receive filter can run recursively");
    const double fc = spec.receive->cutoff > 0.0 ? spec.receive->cutoff : f_pulse;
    const RationalSystem causal = split_causal(butterworth_discrete(spec.receive->half_order, fc)).causal;
    cfg.matched.iir = RationalSystem(causal.zeros(), causal.poles(), causal.gain() * scale);
  } else {
    RealTaps rx = pulse_taps(*spec.receive, spec.pulse_half_length, f_pulse);
    if (cfg.subchannel_pairs > 0) rx.values /= rx.values.norm();
    cfg.matched.fir = matched_filter(rx);
  }

  cfg.channel_cutoff = spec.channel_cutoff > 0.0
                           ? spec.channel_cutoff
                           : (cfg.subchannel_pairs > 0
                                  ? static_cast<double>(cfg.subchannels()) * cfg.subcarrier_spacing / 2.0
                                  : f_pulse);
  const double f_down = spec.downconv_factor * cfg.channel_cutoff;
  cfg.downconv = split_causal(butterworth_discrete(spec.downconv_half_order, f_down)).causal;

  switch (cfg.equalizer) {
    case Equalizer::None:
      cfg.equalizer_gains.assign(static_cast<std::size_t>(cfg.subchannels()), cd(1.0));
      break;
    case Equalizer::Narrowband:
      for (Index k = -cfg.subchannel_pairs; k <= cfg.subchannel_pairs; ++k)
        cfg.equalizer_gains.push_back(1.0 / cfg.downconv.response(cfg.subcarrier(k)));
      break;
    case Equalizer::Calibrated:
      cfg.equalizer_gains = calibrate(cfg);
      break;
  }
  return cfg;
}

VectorXcd pulse_train(const LinkConfig& cfg, const std::vector<Index>& symbols) {
  const Index mt = cfg.subchannels();
  if (static_cast<Index>(symbols.size()) % mt != 0)
    throw Error(ErrorCode::InvalidArgument, "need one token per sub-channel per pulse");
  VectorXcd points(static_cast<Index>(symbols.size()));
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] < 0 || symbols[i] >= cfg.constellation.symbols)
      throw Error(ErrorCode::SymbolOutOfRange, "symbol outside [0, K#)");
    points(static_cast<Index>(i)) = cfg.constellation.point(symbols[i]);
  }
  return train_from_points(cfg, points);
}

VectorXd modulate(const LinkConfig& cfg, const std::vector<Index>& symbols) {
  return real_carrier(pulse_train(cfg, symbols), cfg.carrier);
}

VectorXcd mix_down(const VectorXcd& x, double carrier) {
  VectorXcd out(x.size());
  const double w = kTwoPi * carrier;
  for (Index n = 0; n < x.size(); ++n) out(n) = x(n) * std::polar(1.0, -w * static_cast<double>(n));
  return out;
}

VectorXcd mix_down(const VectorXd& x, double carrier) { return mix_down(VectorXcd(x.cast<cd>()), carrier); }

Index required_rx_length(const LinkConfig& cfg) {
  // Room for the last sampling instant, the tail of the full-rate base band
  // and the whole transmitted burst.
  return cfg.pulses * cfg.pulse_length() + std::max(cfg.sampling_delay(), cfg.shaping.length() - 1);
}

Demodulated demodulate(const LinkConfig& cfg, const VectorXd& rx) {
  const Index mt = cfg.subchannels();
  Demodulated out;
  out.points = raw_points(cfg, rx, cfg.pulses);
  out.symbols.resize(static_cast<std::size_t>(out.points.size()));
  for (Index i = 0; i < out.points.size(); ++i) {
    out.points(i) *= cfg.equalizer_gains[static_cast<std::size_t>(i % mt)];
    out.symbols[static_cast<std::size_t>(i)] = decide(cfg.constellation, out.points(i));
  }
  return out;
}

VectorXcd matched_output(const LinkConfig& cfg, const VectorXd& rx, Index subchannel) {
  if (subchannel < -cfg.subchannel_pairs || subchannel > cfg.subchannel_pairs)
    throw Error(ErrorCode::InvalidArgument, "sub-channel index out of range");
  const Index delay = cfg.sampling_delay();
  const Index len = cfg.pulses * cfg.pulse_length();
  if (rx.size() < len + delay) throw Error(ErrorCode::InvalidArgument, "received waveform too short");
  const double w = cfg.subcarrier(subchannel);
  const cd gain = cfg.equalizer_gains[static_cast<std::size_t>(subchannel + cfg.subchannel_pairs)];
  const VectorXcd y = filter(cfg.downconv, mix_down(VectorXd(rx.head(len + delay)), cfg.carrier));
  VectorXcd z(y.size());
  for (Index n = 0; n < y.size(); ++n) z(n) = gain * y(n) * std::polar(1.0, -w * static_cast<double>(n));
  const VectorXcd f = cfg.matched.recursive() ? filter(*cfg.matched.iir, z)
                                              : VectorXcd(convolve(z, cfg.matched.fir.values).head(z.size()));
  VectorXcd out(len);
  for (Index n = 0; n < len; ++n)
    out(n) = f(n + delay) * std::polar(1.0, w * static_cast<double>(n + cfg.shaping.origin));
  return out;
}

double wng(const RealTaps& h_rx) { return h_rx.energy(); }

double wng(const RationalSystem& causal_rx) {
  return impulse_response(causal_rx, decay_horizon(causal_rx) + 1).energy();
}

Resolvability resolvability(double cpp_value, double wng_value, double sigma2, const Constellation& c) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise variance must be positive");
  if (!(wng_value > 0.0)) throw Error(ErrorCode::InvalidArgument, "white-noise gain must be positive");
  Resolvability r;
  r.delta_rho = cpp_value * c.chord();
  r.delta_sigma = std::sqrt(wng_value * sigma2);
  r.delta_sharp = r.delta_rho / (2.0 * r.delta_sigma);
  return r;
}

double bit_rate(Index symbols, Index pulse_length, Index subchannels) {
  if (symbols < 2 || pulse_length < 1 || subchannels < 1) throw Error(ErrorCode::InvalidArgument, "bit rate arguments must be positive");
  return std::log2(static_cast<double>(symbols)) * static_cast<double>(subchannels) / static_cast<double>(pulse_length);
}

double capacity(double f_chn, double snr) {
  if (!(f_chn > 0.0 && f_chn <= 0.5)) throw Error(ErrorCode::BadCutoff, "channel bandwidth must lie in (0, 0.5]");
  if (!(snr >= 0.0)) throw Error(ErrorCode::InvalidArgument, "SNR must be non-negative");
  return f_chn * std::log2(1.0 + snr);
}

Matrix<cd> gram_matrix(const std::vector<ComplexTaps>& bank) {
  const Index n = static_cast<Index>(bank.size());
  Matrix<cd> g(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      g(a, b) = bank[static_cast<std::size_t>(a)].values.dot(bank[static_cast<std::size_t>(b)].values);
  return g;
}

std::vector<ComplexTaps> subchannel_bank(const RealTaps& base, Index pairs, double spacing, double tol) {
  if (pairs < 0) throw Error(ErrorCode::InvalidArgument, "sub-channel pairs must be >= 0");
  const double norm = base.values.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "base pulse has zero energy");
  std::vector<ComplexTaps> bank;
  for (Index k = -pairs; k <= pairs; ++k) {
    const double w = kTwoPi * spacing * static_cast<double>(k);
    VectorXcd v(base.length());
    for (Index i = 0; i < base.length(); ++i)
      v(i) = (base.values(i) / norm) * std::polar(1.0, w * static_cast<double>(i - base.origin));
    bank.emplace_back(std::move(v), base.origin);
  }
  const Matrix<cd> g = gram_matrix(bank);
  for (Index a = 0; a < g.rows(); ++a)
    for (Index b = 0; b < g.cols(); ++b)
      if (a != b && std::abs(g(a, b)) > tol)
        throw Error(ErrorCode::OrthogonalityFailure, "sub-channel pulses overlap beyond tolerance");
  return bank;
}

LinkMetrics analytic_link_metrics(const LinkConfig& cfg) {
  LinkMetrics m;
  const RealTaps rx = cfg.matched.taps();
  m.wng = wng(rx);
  m.cpp = cpp(rx, cfg.shaping);
  m.bit_rate = bit_rate(cfg.constellation.symbols, cfg.pulse_length(), cfg.subchannels());
  if (cfg.snr_db) {
    const double snr = std::pow(10.0, *cfg.snr_db / 10.0);
    const double power = static_cast<double>(cfg.subchannels()) * cfg.constellation.rho * cfg.constellation.rho *
                         cfg.shaping.energy() / (2.0 * static_cast<double>(cfg.pulse_length()));
    m.sigma2 = power / snr;
    m.resolvability = resolvability(m.cpp, m.wng, *m.sigma2, cfg.constellation);
    m.capacity = capacity(std::min(0.5, cfg.channel_cutoff), snr);
  }
  return m;
}

std::vector<Index> draw_symbols(const LinkConfig& cfg) {
  std::mt19937_64 rng(stream_seed(cfg.seed, kSymbolStream));
  std::vector<Index> out(static_cast<std::size_t>(cfg.pulses * cfg.subchannels()));
  const double k = static_cast<double>(cfg.constellation.symbols);
  for (auto& s : out) s = std::min(cfg.constellation.symbols - 1, static_cast<Index>(unit_uniform(rng) * k));
  return out;
}

void add_noise(VectorXd& x, double sigma2, NoiseLaw law, std::uint64_t seed, Index segment, unsigned threads) {
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise variance must be non-negative");
  if (segment < 1) throw Error(ErrorCode::InvalidArgument, "noise segment must be >= 1");
  const Index segments = (x.size() + segment - 1) / segment;
  const double sigma = std::sqrt(sigma2);
  const double half_width = std::sqrt(3.0 * sigma2);

  auto work = [&](Index first, Index last) {
    for (Index j = first; j < last; ++j) {
      std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(j)));
      PolarGaussian gauss;
      const Index end = std::min(x.size(), (j + 1) * segment);
      for (Index n = j * segment; n < end; ++n)
        x(n) += law == NoiseLaw::Gaussian ? sigma * gauss(rng) : half_width * (2.0 * unit_uniform(rng) - 1.0);
    }
  };

  const Index t = std::clamp<Index>(static_cast<Index>(threads), 1, std::max<Index>(1, segments));
  if (t == 1) {
    work(0, segments);
    return;
  }
  std::vector<std::thread> pool;
  for (Index i = 0; i < t; ++i) pool.emplace_back(work, segments * i / t, segments * (i + 1) / t);
  for (auto& th : pool) th.join();
}

LinkReport simulate_link(const LinkConfig& cfg) {
  LinkReport rep;
  rep.analytic = analytic_link_metrics(cfg);
  rep.tx_symbols = draw_symbols(cfg);
  rep.tx_waveform = modulate(cfg, rep.tx_symbols);
  rep.signal_power = rep.tx_waveform.squaredNorm() / static_cast<double>(rep.tx_waveform.size());

  VectorXd rx = VectorXd::Zero(required_rx_length(cfg));
  rx.head(rep.tx_waveform.size()) = rep.tx_waveform;
  if (cfg.snr_db) {
    rep.sigma2 = rep.signal_power / std::pow(10.0, *cfg.snr_db / 10.0);
    add_noise(rx, *rep.sigma2, cfg.noise, cfg.seed, cfg.pulse_length(), cfg.threads);
    rep.measured = resolvability(rep.analytic.cpp, rep.analytic.wng, *rep.sigma2, cfg.constellation);
  }
  rep.rx_waveform = rx;

  const Demodulated d = demodulate(cfg, rx);
  rep.rx_points = d.points;
  rep.rx_symbols = d.symbols;
  rep.decisions = static_cast<Index>(d.symbols.size());

  const Index mt = cfg.subchannels();
  const double cpp_value = rep.analytic.cpp;
  std::vector<SymbolStats> stats;
  for (Index j = 0; j < mt; ++j)
    for (Index k = 0; k < cfg.constellation.symbols; ++k) stats.push_back({j - cfg.subchannel_pairs, k, 0, cd(0.0), 0.0});
  auto slot = [&](Index i) -> SymbolStats& {
    const Index j = i % mt;
    return stats[static_cast<std::size_t>(j * cfg.constellation.symbols + rep.tx_symbols[static_cast<std::size_t>(i)])];
  };
  for (Index i = 0; i < d.points.size(); ++i) {
    const Index tx = rep.tx_symbols[static_cast<std::size_t>(i)];
    if (d.symbols[static_cast<std::size_t>(i)] != tx) ++rep.errors;
    const cd expect = cpp_value * cfg.constellation.point(tx);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(d.points(i) - expect) / (cpp_value * cfg.constellation.rho));
    SymbolStats& s = slot(i);
    ++s.count;
    s.mean += d.points(i);
  }
  for (auto& s : stats)
    if (s.count > 0) s.mean /= static_cast<double>(s.count);
  for (Index i = 0; i < d.points.size(); ++i) {
    SymbolStats& s = slot(i);
    s.dispersion += std::norm(d.points(i) - s.mean);
  }
  for (auto& s : stats)
    if (s.count > 0) s.dispersion = std::sqrt(s.dispersion / static_cast<double>(s.count));
  rep.stats = std::move(stats);
  return rep;
}

}  // namespace pulseforge

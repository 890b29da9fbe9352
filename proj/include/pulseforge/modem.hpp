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
#include "pulseforge/iir_design.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pulseforge {

/// Phase alphabet phi[k] = phi0 + k * phi_delta, scaled by rho.
struct Constellation {
  Index symbols = 4;
  double phi0 = kPi / 4;
  double phi_delta = kPi / 2;
  double rho = 2.0;

  double phase(Index k) const { return phi0 + phi_delta * static_cast<double>(k); }
  cd point(Index k) const { return std::polar(rho, phase(k)); }
  /// Distance between adjacent points, |rho (e^{i phi_delta} - 1)|.
  double chord() const { return std::abs(rho * (std::polar(1.0, phi_delta) - 1.0)); }
};

Constellation make_constellation(Index symbols, double rho);

/// Index of the alphabet phase closest in angle to `point`.
Index decide(const Constellation& c, cd point);

enum class NoiseLaw { Gaussian, Uniform };
enum class Equalizer {
  /// c_k from one noise-free probe pulse per sub-channel: exact gain and
  /// phase correction of the whole tx-rx chain at the sampling instant.
  Calibrated,
  /// c_k = 1 / H_down(w_k).
  Narrowband,
  None,
};

/// Pulse-matched receive filter: FIR taps, or a causal recursive system.
struct MatchedFilter {
  RealTaps fir;
  std::optional<RationalSystem> iir;

  bool recursive() const { return iir.has_value(); }
  /// Index of m = 0 in the filter's storage (0 for a causal recursion).
  Index origin() const { return recursive() ? 0 : fir.origin; }
  /// Impulse response, truncated at the decay horizon for a recursion.
  RealTaps taps() const;
};

/// Fully resolved modem configuration.
struct LinkConfig {
  Index pulse_half_length = 12;     // K_up, M_up = 2 K_up + 1
  double carrier = 0.25;            // f_tx, cycles/sample
  RealTaps shaping;                 // base pulse h_tx
  MatchedFilter matched;            // base h_rx
  RationalSystem downconv;          // causal h_down
  Index pulses = 10;                // N_down
  std::optional<double> snr_db;     // empty: noise-free channel
  NoiseLaw noise = NoiseLaw::Gaussian;
  std::uint64_t seed = 1;
  Index subchannel_pairs = 0;       // K~, M~ = 2 K~ + 1
  double subcarrier_spacing = 0.0;  // cycles/sample between adjacent sub-carriers
  double channel_cutoff = 0.0;      // f_chn, one-sided channel bandwidth
  Constellation constellation;
  Equalizer equalizer = Equalizer::Calibrated;
  std::vector<cd> equalizer_gains;  // one per sub-channel, filled by build_link
  unsigned threads = 1;

  Index pulse_length() const { return 2 * pulse_half_length + 1; }
  Index subchannels() const { return 2 * subchannel_pairs + 1; }
  /// Angular frequency of sub-channel k = -K~..K~.
  double subcarrier(Index k) const { return kTwoPi * subcarrier_spacing * static_cast<double>(k); }
  /// Sample offset from a pulse's first sample to its sampling instant.
  Index sampling_delay() const;
};

/// Pulse shapes understood by build_link.
struct PulseSpec {
  std::string kind = "slepian";  // slepian | rectangular | butterworth
  double cutoff = 0.0;           // cycles/sample; 0 selects 4 / M_up
  Index half_order = 3;          // butterworth only
};

/// User-facing description of a link; build_link turns it into a LinkConfig.
struct LinkSpec {
  std::string name;
  Index pulse_half_length = 12;
  Index symbols = 4;
  double rho = 2.0;
  Index pulses = 10;
  std::optional<double> snr_db;
  NoiseLaw noise = NoiseLaw::Gaussian;
  std::uint64_t seed = 1;
  Index subchannel_pairs = 0;
  double subcarrier_spacing = 0.0;  // 0 selects twice the pulse cut-off
  double carrier = 0.25;
  PulseSpec shaping;
  /// "matched" mirrors h_tx; otherwise a PulseSpec for a mismatched or
  /// recursive receive filter.
  std::optional<PulseSpec> receive;
  bool receive_recursive = false;  // butterworth receive filter run as a causal recursion
  Index downconv_half_order = 4;
  double downconv_factor = 1.5;    // h_down cut-off = factor * f_chn
  double channel_cutoff = 0.0;     // 0 derives f_chn from the pulse and sub-channels
  Equalizer equalizer = Equalizer::Calibrated;
  double orthogonality_tol = 1e-2;
  unsigned threads = 1;
};

LinkConfig build_link(const LinkSpec& spec);

/// Complex base-band pulse train sum_k sum_n phi_k[n] h_k[n - n_down M_up],
/// before the carrier. `symbols` holds one token per sub-channel per pulse,
/// pulse-major (index n * M~ + (k + K~)).
VectorXcd pulse_train(const LinkConfig& cfg, const std::vector<Index>& symbols);

/// Real transmitted waveform Re{pulse_train * e^{i w_tx n}}; length
/// N_down M_up + M_tx - 1.
VectorXd modulate(const LinkConfig& cfg, const std::vector<Index>& symbols);

/// Multiplies by the conjugate carrier e^{-i w_tx n}.
VectorXcd mix_down(const VectorXcd& x, double carrier);
VectorXcd mix_down(const VectorXd& x, double carrier);

struct Demodulated {
  VectorXcd points;            // phi_rx[n_down], pulse-major like the symbols
  std::vector<Index> symbols;  // decisions
};

/// Mixing, h_down, per-sub-channel demixing, equalization, matched filtering,
/// down-sampling and decision. `rx` must extend at least
/// required_rx_length(cfg) samples.
Demodulated demodulate(const LinkConfig& cfg, const VectorXd& rx);

Index required_rx_length(const LinkConfig& cfg);

/// Full-rate equalized, matched-filtered and derotated base band of
/// sub-channel k, advanced by the sampling delay so that sample n_down M_up
/// is the demodulated point of pulse n_down. Length N_down M_up.
VectorXcd matched_output(const LinkConfig& cfg, const VectorXd& rx, Index subchannel);

/// Sum |h[m]|^2; a causal recursion is summed to its decay horizon.
double wng(const RealTaps& h_rx);
double wng(const RationalSystem& causal_rx);

/// Half the zero-lag value of h_rx convolved with h_tx,
/// 1/2 sum_m h_rx[m] h_tx[-m], with m counted from each sequence's origin.
/// Equals 1/2 sum h_rx[m] h_tx[m] for symmetric taps.
template <typename Scalar>
Scalar cpp(const Taps<Scalar>& h_rx, const Taps<Scalar>& h_tx) {
  Scalar acc(0);
  for (Index m = h_rx.first_index(); m <= h_rx.last_index(); ++m) acc += h_rx.at(m) * h_tx.at(-m);
  return acc / real_t<Scalar>(2);
}

/// Receive filter matched to `h`: conj(h[-m]).
template <typename Scalar>
Taps<Scalar> matched_filter(const Taps<Scalar>& h) {
  Vector<Scalar> v = h.values.reverse();
  if constexpr (is_complex_v<Scalar>) v = v.conjugate();
  return Taps<Scalar>(std::move(v), h.length() - 1 - h.origin);
}

struct Resolvability {
  double delta_rho;
  double delta_sigma;
  double delta_sharp;
};

Resolvability resolvability(double cpp_value, double wng_value, double sigma2, const Constellation& c);

/// log2(K#) M~ / M_up bits per sample.
double bit_rate(Index symbols, Index pulse_length, Index subchannels);

/// f_chn log2(1 + snr) bits per sample.
double capacity(double f_chn, double snr);

/// h_k[m] = h[m] e^{i w_k m} for k = -K~..K~ with w_k = 2 pi spacing k. The
/// base is scaled to unit energy first. Throws OrthogonalityFailure when an
/// off-diagonal Gram entry exceeds `tol`.
std::vector<ComplexTaps> subchannel_bank(const RealTaps& base, Index pairs, double spacing, double tol = 1e-2);

/// Gram matrix G[a, b] = sum_m conj(h_a[m]) h_b[m].
Matrix<cd> gram_matrix(const std::vector<ComplexTaps>& bank);

/// Analytic metrics; sigma^2 from the expected mean power of the real
/// waveform, M~ rho^2 E_tx / (2 M_up), divided by the SNR.
struct LinkMetrics {
  double wng = 0.0;
  double cpp = 0.0;
  std::optional<double> sigma2;
  std::optional<Resolvability> resolvability;
  double bit_rate = 0.0;
  std::optional<double> capacity;
};

LinkMetrics analytic_link_metrics(const LinkConfig& cfg);

struct SymbolStats {
  Index subchannel;  // k~
  Index symbol;      // k#
  Index count;
  cd mean;
  double dispersion;  // RMS distance of the points from their mean
};

struct LinkReport {
  LinkMetrics analytic;
  double signal_power = 0.0;              // burst mean of the real waveform
  std::optional<double> sigma2;           // noise variance actually injected
  std::optional<Resolvability> measured;  // resolvability with the injected sigma^2
  Index errors = 0;
  Index decisions = 0;
  double max_deviation = 0.0;             // max |phi_rx - CPP phi_tx| / (CPP rho)
  std::vector<SymbolStats> stats;
  std::vector<Index> tx_symbols;
  std::vector<Index> rx_symbols;
  VectorXcd rx_points;
  VectorXd tx_waveform;
  VectorXd rx_waveform;
};

LinkReport simulate_link(const LinkConfig& cfg);

/// Independent symbol stream for a seed.
std::vector<Index> draw_symbols(const LinkConfig& cfg);

/// Adds white noise of variance sigma2 in place. Each pulse interval of M_up
/// samples draws from its own stream, so the result does not depend on the
/// thread count.
void add_noise(VectorXd& x, double sigma2, NoiseLaw law, std::uint64_t seed, Index segment, unsigned threads);

}  // namespace pulseforge

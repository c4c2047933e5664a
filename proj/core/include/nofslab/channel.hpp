// SPDX-License-Identifier: Apache-2.0
//
// nofslab - link-level laboratory for orthogonal and non-orthogonal multicarrier waveforms
// Copyright (C) 2026 The nofslab authors
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

#include <cstddef>
#include <string>
#include <vector>

#include "nofslab/airframe.hpp"
#include "nofslab/config.hpp"
#include "nofslab/numerics.hpp"

namespace nofs {

struct Tap {
  std::size_t delay = 0;  // samples
  cplx gain;              // nominal complex amplitude
};

/// Tapped-delay-line power-delay profile.
struct PdpSpec {
  std::vector<Tap> taps;

  /// Delays strictly increasing from 0, at least one tap, positive total power.
  void validate() const;
  std::size_t max_delay() const;
  /// Sum of |gain|^2.
  double total_power() const;

  /// h(t) = 0.8765 d(t) - 0.2279 d(t - Ts) + 0.1315 d(t - 4Ts) - 0.4032 e^{j pi/2} d(t - 7Ts).
  static PdpSpec paper_tdl4();
};

/// Tap gains per coherence block; block b covers samples [b * block_len, (b + 1) * block_len).
struct ChannelRealization {
  std::vector<std::vector<cplx>> blocks;
  std::size_t block_len = 0;
  PdpSpec pdp;

  std::size_t num_blocks() const { return blocks.size(); }
};

/// Independent Rayleigh draws per block: tap i ~ CN(0, |nominal_i|^2). With
/// first_block_nominal, block 0 keeps the nominal gains exactly.
ChannelRealization realize_channel(const PdpSpec& pdp, std::size_t num_blocks, std::size_t block_len,
                                   RandomStream& stream, bool first_block_nominal = false);

/// Block-wise linear convolution: each input sample is filtered by the taps of
/// the block it belongs to, and its tail spills into later samples (and later
/// blocks). The output keeps the input length. Throws CoverageError when the
/// realization is shorter than the signal.
FrameSignal apply_channel(const FrameSignal& signal, const ChannelRealization& realization);

/// Frequency response sum_i g_i exp(-j 2 pi d_i bin / n) at one IFFT bin.
cplx tap_response(const PdpSpec& pdp, std::span<const cplx> gains, long bin, std::size_t n);

// ---------------------------------------------------------------------------
// AWGN
// ---------------------------------------------------------------------------

/// What the bit energy in Eb/N0 is referred to.
///  useful: energy of the data-symbol bodies (CP and pilot columns excluded)
///  frame:  whole transmitted frame energy, CP and pilots included
enum class EbAccounting { useful, frame };

EbAccounting parse_eb_accounting(const std::string& name);
std::string to_string(EbAccounting accounting);

/// Per-complex-sample noise variance N0 = E / (payload_bits * 10^(ebn0_db/10)),
/// with E the nominal frame energy under `accounting` (unit-energy values on
/// occupied_bins() bins per symbol, unitary transforms). Zero for +inf dB.
double noise_variance(const WaveformConfig& config, double ebn0_db, EbAccounting accounting = EbAccounting::useful);

/// Adds CN(0, noise_variance(...)) to every sample. ebn0_db = +inf returns the input unchanged.
FrameSignal awgn(const FrameSignal& signal, double ebn0_db, const WaveformConfig& config, RandomStream& stream,
                 EbAccounting accounting = EbAccounting::useful);

// ---------------------------------------------------------------------------
// Mobility
// ---------------------------------------------------------------------------

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct MobilityFigures {
  double coherence_time = 0;  // s
  double doppler = 0;         // Hz
  double velocity = 0;        // m/s
  double carrier = 0;         // Hz
};

/// f_m = 0.423 / T_c.
double coherence_to_doppler(double coherence_time);
/// T_c = 0.423 / f_m.
double doppler_to_coherence(double doppler);
/// v = f_m c / f_RF.
double doppler_to_velocity(double doppler, double carrier, double c = kSpeedOfLight);
/// f_m = v f_RF / c.
double velocity_to_doppler(double velocity, double carrier, double c = kSpeedOfLight);
inline double mps_to_kmh(double v) { return v * 3.6; }

MobilityFigures mobility_from_coherence(double coherence_time, double carrier, double c = kSpeedOfLight);

}  // namespace nofs

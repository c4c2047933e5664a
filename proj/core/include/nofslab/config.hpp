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
#include <string_view>

namespace nofs {

enum class WaveformKind {
  ofdm,
  nofs,        // compressed-spacing direct synthesis; transmit-only PSD demo
  sc_ofdm_1d,  // DFT-spread OFDM
  sc_nofs_1d,  // NOFST-compressed DFT-spread
  sc_ofdm_2d,  // DFT across frequency, IDFT across time
  sc_nofs_2d,  // NOFST across frequency, IDFT across time
};

std::string_view to_string(WaveformKind kind);
/// Accepts "ofdm", "nofs", "sc-ofdm-1d", "sc-nofs-1d", "sc-ofdm-2d", "sc-nofs-2d".
WaveformKind parse_waveform_kind(std::string_view name);

bool uses_shaping(WaveformKind kind);
bool is_two_dimensional(WaveformKind kind);

/// Dimensioning of one frame. Defaults are the 600-of-1024 numerology with a
/// 72-sample cyclic prefix, 140 symbols and a pilot every 7 symbols.
struct WaveformConfig {
  WaveformKind kind = WaveformKind::ofdm;
  std::size_t n = 1024;               // IFFT size
  std::size_t m = 600;                // QAM symbols per multicarrier symbol
  std::size_t q = 492;                // shaped length for SC-NOFS kinds
  std::size_t k = 140;                // multicarrier symbols per frame
  std::size_t cp = 72;                // cyclic prefix, samples
  double subcarrier_spacing = 15e3;   // Hz
  unsigned mod_order = 4;
  std::size_t pilot_block = 7;        // symbols per coherence block, one pilot each
  double nofs_alpha = 0.8;            // frequency compression of the plain NOFS demo

  /// Throws ConfigurationError unless q < m < n, k % pilot_block == 0,
  /// pilot_block >= 1 and the modulation order is supported.
  void validate() const;

  /// Values carried per symbol after precoding: q for SC-NOFS kinds, m otherwise.
  std::size_t occupied_bins() const;
  std::size_t pilot_columns() const { return k / pilot_block; }
  std::size_t data_columns() const { return k - pilot_columns(); }
  bool is_pilot_column(std::size_t col) const { return col % pilot_block == 0; }
  unsigned bits_per_symbol() const;
  /// Payload bits per frame, counted before compression.
  std::size_t payload_bits() const;
  std::size_t samples_per_symbol() const { return n + cp; }
  std::size_t frame_samples() const { return k * (n + cp); }
  double sample_rate() const { return static_cast<double>(n) * subcarrier_spacing; }
  double frame_duration() const;
  /// q / m.
  double compression_ratio() const;
};

}  // namespace nofs

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

#include "nofslab/config.hpp"

#include <array>
#include <utility>

#include "nofslab/error.hpp"

namespace nofs {

namespace {
constexpr std::array<std::pair<WaveformKind, std::string_view>, 6> kNames{{
    {WaveformKind::ofdm, "ofdm"},
    {WaveformKind::nofs, "nofs"},
    {WaveformKind::sc_ofdm_1d, "sc-ofdm-1d"},
    {WaveformKind::sc_nofs_1d, "sc-nofs-1d"},
    {WaveformKind::sc_ofdm_2d, "sc-ofdm-2d"},
    {WaveformKind::sc_nofs_2d, "sc-nofs-2d"},
}};
}  // namespace

std::string_view to_string(WaveformKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

WaveformKind parse_waveform_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw ParameterError("unknown waveform kind '" + std::string(name) + "'");
}

bool uses_shaping(WaveformKind kind) {
  return kind == WaveformKind::sc_nofs_1d || kind == WaveformKind::sc_nofs_2d;
}

bool is_two_dimensional(WaveformKind kind) {
  return kind == WaveformKind::sc_ofdm_2d || kind == WaveformKind::sc_nofs_2d;
}

void WaveformConfig::validate() const {
  if (!(q < m && m < n)) throw ConfigurationError("config: require q < m < n");
  if (q == 0) throw ConfigurationError("config: q must be positive");
  if (k == 0) throw ConfigurationError("config: k must be positive");
  if (pilot_block == 0 || k % pilot_block != 0)
    throw ConfigurationError("config: k must be a positive multiple of pilot_block");
  if (mod_order != 4 && mod_order != 16 && mod_order != 64)
    throw ConfigurationError("config: mod_order must be 4, 16 or 64");
  if (!(subcarrier_spacing > 0.0)) throw ConfigurationError("config: subcarrier spacing must be positive");
  if (!(nofs_alpha > 0.0 && nofs_alpha <= 1.0)) throw ConfigurationError("config: nofs_alpha must be in (0, 1]");
}

std::size_t WaveformConfig::occupied_bins() const { return uses_shaping(kind) ? q : m; }

unsigned WaveformConfig::bits_per_symbol() const {
  switch (mod_order) {
    case 4:
      return 2;
    case 16:
      return 4;
    case 64:
      return 6;
    default:
      throw ConfigurationError("config: mod_order must be 4, 16 or 64");
  }
}

std::size_t WaveformConfig::payload_bits() const { return data_columns() * m * bits_per_symbol(); }

double WaveformConfig::frame_duration() const {
  return static_cast<double>(frame_samples()) / sample_rate();
}

double WaveformConfig::compression_ratio() const {
  return static_cast<double>(q) / static_cast<double>(m);
}

}  // namespace nofs

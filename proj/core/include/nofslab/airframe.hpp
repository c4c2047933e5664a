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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nofslab/config.hpp"
#include "nofslab/numerics.hpp"
#include "nofslab/shaping.hpp"

namespace nofs {

/// m x k QAM grid plus pilot layout. Pilot columns sit at 0, pilot_block,
/// 2 pilot_block, ... and carry `occupied_bins()` known QPSK values; their
/// slots in `data` are zero.
struct ResourceGrid {
  CMatrix data;
  std::vector<bool> pilot_mask;
  CMatrix pilot_values;  // occupied_bins x pilot_columns

  std::size_t columns() const { return pilot_mask.size(); }
  std::vector<std::size_t> data_column_indices() const;
  std::vector<std::size_t> pilot_column_indices() const;
};

/// CP-prefixed time-domain frame, k symbols of n + cp samples.
struct FrameSignal {
  ComplexSeq samples;
  std::size_t n = 0;
  std::size_t cp = 0;
  std::size_t k = 0;
  /// Per symbol, set for pilot columns. Empty means all data.
  std::vector<bool> pilot_symbols;

  std::size_t symbol_length() const { return n + cp; }
  /// Symbol body (CP removed) of symbol `index`.
  std::span<const cplx> body(std::size_t index) const;
};

/// Builds the grid. payload_bits must hold exactly config.payload_bits()
/// bits (FramingError otherwise); pilots are drawn from pilot_stream.
ResourceGrid build_grid(const WaveformConfig& config, std::span<const std::uint8_t> payload_bits,
                        RandomStream& pilot_stream);

/// IFFT bin for precoded value i of `used` values: the first ceil(used/2)
/// go to bins 1..ceil(used/2), the rest to the top of the band; DC stays empty.
std::size_t occupied_bin(std::size_t index, std::size_t used, std::size_t n);
/// Signed frequency (in bins) of value i; negative for the upper half.
long signed_bin(std::size_t index, std::size_t used, std::size_t n);

/// Per-waveform precoding to an occupied_bins() x k matrix. Pilot columns
/// pass through untouched; the 2D kinds spread across data columns only.
/// SC-NOFS kinds require `shaping` (ConfigurationError otherwise).
CMatrix precode(const WaveformConfig& config, const ResourceGrid& grid, const ShapingPair* shaping = nullptr);

/// Row-wise unitary IDFT (spread) or DFT (despread) across the given columns.
void spread_time(CMatrix& matrix, std::span<const std::size_t> columns);
void despread_time(CMatrix& matrix, std::span<const std::size_t> columns);

/// Exact inverse of precode for the orthogonal kinds; returns the m x k data
/// grid with zero pilot columns. SC-NOFS kinds need detection instead
/// (ConfigurationError).
CMatrix unprecode(const WaveformConfig& config, const CMatrix& precoded);

/// Bin mapping, n-point unitary IDFT and CP insertion per column.
FrameSignal map_and_modulate(const WaveformConfig& config, const CMatrix& precoded);

/// Direct compressed-spacing synthesis for the plain NOFS demo:
/// x[t] = (1/sqrt n) sum_i s_i exp(j 2 pi t f_i alpha / n), f_i = signed_bin(i).
/// Pilot columns are synthesised like data. alpha = 1 reproduces OFDM.
FrameSignal nofs_modulate(const WaveformConfig& config, const ResourceGrid& grid);

/// CP removal, n-point DFT and gathering of the occupied bins, per symbol.
CMatrix demap_frame(const WaveformConfig& config, const FrameSignal& frame);

/// Random-payload frame, payload and pilots drawn from (seed, index). The NOFS
/// kind goes through nofs_modulate, the others through precode and
/// map_and_modulate; SC-NOFS kinds need `shaping`.
FrameSignal random_frame(const WaveformConfig& config, std::uint64_t seed, std::uint64_t index,
                         const ShapingPair* shaping = nullptr);

/// Sum of |x|^2.
double energy(std::span<const cplx> x);

/// Interleaved little-endian float64 (re, im) samples, no header.
void write_frame_binary(std::ostream& out, const FrameSignal& frame);
void save_frame_binary(const std::string& path, const FrameSignal& frame);

}  // namespace nofs

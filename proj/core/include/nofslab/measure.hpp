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
#include <span>
#include <vector>

#include "nofslab/airframe.hpp"
#include "nofslab/config.hpp"
#include "nofslab/numerics.hpp"

namespace nofs {

/// Exceedance probabilities P(PAPR > threshold) per threshold.
struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> exceed_prob;
};

/// max|s|^2 / mean|s|^2 in dB for each symbol body (CP excluded).
/// Data symbols only: symbols flagged in pilot_symbols are skipped.
std::vector<double> symbol_papr_db(const FrameSignal& frame);

/// CCDF over all symbols of all frames. Throws ParameterError on empty input.
CcdfCurve papr_ccdf(std::span<const FrameSignal> frames, std::span<const double> thresholds_db);

/// Smallest PAPR value x (dB) with P(PAPR > x) <= prob, from raw per-symbol values.
double papr_at_probability(std::vector<double> papr_db, double prob);

struct PsdEstimate {
  /// Normalized frequency (cycles per sample), -1/2 .. 1/2 - 1/segment_len, DC at index segment_len / 2.
  std::vector<double> freq;
  /// Power relative to the peak bin.
  std::vector<double> power_db;
  /// Absolute density per unit normalized frequency; integrates to the mean power.
  std::vector<double> density;
  std::size_t segment_len = 0;
  std::size_t overlap = 0;
};

/// Averaged Hann-windowed periodogram. Throws ParameterError when the signal is
/// shorter than 2 segment_len or overlap >= segment_len.
PsdEstimate psd_welch(std::span<const cplx> signal, std::size_t segment_len, std::size_t overlap);

/// Width (normalized frequency) between the outermost bins at or above level_db relative to the peak.
double occupied_bandwidth(const PsdEstimate& psd, double level_db = -20.0);

/// Mean of power_db over bins whose |freq| lies in [lo, hi].
double mean_power_db(const PsdEstimate& psd, double lo, double hi);

struct SpectralEfficiency {
  double bits_per_sec_per_hz = 0;
  /// (1 - alpha) / alpha for the compressed kinds, 0 otherwise.
  double gain_vs_reference = 0;
};

/// Payload bits per frame over (frame duration x occupied bandwidth).
SpectralEfficiency spectral_efficiency(const WaveformConfig& config);

/// (1 - alpha) / alpha. Throws ParameterError unless 0 < alpha <= 1.
double compression_gain(double alpha);

}  // namespace nofs

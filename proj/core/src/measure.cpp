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

#include "nofslab/measure.hpp"

#include <algorithm>
#include <cmath>

#include "nofslab/error.hpp"

namespace nofs {

std::vector<double> symbol_papr_db(const FrameSignal& frame) {
  std::vector<double> out;
  out.reserve(frame.k);
  for (std::size_t i = 0; i < frame.k; ++i) {
    if (i < frame.pilot_symbols.size() && frame.pilot_symbols[i]) continue;
    auto body = frame.body(i);
    double peak = 0.0;
    double sum = 0.0;
    for (const cplx& s : body) {
      double p = std::norm(s);
      peak = std::max(peak, p);
      sum += p;
    }
    if (sum <= 0.0) continue;  // silent symbol, PAPR undefined
    out.push_back(10.0 * std::log10(peak / (sum / static_cast<double>(body.size()))));
  }
  return out;
}

CcdfCurve papr_ccdf(std::span<const FrameSignal> frames, std::span<const double> thresholds_db) {
  std::vector<double> all;
  for (const FrameSignal& f : frames) {
    auto v = symbol_papr_db(f);
    all.insert(all.end(), v.begin(), v.end());
  }
  if (all.empty()) throw ParameterError("papr_ccdf: no symbols");
  std::sort(all.begin(), all.end());
  CcdfCurve curve;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  const double total = static_cast<double>(all.size());
  for (double t : thresholds_db) {
    auto above = all.end() - std::upper_bound(all.begin(), all.end(), t);
    curve.exceed_prob.push_back(static_cast<double>(above) / total);
  }
  return curve;
}

double papr_at_probability(std::vector<double> papr_db, double prob) {
  if (papr_db.empty()) throw ParameterError("papr_at_probability: no symbols");
  if (!(prob > 0.0 && prob < 1.0)) throw ParameterError("papr_at_probability: prob must be in (0, 1)");
  std::sort(papr_db.begin(), papr_db.end());
  // At most floor(prob * count) values may lie strictly above the answer.
  auto allowed = static_cast<std::size_t>(std::floor(prob * static_cast<double>(papr_db.size())));
  if (allowed >= papr_db.size()) allowed = papr_db.size() - 1;
  return papr_db[papr_db.size() - 1 - allowed];
}

PsdEstimate psd_welch(std::span<const cplx> signal, std::size_t segment_len, std::size_t overlap) {
  if (segment_len < 2) throw ParameterError("psd_welch: segment_len must be at least 2");
  if (overlap >= segment_len) throw ParameterError("psd_welch: overlap must be smaller than segment_len");
  if (signal.size() < 2 * segment_len) throw ParameterError("psd_welch: signal shorter than two segments");

  std::vector<double> window(segment_len);
  double u = 0.0;
  for (std::size_t i = 0; i < segment_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(segment_len));
    u += window[i] * window[i];
  }
  const Fft& plan = fft_plan(segment_len);
  const std::size_t hop = segment_len - overlap;
  std::vector<double> acc(segment_len, 0.0);
  ComplexSeq seg(segment_len);
  ComplexSeq spec(segment_len);
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment_len <= signal.size(); start += hop) {
    for (std::size_t i = 0; i < segment_len; ++i) seg[i] = signal[start + i] * window[i];
    plan.forward(seg, spec);
    for (std::size_t i = 0; i < segment_len; ++i) acc[i] += std::norm(spec[i]);
    ++count;
  }

  PsdEstimate psd;
  psd.segment_len = segment_len;
  psd.overlap = overlap;
  psd.freq.resize(segment_len);
  psd.density.resize(segment_len);
  psd.power_db.resize(segment_len);
  const double len = static_cast<double>(segment_len);
  const std::size_t half = segment_len / 2;
  double peak = 0.0;
  for (std::size_t j = 0; j < segment_len; ++j) {
    std::size_t bin = (j + segment_len - half) % segment_len;  // fftshift
    psd.freq[j] = (static_cast<double>(j) - static_cast<double>(half)) / len;
    // The unitary transform carries 1/sqrt(L); undo it and the window power.
    psd.density[j] = acc[bin] / static_cast<double>(count) * len / u;
    peak = std::max(peak, psd.density[j]);
  }
  for (std::size_t j = 0; j < segment_len; ++j)
    psd.power_db[j] = peak > 0.0 && psd.density[j] > 0.0 ? 10.0 * std::log10(psd.density[j] / peak) : -400.0;
  return psd;
}

double occupied_bandwidth(const PsdEstimate& psd, double level_db) {
  std::size_t lo = psd.power_db.size();
  std::size_t hi = 0;
  for (std::size_t j = 0; j < psd.power_db.size(); ++j) {
    if (psd.power_db[j] >= level_db) {
      lo = std::min(lo, j);
      hi = j;
    }
  }
  if (lo > hi) return 0.0;
  return static_cast<double>(hi - lo + 1) / static_cast<double>(psd.segment_len);
}

double mean_power_db(const PsdEstimate& psd, double lo, double hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < psd.freq.size(); ++j) {
    double f = std::abs(psd.freq[j]);
    if (f >= lo && f <= hi) {
      sum += psd.density[j];
      ++count;
    }
  }
  if (count == 0) throw ParameterError("mean_power_db: empty frequency range");
  double peak = *std::max_element(psd.density.begin(), psd.density.end());
  return 10.0 * std::log10(sum / static_cast<double>(count) / peak);
}

double compression_gain(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("compression ratio must be in (0, 1]");
  return (1.0 - alpha) / alpha;
}

SpectralEfficiency spectral_efficiency(const WaveformConfig& config) {
  config.validate();
  double occupied = static_cast<double>(config.occupied_bins()) * config.subcarrier_spacing;
  double gain = 0.0;
  if (config.kind == WaveformKind::nofs) {
    occupied = static_cast<double>(config.m) * config.nofs_alpha * config.subcarrier_spacing;
    gain = compression_gain(config.nofs_alpha);
  } else if (uses_shaping(config.kind)) {
    gain = compression_gain(config.compression_ratio());
  }
  SpectralEfficiency se;
  se.bits_per_sec_per_hz = static_cast<double>(config.payload_bits()) / (config.frame_duration() * occupied);
  se.gain_vs_reference = gain;
  return se;
}

}  // namespace nofs

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

#include "nofslab/channel.hpp"

#include <cmath>
#include <limits>

#include "nofslab/error.hpp"

namespace nofs {

void PdpSpec::validate() const {
  if (taps.empty()) throw ParameterError("pdp: at least one tap required");
  if (taps.front().delay != 0) throw ParameterError("pdp: first tap delay must be 0");
  for (std::size_t i = 1; i < taps.size(); ++i)
    if (taps[i].delay <= taps[i - 1].delay) throw ParameterError("pdp: delays must be strictly increasing");
  if (!(total_power() > 0.0)) throw ParameterError("pdp: total power must be positive");
}

std::size_t PdpSpec::max_delay() const { return taps.empty() ? 0 : taps.back().delay; }

double PdpSpec::total_power() const {
  double p = 0.0;
  for (const Tap& t : taps) p += std::norm(t.gain);
  return p;
}

PdpSpec PdpSpec::paper_tdl4() {
  const cplx j90 = std::polar(1.0, kPi / 2.0);
  return PdpSpec{{{0, {0.8765, 0.0}}, {1, {-0.2279, 0.0}}, {4, {0.1315, 0.0}}, {7, -0.4032 * j90}}};
}

ChannelRealization realize_channel(const PdpSpec& pdp, std::size_t num_blocks, std::size_t block_len,
                                   RandomStream& stream, bool first_block_nominal) {
  pdp.validate();
  if (num_blocks == 0) throw ParameterError("realize_channel: need at least one block");
  if (block_len == 0) throw ParameterError("realize_channel: block length must be positive");
  ChannelRealization r;
  r.pdp = pdp;
  r.block_len = block_len;
  r.blocks.resize(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    auto& gains = r.blocks[b];
    gains.resize(pdp.taps.size());
    for (std::size_t i = 0; i < pdp.taps.size(); ++i) {
      const double power = std::norm(pdp.taps[i].gain);
      // Draw even for the nominal block so later blocks do not depend on the flag.
      const double re = stream.gaussian();
      const double im = stream.gaussian();
      if (first_block_nominal && b == 0) {
        gains[i] = pdp.taps[i].gain;
      } else {
        const double s = std::sqrt(power / 2.0);
        gains[i] = {s * re, s * im};
      }
    }
  }
  return r;
}

FrameSignal apply_channel(const FrameSignal& signal, const ChannelRealization& realization) {
  const std::size_t len = signal.samples.size();
  if (realization.block_len == 0 || len > realization.num_blocks() * realization.block_len)
    throw CoverageError("apply_channel: realization covers fewer samples than the signal");
  FrameSignal out = signal;
  std::fill(out.samples.begin(), out.samples.end(), cplx{});
  const auto& taps = realization.pdp.taps;
  for (std::size_t t = 0; t < len; ++t) {
    const cplx x = signal.samples[t];
    const auto& gains = realization.blocks[t / realization.block_len];
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const std::size_t dst = t + taps[i].delay;
      if (dst >= len) break;
      out.samples[dst] += gains[i] * x;
    }
  }
  return out;
}

cplx tap_response(const PdpSpec& pdp, std::span<const cplx> gains, long bin, std::size_t n) {
  cplx h{};
  for (std::size_t i = 0; i < pdp.taps.size(); ++i) {
    const long prod = static_cast<long>(pdp.taps[i].delay) * bin;
    const long reduced = ((prod % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
    h += gains[i] * std::polar(1.0, -2.0 * kPi * static_cast<double>(reduced) / static_cast<double>(n));
  }
  return h;
}

EbAccounting parse_eb_accounting(const std::string& name) {
  if (name == "useful") return EbAccounting::useful;
  if (name == "frame") return EbAccounting::frame;
  throw ParameterError("unknown Eb accounting '" + name + "' (expected useful or frame)");
}

std::string to_string(EbAccounting accounting) { return accounting == EbAccounting::useful ? "useful" : "frame"; }

double noise_variance(const WaveformConfig& config, double ebn0_db, EbAccounting accounting) {
  if (std::isinf(ebn0_db) && ebn0_db > 0) return 0.0;
  if (!std::isfinite(ebn0_db)) throw ParameterError("noise_variance: Eb/N0 must be finite or +inf");
  const double bits = static_cast<double>(config.payload_bits());
  if (!(bits > 0.0)) throw ParameterError("noise_variance: frame carries no payload");
  const double used = static_cast<double>(config.occupied_bins());
  double energy_nominal = static_cast<double>(config.data_columns()) * used;
  if (accounting == EbAccounting::frame) {
    energy_nominal = static_cast<double>(config.k) * used * static_cast<double>(config.n + config.cp) /
                     static_cast<double>(config.n);
  }
  return energy_nominal / (bits * std::pow(10.0, ebn0_db / 10.0));
}

FrameSignal awgn(const FrameSignal& signal, double ebn0_db, const WaveformConfig& config, RandomStream& stream,
                 EbAccounting accounting) {
  const double n0 = noise_variance(config, ebn0_db, accounting);
  FrameSignal out = signal;
  if (n0 == 0.0) return out;
  const ComplexSeq noise = draw_cgaussian(stream, out.samples.size(), n0);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += noise[i];
  return out;
}

double coherence_to_doppler(double coherence_time) {
  if (!(coherence_time > 0.0)) throw ParameterError("coherence time must be positive");
  return 0.423 / coherence_time;
}

double doppler_to_coherence(double doppler) {
  if (!(doppler > 0.0)) throw ParameterError("Doppler frequency must be positive");
  return 0.423 / doppler;
}

double doppler_to_velocity(double doppler, double carrier, double c) {
  if (doppler < 0.0 || !(carrier > 0.0) || !(c > 0.0))
    throw ParameterError("doppler_to_velocity: require doppler >= 0 and positive carrier");
  return doppler * c / carrier;
}

double velocity_to_doppler(double velocity, double carrier, double c) {
  if (velocity < 0.0 || !(carrier > 0.0) || !(c > 0.0))
    throw ParameterError("velocity_to_doppler: require velocity >= 0 and positive carrier");
  return velocity * carrier / c;
}

MobilityFigures mobility_from_coherence(double coherence_time, double carrier, double c) {
  MobilityFigures f;
  f.coherence_time = coherence_time;
  f.doppler = coherence_to_doppler(coherence_time);
  f.carrier = carrier;
  f.velocity = doppler_to_velocity(f.doppler, carrier, c);
  return f;
}

}  // namespace nofs

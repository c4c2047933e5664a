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

#include "nofslab/link.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <thread>

#include "nofslab/airframe.hpp"
#include "nofslab/error.hpp"

namespace nofs {

std::string to_string(EqualizerMode mode) { return mode == EqualizerMode::zf ? "zf" : "mmse"; }
std::string to_string(ChannelModel model) { return model == ChannelModel::awgn ? "awgn" : "tdl"; }
std::string to_string(CsiMode mode) { return mode == CsiMode::perfect ? "perfect" : "ls"; }

EqualizerMode parse_equalizer_mode(const std::string& name) {
  if (name == "zf") return EqualizerMode::zf;
  if (name == "mmse") return EqualizerMode::mmse;
  throw ParseError("unknown equalizer '" + name + "'");
}

ChannelModel parse_channel_model(const std::string& name) {
  if (name == "awgn") return ChannelModel::awgn;
  if (name == "tdl") return ChannelModel::tdl;
  throw ParseError("unknown channel '" + name + "'");
}

CsiMode parse_csi_mode(const std::string& name) {
  if (name == "perfect") return CsiMode::perfect;
  if (name == "ls") return CsiMode::ls;
  throw ParseError("unknown csi mode '" + name + "'");
}

ComplexSeq estimate_channel(std::span<const cplx> received_pilot, std::span<const cplx> pilots) {
  if (received_pilot.size() != pilots.size()) throw DimensionError("estimate_channel: length mismatch");
  ComplexSeq h(pilots.size());
  for (std::size_t b = 0; b < pilots.size(); ++b) h[b] = received_pilot[b] / pilots[b];
  return h;
}

EqualizedColumn equalize(std::span<const cplx> column, std::span<const cplx> gains, EqualizerMode mode,
                         double noise_var) {
  if (column.size() != gains.size()) throw DimensionError("equalize: gains and column differ in length");
  EqualizedColumn out;
  out.values.resize(column.size());
  out.bias.resize(column.size());
  out.noise.resize(column.size());
  for (std::size_t b = 0; b < column.size(); ++b) {
    const cplx h = gains[b];
    const double p = std::norm(h);
    if (mode == EqualizerMode::zf) {
      if (std::abs(h) < kZfFloor) {
        out.values[b] = 0.0;
        out.bias[b] = 0.0;
        out.noise[b] = 0.0;
        ++out.flagged;
        continue;
      }
      out.values[b] = column[b] / h;
      out.bias[b] = 1.0;
      out.noise[b] = noise_var / p;
    } else {
      const double den = p + noise_var;
      if (den <= 0.0) {
        out.values[b] = 0.0;
        out.bias[b] = 0.0;
        out.noise[b] = 0.0;
        continue;
      }
      out.values[b] = column[b] * std::conj(h) / den;
      out.bias[b] = p / den;
      out.noise[b] = p * noise_var / (den * den);
    }
  }
  return out;
}

namespace {

void column_idft(CMatrix& z, Eigen::Index c) {
  const auto len = static_cast<std::size_t>(z.rows());
  ComplexSeq tmp(z.col(c).data(), z.col(c).data() + len);
  fft_plan(len).inverse(tmp, std::span<cplx>(z.col(c).data(), len));
}

void append_bits(BitSeq& bits, std::span<const cplx> symbols, unsigned order) {
  BitSeq b = qam_demap(symbols, order);
  bits.insert(bits.end(), b.begin(), b.end());
}

}  // namespace

BitSeq deprecode_detect(const WaveformConfig& config, const CMatrix& equalized, const DetectorSpec& detector,
                        const ShapingPair* shaping, const Eigen::MatrixXd* bias, double noise_var) {
  config.validate();
  const auto rows = static_cast<Eigen::Index>(config.occupied_bins());
  const auto cols = static_cast<Eigen::Index>(config.data_columns());
  if (equalized.rows() != rows || equalized.cols() != cols)
    throw DimensionError("deprecode_detect: expected occupied_bins x data_columns");
  Eigen::MatrixXd ones;
  if (bias == nullptr) {
    ones = Eigen::MatrixXd::Ones(rows, cols);
    bias = &ones;
  } else if (bias->rows() != rows || bias->cols() != cols) {
    throw DimensionError("deprecode_detect: bias shape mismatch");
  }
  const unsigned order = config.mod_order;
  BitSeq bits;
  bits.reserve(config.payload_bits());
  CMatrix z = equalized;
  std::vector<std::size_t> all_cols(static_cast<std::size_t>(cols));
  for (std::size_t c = 0; c < all_cols.size(); ++c) all_cols[c] = c;
  auto unbias = [](CMatrix& mat, Eigen::Index c, double g) {
    if (g > 1e-12) mat.col(c) /= g;
  };

  switch (config.kind) {
    case WaveformKind::nofs:
      throw ConfigurationError("deprecode_detect: the plain NOFS waveform has no receiver");
    case WaveformKind::ofdm:
      for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r)
          if ((*bias)(r, c) > 1e-12) z(r, c) /= (*bias)(r, c);
        append_bits(bits, std::span<const cplx>(z.col(c).data(), config.m), order);
      }
      return bits;
    case WaveformKind::sc_ofdm_1d:
      for (Eigen::Index c = 0; c < cols; ++c) {
        column_idft(z, c);
        unbias(z, c, bias->col(c).mean());
        append_bits(bits, std::span<const cplx>(z.col(c).data(), config.m), order);
      }
      return bits;
    case WaveformKind::sc_ofdm_2d: {
      despread_time(z, all_cols);
      const double g = bias->mean();
      for (Eigen::Index c = 0; c < cols; ++c) {
        column_idft(z, c);
        unbias(z, c, g);
        append_bits(bits, std::span<const cplx>(z.col(c).data(), config.m), order);
      }
      return bits;
    }
    case WaveformKind::sc_nofs_1d:
    case WaveformKind::sc_nofs_2d:
      break;
  }

  if (shaping == nullptr) throw ConfigurationError("deprecode_detect: SC-NOFS waveforms need a shaping pair");
  if (shaping->m() != config.m || shaping->q() != config.q)
    throw ConfigurationError("deprecode_detect: shaping pair dimensions do not match config");

  const bool two_d = config.kind == WaveformKind::sc_nofs_2d;
  if (two_d) despread_time(z, all_cols);
  std::unique_ptr<NofsDetector> det;
  std::vector<double> gains(config.q);
  if (two_d) {
    for (Eigen::Index r = 0; r < rows; ++r) gains[static_cast<std::size_t>(r)] = bias->row(r).mean();
    det = std::make_unique<NofsDetector>(*shaping, order, gains, noise_var, detector.kind);
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (!two_d) {
      bool same = det != nullptr;
      for (Eigen::Index r = 0; r < rows; ++r) {
        double g = (*bias)(r, c);
        if (gains[static_cast<std::size_t>(r)] != g) same = false;
        gains[static_cast<std::size_t>(r)] = g;
      }
      // Columns of one coherence block share their gains; rebuild only on change.
      if (!same) det = std::make_unique<NofsDetector>(*shaping, order, gains, noise_var, detector.kind);
    }
    ComplexSeq decided = det->detect(std::span<const cplx>(z.col(c).data(), config.q), detector);
    append_bits(bits, decided, order);
  }
  return bits;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double den = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / den;
  const double half = z / den * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

enum StreamPurpose : std::uint64_t { payload_stream = 1, pilot_stream = 2, channel_stream = 3, noise_stream = 4 };

std::uint64_t stream_id(std::uint64_t point, std::uint64_t frame, StreamPurpose purpose) {
  return mix64(mix64(point * 0x9E3779B97F4A7C15ULL + frame) ^ purpose);
}

void check_setup(const LinkSetup& setup) {
  setup.config.validate();
  if (setup.config.kind == WaveformKind::nofs)
    throw ConfigurationError("the plain NOFS waveform is transmit-only and cannot run a link");
  if (setup.ebn0_db.empty()) throw ConfigurationError("empty Eb/N0 grid");
  if (setup.max_bits == 0) throw ConfigurationError("max_bits must be positive");
  if (setup.channel == ChannelModel::tdl) {
    setup.pdp.validate();
    if (setup.pdp.max_delay() > setup.config.cp)
      throw ConfigurationError("channel delay spread exceeds the cyclic prefix");
  }
}

}  // namespace

FrameOutcome simulate_frame(const LinkSetup& setup, const ShapingPair* shaping, double ebn0_db, std::uint64_t point,
                            std::uint64_t frame) {
  const WaveformConfig& cfg = setup.config;
  const std::uint64_t seed = setup.seed;
  RandomStream payload_rng(seed, stream_id(point, frame, payload_stream));
  RandomStream pilot_rng(seed, stream_id(point, frame, pilot_stream));
  RandomStream channel_rng(seed, stream_id(point, frame, channel_stream));
  RandomStream noise_rng(seed, stream_id(point, frame, noise_stream));

  const BitSeq payload = payload_rng.bits(cfg.payload_bits());
  const ResourceGrid grid = build_grid(cfg, payload, pilot_rng);
  const CMatrix precoded = precode(cfg, grid, shaping);
  FrameSignal signal = map_and_modulate(cfg, precoded);

  const std::size_t blocks = cfg.pilot_columns();
  ChannelRealization realization;
  if (setup.channel == ChannelModel::tdl) {
    realization = realize_channel(setup.pdp, blocks, cfg.pilot_block * cfg.samples_per_symbol(), channel_rng,
                                  setup.first_block_nominal);
    signal = apply_channel(signal, realization);
  }
  const double n0 = noise_variance(cfg, ebn0_db, setup.accounting);
  signal = awgn(signal, ebn0_db, cfg, noise_rng, setup.accounting);
  const CMatrix received = demap_frame(cfg, signal);

  const std::size_t used = cfg.occupied_bins();
  const auto rows = static_cast<Eigen::Index>(used);
  CMatrix equalized(rows, static_cast<Eigen::Index>(cfg.data_columns()));
  Eigen::MatrixXd bias(equalized.rows(), equalized.cols());
  double noise_sum = 0.0;
  FrameOutcome outcome;
  Eigen::Index out_col = 0;
  ComplexSeq h(used);
  ComplexSeq column(used);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto pilot_col = static_cast<Eigen::Index>(b * cfg.pilot_block);
    if (setup.csi == CsiMode::ls) {
      ComplexSeq rx(received.col(pilot_col).data(), received.col(pilot_col).data() + used);
      ComplexSeq pilots(grid.pilot_values.col(static_cast<Eigen::Index>(b)).data(),
                        grid.pilot_values.col(static_cast<Eigen::Index>(b)).data() + used);
      h = estimate_channel(rx, pilots);
    } else if (setup.channel == ChannelModel::tdl) {
      for (std::size_t i = 0; i < used; ++i)
        h[i] = tap_response(setup.pdp, realization.blocks[b], signed_bin(i, used, cfg.n), cfg.n);
    } else {
      std::fill(h.begin(), h.end(), cplx(1.0, 0.0));
    }
    for (std::size_t s = 1; s < cfg.pilot_block; ++s) {
      const auto c = pilot_col + static_cast<Eigen::Index>(s);
      std::copy(received.col(c).data(), received.col(c).data() + used, column.begin());
      EqualizedColumn eq = equalize(column, h, setup.equalizer, n0);
      for (Eigen::Index r = 0; r < rows; ++r) {
        equalized(r, out_col) = eq.values[static_cast<std::size_t>(r)];
        bias(r, out_col) = eq.bias[static_cast<std::size_t>(r)];
        noise_sum += eq.noise[static_cast<std::size_t>(r)];
      }
      outcome.flagged_bins += eq.flagged;
      ++out_col;
    }
  }
  const double noise_eff = noise_sum / static_cast<double>(equalized.size());
  const BitSeq detected = deprecode_detect(cfg, equalized, setup.detector, shaping, &bias, noise_eff);
  for (std::size_t i = 0; i < payload.size(); ++i) outcome.bit_errors += payload[i] != detected[i];
  outcome.bits = payload.size();
  return outcome;
}

LinkReport run_link(const LinkSetup& setup, const ShapingPair* shaping) {
  check_setup(setup);
  std::unique_ptr<ShapingPair> owned;
  if (uses_shaping(setup.config.kind) && shaping == nullptr) {
    owned = std::make_unique<ShapingPair>(build_nofst(setup.config.m, setup.config.q));
    shaping = owned.get();
  }
  LinkReport report;
  report.setup = setup;
  report.seeds = {setup.seed};
  report.frame_cost = frame_cost(setup.config);
  const unsigned workers = std::max(1U, setup.threads);

  for (std::size_t p = 0; p < setup.ebn0_db.size(); ++p) {
    LinkPoint point;
    point.ebn0_db = setup.ebn0_db[p];
    std::uint64_t next_frame = 0;
    bool done = false;
    while (!done) {
      // Frames are evaluated in batches but merged in frame order, so the
      // stopping point does not depend on the worker count.
      std::vector<FrameOutcome> batch(workers);
      if (workers == 1) {
        batch[0] = simulate_frame(setup, shaping, point.ebn0_db, p, next_frame);
      } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(workers);
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              batch[w] = simulate_frame(setup, shaping, point.ebn0_db, p, next_frame + w);
            } catch (...) {
              failures[w] = std::current_exception();
            }
          });
        }
        for (auto& t : pool) t.join();
        for (auto& f : failures)
          if (f) std::rethrow_exception(f);
      }
      for (const FrameOutcome& o : batch) {
        point.bit_errors += o.bit_errors;
        point.bits_tested += o.bits;
        ++point.frames;
        ++next_frame;
        if (point.bit_errors >= setup.min_errors || point.bits_tested >= setup.max_bits) {
          done = true;
          break;
        }
      }
    }
    point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.bits_tested);
    std::tie(point.ci_low, point.ci_high) = wilson_interval(point.bit_errors, point.bits_tested);
    report.points.push_back(point);
  }
  return report;
}

LinkReport run_link(const WaveformConfig& config, const DetectorSpec& detector, const std::vector<double>& ebn0_grid,
                    std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed) {
  LinkSetup setup;
  setup.config = config;
  setup.detector = detector;
  setup.ebn0_db = ebn0_grid;
  setup.min_errors = min_errors;
  setup.max_bits = max_bits;
  setup.seed = seed;
  return run_link(setup);
}

}  // namespace nofs

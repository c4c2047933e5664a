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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nofslab/channel.hpp"
#include "nofslab/config.hpp"
#include "nofslab/detect.hpp"
#include "nofslab/numerics.hpp"
#include "nofslab/shaping.hpp"

namespace nofs {

enum class EqualizerMode { zf, mmse };
enum class ChannelModel { awgn, tdl };
/// perfect: the receiver knows the true per-bin response; ls: one-tap LS from the block's pilot column.
enum class CsiMode { perfect, ls };

std::string to_string(EqualizerMode mode);
std::string to_string(ChannelModel model);
std::string to_string(CsiMode mode);
EqualizerMode parse_equalizer_mode(const std::string& name);
ChannelModel parse_channel_model(const std::string& name);
CsiMode parse_csi_mode(const std::string& name);

struct ChannelEstimate {
  std::vector<ComplexSeq> per_block;
};

/// LS per bin: H[b] = received[b] / pilot[b].
ComplexSeq estimate_channel(std::span<const cplx> received_pilot, std::span<const cplx> pilots);

/// Bins with |H| below this are zeroed (and counted) by the ZF equalizer.
inline constexpr double kZfFloor = 1e-6;

struct EqualizedColumn {
  ComplexSeq values;
  /// Effective real gain left on each bin: 1 for ZF, |H|^2 / (|H|^2 + noise_var) for MMSE, 0 for zeroed bins.
  std::vector<double> bias;
  /// Post-equalization noise variance per bin.
  std::vector<double> noise;
  std::size_t flagged = 0;
};

EqualizedColumn equalize(std::span<const cplx> column, std::span<const cplx> gains, EqualizerMode mode,
                         double noise_var);

/// Recovers payload bits from the equalized data columns (occupied_bins x data_columns,
/// in frame order). `bias` has the same shape and holds the residual per-bin gains
/// (all ones when omitted); `noise_var` is the per-bin noise level the SC-NOFS mmse
/// detector regularizes with.
BitSeq deprecode_detect(const WaveformConfig& config, const CMatrix& equalized, const DetectorSpec& detector,
                        const ShapingPair* shaping, const Eigen::MatrixXd* bias = nullptr, double noise_var = 0.0);

/// Everything one campaign needs. Reproducible from these fields alone.
struct LinkSetup {
  WaveformConfig config;
  ChannelModel channel = ChannelModel::awgn;
  PdpSpec pdp = PdpSpec::paper_tdl4();
  CsiMode csi = CsiMode::perfect;
  EqualizerMode equalizer = EqualizerMode::mmse;
  DetectorSpec detector;
  EbAccounting accounting = EbAccounting::useful;
  std::vector<double> ebn0_db;
  std::uint64_t min_errors = 200;
  std::uint64_t max_bits = 10'000'000;
  std::uint64_t seed = 1;
  /// Worker threads per SNR point. The result does not depend on it.
  unsigned threads = 1;
  /// Tdl only: keep the printed tap values in every frame's first block.
  bool first_block_nominal = false;
};

struct LinkPoint {
  double ebn0_db = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_tested = 0;
  std::uint64_t frames = 0;
  double ber = 0;
  double ci_low = 0;
  double ci_high = 1;
};

struct LinkReport {
  LinkSetup setup;
  /// Seeds whose counts are pooled into `points`.
  std::vector<std::uint64_t> seeds;
  std::vector<LinkPoint> points;
  OpCount frame_cost;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

/// Wilson score interval for errors / trials. (0, 1) when trials is 0.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = kWilsonZ95);

struct FrameOutcome {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  std::size_t flagged_bins = 0;
};

/// One frame end to end. Randomness comes from (setup.seed, point, frame) only.
FrameOutcome simulate_frame(const LinkSetup& setup, const ShapingPair* shaping, double ebn0_db, std::uint64_t point,
                            std::uint64_t frame);

/// Simulates frames per SNR point until min_errors bit errors or max_bits bits.
/// SC-NOFS kinds use `shaping` when given, else build_nofst(m, q).
/// Throws ConfigurationError for the plain NOFS kind, an empty grid, or a
/// tapped delay line longer than the cyclic prefix.
LinkReport run_link(const LinkSetup& setup, const ShapingPair* shaping = nullptr);

/// AWGN, perfect CSI shorthand.
LinkReport run_link(const WaveformConfig& config, const DetectorSpec& detector, const std::vector<double>& ebn0_grid,
                    std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed);

/// CSV: header "ebn0_db,bits,errors,ber,ci_low,ci_high,real_mults,real_adds", one row per point.
void write_link_csv(std::ostream& out, const LinkReport& report);

}  // namespace nofs

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

#include <cstdint>

#include "nofslab/shaping.hpp"

namespace nofs {

namespace {
std::uint64_t log2_exact(std::size_t n) {
  std::uint64_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}
}  // namespace

OpCount transform_cost(TransformKind kind, std::size_t size, std::size_t source_len) {
  if (size == 0) throw ParameterError("transform_cost: size must be positive");
  const auto s = static_cast<std::uint64_t>(size);
  switch (kind) {
    case TransformKind::ifft: {
      if (!is_power_of_two(size)) throw ParameterError("transform_cost: IFFT size must be a power of two");
      const std::uint64_t lg = log2_exact(size);
      return {2 * s * lg, 3 * s * lg};
    }
    case TransformKind::dft:
    case TransformKind::idft:
      return {4 * s * s, 4 * s * s - 2 * s};
    case TransformKind::nofst: {
      if (source_len == 0) throw ParameterError("transform_cost: NOFST needs both q and m");
      const auto m = static_cast<std::uint64_t>(source_len);
      return {4 * s * m, 4 * s * m - 2 * s};
    }
  }
  throw ParameterError("transform_cost: unknown transform");
}

OpCount frame_cost(const WaveformConfig& config) {
  const auto k = static_cast<std::uint64_t>(config.k);
  const OpCount ifft = transform_cost(TransformKind::ifft, config.n);
  OpCount total = k * ifft;
  switch (config.kind) {
    case WaveformKind::ofdm:
      break;
    case WaveformKind::sc_ofdm_1d:
      total += k * transform_cost(TransformKind::dft, config.m);
      break;
    case WaveformKind::sc_nofs_1d:
      total += k * transform_cost(TransformKind::nofst, config.q, config.m);
      break;
    case WaveformKind::sc_ofdm_2d:
      total += k * transform_cost(TransformKind::dft, config.m);
      total += static_cast<std::uint64_t>(config.m) * transform_cost(TransformKind::idft, config.k);
      break;
    case WaveformKind::sc_nofs_2d:
      total += k * transform_cost(TransformKind::nofst, config.q, config.m);
      total += static_cast<std::uint64_t>(config.q) * transform_cost(TransformKind::idft, config.k);
      break;
    default:
      throw ParameterError("frame_cost: no cost model for waveform '" + std::string(to_string(config.kind)) + "'");
  }
  return total;
}

}  // namespace nofs

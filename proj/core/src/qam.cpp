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

#include <cmath>

#include "nofslab/error.hpp"
#include "nofslab/numerics.hpp"

namespace nofs {

QamConstellation::QamConstellation(unsigned order) : order_(order) {
  if (order != 4 && order != 16 && order != 64)
    throw ParameterError("qam: order must be 4, 16 or 64");
  bits_per_symbol_ = order == 4 ? 2 : (order == 16 ? 4 : 6);
  const unsigned axis_bits = bits_per_symbol_ / 2;
  levels_ = 1u << axis_bits;
  scale_ = 1.0 / std::sqrt(2.0 * (order - 1.0) / 3.0);

  levels_amp_.resize(levels_);
  level_to_bits_.resize(levels_);
  bits_to_level_.resize(levels_);
  for (unsigned i = 0; i < levels_; ++i) {
    levels_amp_[i] = (static_cast<double>(levels_) - 1.0 - 2.0 * i) * scale_;
    const unsigned gray = i ^ (i >> 1);
    level_to_bits_[i] = gray;
    bits_to_level_[gray] = i;
  }
  points_.resize(order);
  for (unsigned v = 0; v < order; ++v) {
    const unsigned ib = v >> axis_bits;
    const unsigned qb = v & (levels_ - 1);
    points_[v] = {levels_amp_[bits_to_level_[ib]], levels_amp_[bits_to_level_[qb]]};
  }
}

unsigned QamConstellation::nearest_level(double v) const {
  const double t = (static_cast<double>(levels_) - 1.0 - v / scale_) / 2.0;
  if (t <= 0.0) return 0;
  if (t >= levels_ - 1.0) return levels_ - 1;
  const double lower = std::floor(t);
  const auto i0 = static_cast<unsigned>(lower);
  const double frac = t - lower;
  if (frac < 0.5) return i0;
  if (frac > 0.5) return i0 + 1;
  return level_to_bits_[i0] < level_to_bits_[i0 + 1] ? i0 : i0 + 1;
}

cplx QamConstellation::slice(cplx v) const {
  return {levels_amp_[nearest_level(v.real())], levels_amp_[nearest_level(v.imag())]};
}

const QamConstellation& constellation(unsigned order) {
  static const QamConstellation qpsk(4);
  static const QamConstellation qam16(16);
  static const QamConstellation qam64(64);
  switch (order) {
    case 4:
      return qpsk;
    case 16:
      return qam16;
    case 64:
      return qam64;
    default:
      throw ParameterError("qam: order must be 4, 16 or 64");
  }
}

ComplexSeq qam_map(std::span<const std::uint8_t> bits, unsigned order) {
  const QamConstellation& c = constellation(order);
  const unsigned b = c.bits_per_symbol();
  if (bits.size() % b != 0)
    throw FramingError("qam_map: bit count is not a multiple of log2(order)");
  ComplexSeq out(bits.size() / b);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned v = 0;
    for (unsigned i = 0; i < b; ++i) v = (v << 1) | (bits[s * b + i] & 1u);
    out[s] = c.point(v);
  }
  return out;
}

BitSeq qam_demap(std::span<const cplx> symbols, unsigned order) {
  const QamConstellation& c = constellation(order);
  const unsigned b = c.bits_per_symbol();
  const unsigned half = b / 2;
  BitSeq bits(symbols.size() * b);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const unsigned ib = c.axis_bits(c.nearest_level(symbols[s].real()));
    const unsigned qb = c.axis_bits(c.nearest_level(symbols[s].imag()));
    const unsigned v = (ib << half) | qb;
    for (unsigned i = 0; i < b; ++i) bits[s * b + i] = static_cast<std::uint8_t>((v >> (b - 1 - i)) & 1u);
  }
  return bits;
}

}  // namespace nofs

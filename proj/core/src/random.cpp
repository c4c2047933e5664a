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

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix64(seed ^ mix64(stream_id + 0x5851f42d4c957f2dULL))) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * kPi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

BitSeq RandomStream::bits(std::size_t count) {
  BitSeq out(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = engine_();
    out[i] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
  }
  return out;
}

ComplexSeq draw_cgaussian(RandomStream& stream, std::size_t n, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ParameterError("draw_cgaussian: variance must be positive and finite");
  const double sigma = std::sqrt(variance / 2.0);
  ComplexSeq out(n);
  for (auto& z : out) {
    const double re = stream.gaussian();
    const double im = stream.gaussian();
    z = {sigma * re, sigma * im};
  }
  return out;
}

}  // namespace nofs

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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nofs {

using cplx = std::complex<double>;

/// Ordered complex baseband samples. Length is fixed once produced.
using ComplexSeq = std::vector<cplx>;

/// Column-major complex matrix; grids are stored one multicarrier symbol per column.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

using BitSeq = std::vector<std::uint8_t>;

inline constexpr double kPi = 3.14159265358979323846;

bool is_power_of_two(std::size_t n);

// ---------------------------------------------------------------------------
// DFT
// ---------------------------------------------------------------------------

/// Precomputed mixed-radix FFT for one length. Both directions are unitary
/// (scaled by 1/sqrt(L)), so Parseval holds without bookkeeping.
///
/// Lengths factor into radices 4, 2, 3, 5 and whatever primes remain; a large
/// prime factor degrades to a direct O(p^2) butterfly, which is still exact.
class Fft {
 public:
  explicit Fft(std::size_t length);

  std::size_t size() const { return length_; }

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  void run(const cplx* in, cplx* out, const std::vector<cplx>& twiddles) const;
  void work(cplx* out, const cplx* in, std::size_t fstride, std::size_t stage,
            const std::vector<cplx>& twiddles) const;

  std::size_t length_;
  double scale_;
  std::vector<std::size_t> radices_;   // radix per stage
  std::vector<std::size_t> spans_;     // remaining length after each stage
  std::vector<cplx> fwd_twiddles_;
  std::vector<cplx> inv_twiddles_;
};

/// Shared, lazily built plan for a length (thread-safe).
const Fft& fft_plan(std::size_t length);

/// Unitary DFT (inverse = false) or IDFT. Throws DimensionError on empty input.
ComplexSeq dft(std::span<const cplx> x, bool inverse = false);

// ---------------------------------------------------------------------------
// QAM
// ---------------------------------------------------------------------------

/// Square Gray-coded QAM with unit average energy. The first half of each
/// symbol's bits selects the in-phase level, the second half the quadrature
/// level; within an axis bit value 0 maps toward the positive side.
///
///   QPSK: 00 -> (+1+j)/sqrt2, 01 -> (+1-j)/sqrt2, 10 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2
class QamConstellation {
 public:
  explicit QamConstellation(unsigned order);

  unsigned order() const { return order_; }
  unsigned bits_per_symbol() const { return bits_per_symbol_; }
  unsigned levels_per_axis() const { return levels_; }
  /// Distance from the origin to the innermost level along one axis.
  double scale() const { return scale_; }

  /// Point for symbol index v (bits of v read most-significant first).
  cplx point(unsigned index) const { return points_[index]; }
  const std::vector<cplx>& points() const { return points_; }

  /// Axis amplitude for a level index (0 = most positive).
  double level(unsigned idx) const { return levels_amp_[idx]; }
  /// Nearest level index to an axis value; exact ties resolve toward the
  /// level whose Gray bits are lexicographically smaller.
  unsigned nearest_level(double v) const;
  unsigned axis_bits(unsigned level_idx) const { return level_to_bits_[level_idx]; }

  cplx slice(cplx v) const;

 private:
  unsigned order_;
  unsigned bits_per_symbol_;
  unsigned levels_;
  double scale_;
  std::vector<double> levels_amp_;
  std::vector<unsigned> level_to_bits_;
  std::vector<unsigned> bits_to_level_;
  std::vector<cplx> points_;
};

const QamConstellation& constellation(unsigned order);

/// Maps bits to symbols. order must be 4, 16 or 64 (ParameterError otherwise);
/// bits.size() must be a multiple of log2(order) (FramingError otherwise).
ComplexSeq qam_map(std::span<const std::uint8_t> bits, unsigned order);

/// Minimum-distance hard decision back to bits.
BitSeq qam_demap(std::span<const cplx> symbols, unsigned order);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Seeded draw sequence. mt19937_64 output is fixed by the standard; the
/// uniform and Gaussian transforms are implemented here rather than through
/// <random> distributions, whose algorithms differ between standard libraries.
///
/// A stream is single-owner. Concurrent workers each take their own stream_id.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double gaussian();
  BitSeq bits(std::size_t count);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent stream ids.
std::uint64_t mix64(std::uint64_t x);

/// Circularly-symmetric complex Gaussian samples with E|z|^2 = variance.
ComplexSeq draw_cgaussian(RandomStream& stream, std::size_t n, double variance);

}  // namespace nofs

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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nofslab/config.hpp"
#include "nofslab/error.hpp"
#include "nofslab/numerics.hpp"

namespace nofs {

/// Forward compression F (q x m) and reconstruction G (m x q).
///
/// Immutable once built. Pairs produced by build_nofst remember that F is a
/// truncated DFT, which lets apply_forward/apply_adjoint run through an
/// m-point FFT instead of a dense product; refined or imported pairs are dense.
class ShapingPair {
 public:
  ShapingPair(CMatrix forward, CMatrix reconstruction);

  std::size_t m() const { return m_; }
  std::size_t q() const { return q_; }
  double alpha() const { return static_cast<double>(q_) / static_cast<double>(m_); }

  const CMatrix& forward() const { return forward_; }
  const CMatrix& reconstruction() const { return reconstruction_; }

  /// Set when F[k][n] = exp(-j2pi (k + offset) n / m) / sqrt(m).
  std::optional<double> dft_offset() const { return dft_offset_; }

  /// y = F x (x has m entries, y has q).
  void apply_forward(std::span<const cplx> x, std::span<cplx> y) const;
  /// x = F^H y.
  void apply_adjoint(std::span<const cplx> y, std::span<cplx> x) const;
  /// x = G y.
  void apply_reconstruction(std::span<const cplx> y, std::span<cplx> x) const;

 private:
  friend ShapingPair build_nofst(std::size_t m, std::size_t q);

  std::size_t m_;
  std::size_t q_;
  CMatrix forward_;
  CMatrix reconstruction_;
  std::optional<double> dft_offset_;
  std::vector<cplx> ramp_;  // exp(-j pi 2 offset n / m), structured pairs only
};

/// Raised by refine_nofst when the loss rises for 10 consecutive steps.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, ShapingPair best)
      : Error(what), best_(std::make_shared<const ShapingPair>(std::move(best))) {}
  const ShapingPair& best() const { return *best_; }

 private:
  std::shared_ptr<const ShapingPair> best_;
};

/// Half-bin frequency offset used by build_nofst.
inline constexpr double kNofstBinOffset = 0.5;

/// Spectral-truncation NOFST: F keeps the first q rows of a unitary m-point
/// DFT whose frequency grid is shifted by half a bin, G = F^H (F F^H)^-1.
/// The half-bin shift keeps the discarded band free of QPSK-valued
/// sequences (an unshifted truncation at m = 8, q = 6 maps distinct QPSK
/// columns onto the same output). Throws DimensionError unless 0 < q < m.
ShapingPair build_nofst(std::size_t m, std::size_t q);

/// Mean squared reconstruction error ||G F X - X||_F^2 / (m * columns).
double reconstruction_mse(const ShapingPair& pair, const CMatrix& training);

/// Fixed-rate steepest descent on reconstruction_mse over the real and
/// imaginary parts of every F and G entry. Returns the best pair seen, so the
/// training MSE never exceeds that of the input; steps = 0 returns the input.
ShapingPair refine_nofst(const ShapingPair& pair, const CMatrix& training, std::size_t steps, double rate);

struct InterferenceProfile {
  CMatrix residual;        // G F - I
  double max_offdiag = 0;  // max |residual(i, j)|, i != j
  double diag_rmse = 0;    // sqrt(mean |residual(i, i)|^2)
  double frobenius = 0;    // ||residual||_F
};

InterferenceProfile interference_profile(const ShapingPair& pair);

/// Plain-text export: "m", "q", "alpha" header lines, then the F rows and the
/// G rows as whitespace-separated "re im" pairs at 17 significant digits.
void write_shaping_pair(std::ostream& out, const ShapingPair& pair);
ShapingPair read_shaping_pair(std::istream& in);
void save_shaping_pair(const std::string& path, const ShapingPair& pair);
ShapingPair load_shaping_pair(const std::string& path);

// ---------------------------------------------------------------------------
// Operation counts
// ---------------------------------------------------------------------------

struct OpCount {
  std::uint64_t real_mults = 0;
  std::uint64_t real_adds = 0;

  OpCount& operator+=(const OpCount& o) {
    real_mults += o.real_mults;
    real_adds += o.real_adds;
    return *this;
  }
  friend OpCount operator*(std::uint64_t times, const OpCount& c) {
    return {times * c.real_mults, times * c.real_adds};
  }
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

enum class TransformKind { ifft, dft, idft, nofst };

/// IFFT_N: (2N log2 N, 3N log2 N); DFT_M: (4M^2, 4M^2 - 2M);
/// IDFT_K: (4K^2, 4K^2 - 2K); NOFST_{Q,M}: (4QM, 4QM - 2Q).
/// `size` is N, M, K or Q; `source_len` is M and only used by nofst.
OpCount transform_cost(TransformKind kind, std::size_t size, std::size_t source_len = 0);

/// Transmit-side cost of one frame; see docs/formats.md for the per-waveform
/// composition. The plain NOFS demo has no cost model (ParameterError).
OpCount frame_cost(const WaveformConfig& config);

/// Direct complex matrix-vector product written out in real arithmetic, so a
/// counting scalar type can observe every multiplication and addition.
/// `a` is row-major, rows x cols, as interleaved (re, im).
template <class Real>
void direct_complex_matvec(std::size_t rows, std::size_t cols, std::span<const Real> a,
                           std::span<const Real> x, std::span<Real> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    Real acc_re{};
    Real acc_im{};
    for (std::size_t c = 0; c < cols; ++c) {
      const Real& ar = a[2 * (r * cols + c)];
      const Real& ai = a[2 * (r * cols + c) + 1];
      const Real& xr = x[2 * c];
      const Real& xi = x[2 * c + 1];
      Real pr = ar * xr - ai * xi;
      Real pi = ar * xi + ai * xr;
      if (c == 0) {
        acc_re = pr;
        acc_im = pi;
      } else {
        acc_re = acc_re + pr;
        acc_im = acc_im + pi;
      }
    }
    y[2 * r] = acc_re;
    y[2 * r + 1] = acc_im;
  }
}

}  // namespace nofs

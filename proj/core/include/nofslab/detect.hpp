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
#include <string>
#include <vector>

#include "nofslab/numerics.hpp"
#include "nofslab/shaping.hpp"

namespace nofs {

enum class DetectorKind { linear_recon, mmse, iterative, exhaustive_oracle };

std::string to_string(DetectorKind kind);
/// "linear-recon", "mmse", "iterative", "exhaustive-oracle".
DetectorKind parse_detector_kind(const std::string& name);

struct DetectorSpec {
  DetectorKind kind = DetectorKind::iterative;
  /// Soft interference-cancellation rounds (iterative only).
  unsigned iterations = 32;
  /// Least-reliable real components searched jointly after the soft rounds.
  unsigned chase_bits = 12;
  /// Greedy single-component improvement passes after the joint search.
  unsigned search_passes = 4;
};

/// Largest candidate count the exhaustive oracle accepts (order^m).
inline constexpr std::size_t kExhaustiveCap = std::size_t{1} << 20;

/// Detection of x from y = diag(g) F x + w for one shaping pair, gain vector
/// and noise level. Construction does the per-channel precomputation (Gram
/// diagonal, step size, MMSE filter) so columns sharing a channel reuse it.
///
/// The iterative detector:
///  1. projected-gradient soft interference cancellation, x <- clip(x + mu A^H (y - A x)),
///     with clip() the constellation's bounding box;
///  2. hard decision, then a joint search over all 2^L alternatives of the
///     L least reliable real components (distance to the nearest decision threshold);
///  3. greedy single-level moves while the residual ||y - A x|| decreases;
///  4. the result is swapped for the sliced linear reconstruction if that has
///     a smaller residual.
class NofsDetector {
 public:
  NofsDetector(const ShapingPair& pair, unsigned mod_order, std::span<const double> bin_gain, double noise_var,
               DetectorKind kind);

  /// Symbol decisions (constellation points) for one received column of length q.
  ComplexSeq detect(std::span<const cplx> y, const DetectorSpec& spec) const;

  /// ||y - diag(g) F x||^2.
  double residual_energy(std::span<const cplx> y, std::span<const cplx> x) const;

 private:
  void forward(std::span<const cplx> x, std::span<cplx> y) const;   // A x
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const;   // A^H y
  ComplexSeq detect_linear(std::span<const cplx> y) const;
  ComplexSeq detect_mmse(std::span<const cplx> y) const;
  ComplexSeq detect_iterative(std::span<const cplx> y, const DetectorSpec& spec) const;
  ComplexSeq detect_exhaustive(std::span<const cplx> y) const;

  const ShapingPair& pair_;
  const QamConstellation& qam_;
  std::vector<double> gain_;        // q entries
  double noise_var_;
  std::size_t m_;
  std::size_t q_;
  std::vector<double> gram_diag_;   // diag(A^H A)
  std::vector<double> linear_bias_; // real(diag(G A))
  double step_ = 1.0;
  CMatrix mmse_filter_;             // (A^H A + s^2 I)^-1 A^H, mmse only
  std::vector<double> mmse_bias_;
};

}  // namespace nofs

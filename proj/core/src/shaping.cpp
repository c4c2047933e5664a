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

#include "nofslab/shaping.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nofs {

ShapingPair::ShapingPair(CMatrix forward, CMatrix reconstruction)
    : m_(static_cast<std::size_t>(forward.cols())),
      q_(static_cast<std::size_t>(forward.rows())),
      forward_(std::move(forward)),
      reconstruction_(std::move(reconstruction)) {
  if (q_ == 0 || m_ == 0 || q_ > m_) throw DimensionError("shaping pair: require 0 < q <= m");
  if (static_cast<std::size_t>(reconstruction_.rows()) != m_ ||
      static_cast<std::size_t>(reconstruction_.cols()) != q_)
    throw DimensionError("shaping pair: reconstruction must be m x q");
  if (!forward_.allFinite() || !reconstruction_.allFinite())
    throw ParameterError("shaping pair: matrices must be finite");
}

void ShapingPair::apply_forward(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != m_ || y.size() != q_) throw DimensionError("apply_forward: length mismatch");
  if (dft_offset_) {
    std::vector<cplx> tmp(m_);
    for (std::size_t i = 0; i < m_; ++i) tmp[i] = x[i] * ramp_[i];
    fft_plan(m_).forward(tmp, tmp);
    std::copy_n(tmp.begin(), q_, y.begin());
    return;
  }
  Eigen::Map<const CVector> xv(x.data(), static_cast<Eigen::Index>(m_));
  Eigen::Map<CVector> yv(y.data(), static_cast<Eigen::Index>(q_));
  yv.noalias() = forward_ * xv;
}

void ShapingPair::apply_adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  if (x.size() != m_ || y.size() != q_) throw DimensionError("apply_adjoint: length mismatch");
  if (dft_offset_) {
    std::vector<cplx> tmp(m_, cplx{});
    std::copy(y.begin(), y.end(), tmp.begin());
    fft_plan(m_).inverse(tmp, tmp);
    for (std::size_t i = 0; i < m_; ++i) x[i] = tmp[i] * std::conj(ramp_[i]);
    return;
  }
  Eigen::Map<const CVector> yv(y.data(), static_cast<Eigen::Index>(q_));
  Eigen::Map<CVector> xv(x.data(), static_cast<Eigen::Index>(m_));
  xv.noalias() = forward_.adjoint() * yv;
}

void ShapingPair::apply_reconstruction(std::span<const cplx> y, std::span<cplx> x) const {
  if (x.size() != m_ || y.size() != q_) throw DimensionError("apply_reconstruction: length mismatch");
  // Rows of a truncated unitary DFT are orthonormal, so G = F^H exactly.
  if (dft_offset_) {
    apply_adjoint(y, x);
    return;
  }
  Eigen::Map<const CVector> yv(y.data(), static_cast<Eigen::Index>(q_));
  Eigen::Map<CVector> xv(x.data(), static_cast<Eigen::Index>(m_));
  xv.noalias() = reconstruction_ * yv;
}

ShapingPair build_nofst(std::size_t m, std::size_t q) {
  if (q == 0 || q >= m) throw DimensionError("build_nofst: require 0 < q < m");
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  CMatrix f(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      // Reduce the integer part of the phase modulo m before scaling.
      const double cycles = static_cast<double>((r * c) % m) + kNofstBinOffset * static_cast<double>(c);
      f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::polar(norm, -2.0 * kPi * cycles / static_cast<double>(m));
    }
  }
  const CMatrix gram = f * f.adjoint();
  CMatrix g = gram.llt().solve(f).adjoint();

  ShapingPair pair(std::move(f), std::move(g));
  pair.dft_offset_ = kNofstBinOffset;
  pair.ramp_.resize(m);
  for (std::size_t c = 0; c < m; ++c)
    pair.ramp_[c] = std::polar(1.0, -2.0 * kPi * kNofstBinOffset * static_cast<double>(c) / static_cast<double>(m));
  return pair;
}

double reconstruction_mse(const ShapingPair& pair, const CMatrix& training) {
  if (static_cast<std::size_t>(training.rows()) != pair.m() || training.cols() == 0)
    throw DimensionError("reconstruction_mse: training columns must have length m");
  const CMatrix residual = pair.reconstruction() * (pair.forward() * training) - training;
  return residual.squaredNorm() / static_cast<double>(training.size());
}

ShapingPair refine_nofst(const ShapingPair& pair, const CMatrix& training, std::size_t steps, double rate) {
  if (static_cast<std::size_t>(training.rows()) != pair.m() || training.cols() == 0)
    throw DimensionError("refine_nofst: training columns must have length m");
  if (!(rate > 0.0)) throw ParameterError("refine_nofst: rate must be positive");
  if (steps == 0) return pair;

  const double norm = 2.0 / static_cast<double>(training.size());
  CMatrix f = pair.forward();
  CMatrix g = pair.reconstruction();
  double best_loss = reconstruction_mse(pair, training);
  CMatrix best_f = f;
  CMatrix best_g = g;
  double prev_loss = best_loss;
  std::size_t rising = 0;

  for (std::size_t step = 0; step < steps; ++step) {
    const CMatrix fx = f * training;
    const CMatrix residual = g * fx - training;
    const CMatrix grad_g = norm * residual * fx.adjoint();
    const CMatrix grad_f = norm * g.adjoint() * residual * training.adjoint();
    g -= rate * grad_g;
    f -= rate * grad_f;

    const double loss = (g * (f * training) - training).squaredNorm() / static_cast<double>(training.size());
    if (!std::isfinite(loss)) {
      throw OptimizationError("refine_nofst: loss became non-finite", ShapingPair(best_f, best_g));
    }
    if (loss < best_loss) {
      best_loss = loss;
      best_f = f;
      best_g = g;
    }
    rising = loss > prev_loss ? rising + 1 : 0;
    if (rising >= 10)
      throw OptimizationError("refine_nofst: loss increased for 10 consecutive steps", ShapingPair(best_f, best_g));
    prev_loss = loss;
  }
  if (best_loss >= reconstruction_mse(pair, training)) return pair;
  return ShapingPair(std::move(best_f), std::move(best_g));
}

InterferenceProfile interference_profile(const ShapingPair& pair) {
  InterferenceProfile p;
  const auto m = static_cast<Eigen::Index>(pair.m());
  p.residual = pair.reconstruction() * pair.forward() - CMatrix::Identity(m, m);
  double diag_sq = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double a = std::abs(p.residual(i, j));
      if (i == j)
        diag_sq += a * a;
      else
        p.max_offdiag = std::max(p.max_offdiag, a);
    }
  }
  p.diag_rmse = std::sqrt(diag_sq / static_cast<double>(m));
  p.frobenius = p.residual.norm();
  return p;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

void write_matrix(std::ostream& out, const CMatrix& a) {
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (c) out << ' ';
      out << a(r, c).real() << ' ' << a(r, c).imag();
    }
    out << '\n';
  }
}

CMatrix read_matrix(std::istream& in, std::size_t rows, std::size_t cols, const char* what) {
  CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) throw ParseError(std::string("shaping pair: truncated ") + what + " matrix");
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re, im};
    }
  }
  return a;
}

void expect_token(std::istream& in, const std::string& token) {
  std::string got;
  if (!(in >> got) || got != token) throw ParseError("shaping pair: expected '" + token + "', got '" + got + "'");
}

}  // namespace

void write_shaping_pair(std::ostream& out, const ShapingPair& pair) {
  const auto old_precision = out.precision(17);
  out << "# nofslab shaping pair v1\n";
  out << "m " << pair.m() << '\n';
  out << "q " << pair.q() << '\n';
  out << "alpha " << pair.alpha() << '\n';
  out << "forward\n";
  write_matrix(out, pair.forward());
  out << "reconstruction\n";
  write_matrix(out, pair.reconstruction());
  out.precision(old_precision);
}

ShapingPair read_shaping_pair(std::istream& in) {
  std::string line;
  // Skip leading comment lines.
  while (in.peek() == '#') std::getline(in, line);
  std::size_t m = 0;
  std::size_t q = 0;
  double alpha = 0.0;
  expect_token(in, "m");
  if (!(in >> m)) throw ParseError("shaping pair: bad m");
  expect_token(in, "q");
  if (!(in >> q)) throw ParseError("shaping pair: bad q");
  expect_token(in, "alpha");
  if (!(in >> alpha)) throw ParseError("shaping pair: bad alpha");
  if (m == 0 || q == 0 || q > m) throw ParseError("shaping pair: require 0 < q <= m");
  if (std::abs(alpha - static_cast<double>(q) / static_cast<double>(m)) > 1e-12)
    throw ParseError("shaping pair: alpha does not equal q/m");
  expect_token(in, "forward");
  CMatrix f = read_matrix(in, q, m, "forward");
  expect_token(in, "reconstruction");
  CMatrix g = read_matrix(in, m, q, "reconstruction");
  return ShapingPair(std::move(f), std::move(g));
}

void save_shaping_pair(const std::string& path, const ShapingPair& pair) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_shaping_pair(out, pair);
  if (!out) throw Error("write to '" + path + "' failed");
}

ShapingPair load_shaping_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_shaping_pair(in);
}

}  // namespace nofs

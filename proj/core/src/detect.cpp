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

#include "nofslab/detect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "nofslab/airframe.hpp"
#include "nofslab/error.hpp"

namespace nofs {

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::linear_recon: return "linear-recon";
    case DetectorKind::mmse: return "mmse";
    case DetectorKind::iterative: return "iterative";
    case DetectorKind::exhaustive_oracle: return "exhaustive-oracle";
  }
  return "?";
}

DetectorKind parse_detector_kind(const std::string& name) {
  if (name == "linear-recon") return DetectorKind::linear_recon;
  if (name == "mmse") return DetectorKind::mmse;
  if (name == "iterative") return DetectorKind::iterative;
  if (name == "exhaustive-oracle") return DetectorKind::exhaustive_oracle;
  throw ParseError("unknown detector '" + name + "'");
}

namespace {

// Real component u of an m-symbol vector: symbol u / 2, axis u % 2 (0 = I, 1 = Q).
double component(const ComplexSeq& x, std::size_t u) { return u % 2 == 0 ? x[u / 2].real() : x[u / 2].imag(); }

void add_component(ComplexSeq& x, std::size_t u, double delta) {
  if (u % 2 == 0)
    x[u / 2] += cplx(delta, 0.0);
  else
    x[u / 2] += cplx(0.0, delta);
}

ComplexSeq slice_all(const QamConstellation& qam, std::span<const cplx> v) {
  ComplexSeq out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = qam.slice(v[i]);
  return out;
}

}  // namespace

NofsDetector::NofsDetector(const ShapingPair& pair, unsigned mod_order, std::span<const double> bin_gain,
                           double noise_var, DetectorKind kind)
    : pair_(pair), qam_(constellation(mod_order)), noise_var_(noise_var), m_(pair.m()), q_(pair.q()) {
  if (bin_gain.empty()) {
    gain_.assign(q_, 1.0);
  } else if (bin_gain.size() != q_) {
    throw DimensionError("detector gain vector must have q entries");
  } else {
    gain_.assign(bin_gain.begin(), bin_gain.end());
  }
  if (!(noise_var_ >= 0.0) || !std::isfinite(noise_var_)) throw ParameterError("noise variance must be finite and >= 0");

  const CMatrix& f = pair_.forward();
  const CMatrix& g = pair_.reconstruction();
  gram_diag_.assign(m_, 0.0);
  linear_bias_.assign(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double d = 0.0;
    cplx b = 0.0;
    for (std::size_t k = 0; k < q_; ++k) {
      d += gain_[k] * gain_[k] * std::norm(f(k, i));
      b += g(i, k) * gain_[k] * f(k, i);
    }
    gram_diag_[i] = d;
    linear_bias_[i] = b.real();
  }

  double gmax = 0.0;
  for (double v : gain_) gmax = std::max(gmax, v * v);
  if (pair_.dft_offset()) {
    // Orthonormal rows: the largest eigenvalue of F^H D^2 F is at most max g^2.
    step_ = gmax > 0.0 ? 1.0 / gmax : 0.0;
  } else {
    ComplexSeq v(m_, cplx(1.0, 0.0));
    ComplexSeq t(q_);
    double lambda = 0.0;
    for (int it = 0; it < 60; ++it) {
      double nv = std::sqrt(energy(v));
      if (nv == 0.0) break;
      for (auto& e : v) e /= nv;
      forward(v, t);
      adjoint(t, v);
      lambda = std::sqrt(energy(v));
    }
    step_ = lambda > 0.0 ? 1.0 / (1.02 * lambda) : 0.0;
  }

  if (kind == DetectorKind::mmse) {
    CMatrix a = f;
    for (std::size_t k = 0; k < q_; ++k) a.row(k) *= gain_[k];
    CMatrix gram = a.adjoint() * a;
    gram.diagonal().array() += std::max(noise_var_, 1e-10);
    mmse_filter_ = gram.ldlt().solve(a.adjoint());
    CMatrix wa = mmse_filter_ * a;
    mmse_bias_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) mmse_bias_[i] = wa(i, i).real();
  }
  if (kind == DetectorKind::exhaustive_oracle) {
    double log2_count = static_cast<double>(m_) * std::log2(static_cast<double>(mod_order));
    if (log2_count > std::log2(static_cast<double>(kExhaustiveCap)))
      throw CapacityError("exhaustive detection needs mod_order^m <= 2^20 candidates");
  }
}

void NofsDetector::forward(std::span<const cplx> x, std::span<cplx> y) const {
  pair_.apply_forward(x, y);
  for (std::size_t k = 0; k < q_; ++k) y[k] *= gain_[k];
}

void NofsDetector::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  ComplexSeq t(y.begin(), y.end());
  for (std::size_t k = 0; k < q_; ++k) t[k] *= gain_[k];
  pair_.apply_adjoint(t, x);
}

double NofsDetector::residual_energy(std::span<const cplx> y, std::span<const cplx> x) const {
  ComplexSeq ax(q_);
  forward(x, ax);
  double e = 0.0;
  for (std::size_t k = 0; k < q_; ++k) e += std::norm(y[k] - ax[k]);
  return e;
}

ComplexSeq NofsDetector::detect(std::span<const cplx> y, const DetectorSpec& spec) const {
  if (y.size() != q_) throw DimensionError("received column must have q entries");
  switch (spec.kind) {
    case DetectorKind::linear_recon: return detect_linear(y);
    case DetectorKind::mmse:
      if (mmse_filter_.size() == 0) throw ConfigurationError("detector was not prepared for mmse");
      return detect_mmse(y);
    case DetectorKind::iterative: return detect_iterative(y, spec);
    case DetectorKind::exhaustive_oracle: return detect_exhaustive(y);
  }
  return {};
}

ComplexSeq NofsDetector::detect_linear(std::span<const cplx> y) const {
  ComplexSeq x(m_);
  pair_.apply_reconstruction(y, x);
  for (std::size_t i = 0; i < m_; ++i)
    if (linear_bias_[i] > 1e-12) x[i] /= linear_bias_[i];
  return slice_all(qam_, x);
}

ComplexSeq NofsDetector::detect_mmse(std::span<const cplx> y) const {
  Eigen::Map<const CVector> yv(y.data(), static_cast<Eigen::Index>(q_));
  CVector xv = mmse_filter_ * yv;
  ComplexSeq x(m_);
  for (std::size_t i = 0; i < m_; ++i) x[i] = mmse_bias_[i] > 1e-12 ? xv(i) / mmse_bias_[i] : xv(i);
  return slice_all(qam_, x);
}

ComplexSeq NofsDetector::detect_exhaustive(std::span<const cplx> y) const {
  const unsigned order = qam_.order();
  const CMatrix& f = pair_.forward();
  // Columns of A = diag(g) F.
  std::vector<ComplexSeq> cols(m_, ComplexSeq(q_));
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t k = 0; k < q_; ++k) cols[i][k] = gain_[k] * f(k, i);

  std::vector<unsigned> digit(m_, 0);
  ComplexSeq x(m_, qam_.point(0));
  ComplexSeq r(y.begin(), y.end());
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t k = 0; k < q_; ++k) r[k] -= cols[i][k] * x[i];

  double best = energy(r);
  ComplexSeq best_x = x;
  // Odometer walk; each step touches the changed digits only.
  for (;;) {
    std::size_t pos = 0;
    while (pos < m_) {
      unsigned next = digit[pos] + 1 == order ? 0 : digit[pos] + 1;
      cplx delta = qam_.point(next) - qam_.point(digit[pos]);
      for (std::size_t k = 0; k < q_; ++k) r[k] -= cols[pos][k] * delta;
      x[pos] = qam_.point(next);
      digit[pos] = next;
      if (next != 0) break;
      ++pos;
    }
    if (pos == m_) break;
    double e = energy(r);
    if (e < best) {
      best = e;
      best_x = x;
    }
  }
  return best_x;
}

ComplexSeq NofsDetector::detect_iterative(std::span<const cplx> y, const DetectorSpec& spec) const {
  const unsigned levels = qam_.levels_per_axis();
  const double bound = qam_.level(0);
  auto clip = [bound](double v) { return std::clamp(v, -bound, bound); };

  // 1. Box-constrained soft cancellation.
  ComplexSeq z(m_);
  ComplexSeq ax(q_);
  ComplexSeq corr(m_);
  adjoint(y, z);
  double mean_diag = std::accumulate(gram_diag_.begin(), gram_diag_.end(), 0.0) / static_cast<double>(m_);
  for (auto& v : z) {
    v = mean_diag > 0.0 ? v / mean_diag : cplx{};
    v = cplx(clip(v.real()), clip(v.imag()));
  }
  for (unsigned it = 0; it < spec.iterations; ++it) {
    forward(z, ax);
    for (std::size_t k = 0; k < q_; ++k) ax[k] = y[k] - ax[k];
    adjoint(ax, corr);
    for (std::size_t i = 0; i < m_; ++i) {
      cplx v = z[i] + step_ * corr[i];
      z[i] = cplx(clip(v.real()), clip(v.imag()));
    }
  }

  // 2. Hard decision with per-component reliability and runner-up level.
  const std::size_t comps = 2 * m_;
  std::vector<unsigned> level(comps);
  std::vector<unsigned> alt(comps);
  std::vector<double> reliability(comps);
  for (std::size_t u = 0; u < comps; ++u) {
    double v = component(z, u);
    unsigned l = qam_.nearest_level(v);
    level[u] = l;
    double best = std::numeric_limits<double>::infinity();
    unsigned runner = l;
    for (int d : {-1, 1}) {
      long nb = static_cast<long>(l) + d;
      if (nb < 0 || nb >= static_cast<long>(levels)) continue;
      double mid = 0.5 * (qam_.level(l) + qam_.level(static_cast<unsigned>(nb)));
      double dist = std::abs(v - mid);
      if (dist < best) {
        best = dist;
        runner = static_cast<unsigned>(nb);
      }
    }
    alt[u] = runner;
    reliability[u] = best;
  }
  ComplexSeq x(m_);
  for (std::size_t i = 0; i < m_; ++i) x[i] = cplx(qam_.level(level[2 * i]), qam_.level(level[2 * i + 1]));

  auto refresh_correlation = [&]() {
    forward(x, ax);
    for (std::size_t k = 0; k < q_; ++k) ax[k] = y[k] - ax[k];
    adjoint(ax, corr);
  };
  refresh_correlation();

  // 3. Joint search over the least reliable components.
  const std::size_t depth = std::min<std::size_t>(spec.chase_bits, comps);
  if (depth > 0) {
    std::vector<std::size_t> order(comps);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(depth), order.end(),
                      [&](std::size_t a, std::size_t b) { return reliability[a] < reliability[b]; });
    std::vector<std::size_t> set(order.begin(), order.begin() + static_cast<long>(depth));
    const CMatrix& f = pair_.forward();
    std::vector<double> delta(depth);
    std::vector<double> lin(depth);
    std::vector<double> gram(depth * depth);
    for (std::size_t a = 0; a < depth; ++a) {
      std::size_t u = set[a];
      delta[a] = qam_.level(alt[u]) - qam_.level(level[u]);
      lin[a] = u % 2 == 0 ? corr[u / 2].real() : corr[u / 2].imag();
      for (std::size_t b = 0; b < depth; ++b) {
        std::size_t v = set[b];
        cplx c = 0.0;
        for (std::size_t k = 0; k < q_; ++k)
          c += gain_[k] * gain_[k] * std::conj(f(k, u / 2)) * f(k, v / 2);
        double val;
        if (u % 2 == v % 2)
          val = c.real();
        else if (u % 2 == 0)
          val = -c.imag();
        else
          val = c.imag();
        gram[a * depth + b] = val;
      }
    }
    std::vector<double> h(depth, 0.0);
    std::vector<bool> in(depth, false);
    double cost = 0.0;
    double best_cost = 0.0;
    std::uint64_t best_mask = 0;
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << depth;
    for (std::uint64_t step = 1; step < total; ++step) {
      auto a = static_cast<std::size_t>(std::countr_zero(step));
      double da = delta[a];
      if (!in[a]) {
        cost += 2.0 * da * h[a] + da * da * gram[a * depth + a] - 2.0 * da * lin[a];
        for (std::size_t b = 0; b < depth; ++b) h[b] += da * gram[a * depth + b];
      } else {
        cost += -2.0 * da * h[a] + da * da * gram[a * depth + a] + 2.0 * da * lin[a];
        for (std::size_t b = 0; b < depth; ++b) h[b] -= da * gram[a * depth + b];
      }
      in[a] = !in[a];
      mask ^= std::uint64_t{1} << a;
      if (cost < best_cost - 1e-12) {
        best_cost = cost;
        best_mask = mask;
      }
    }
    if (best_mask != 0) {
      for (std::size_t a = 0; a < depth; ++a) {
        if (!(best_mask >> a & 1U)) continue;
        std::size_t u = set[a];
        add_component(x, u, delta[a]);
        level[u] = alt[u];
      }
      refresh_correlation();
    }
  }

  // 4. Greedy single-level moves.
  ComplexSeq basis(m_);
  ComplexSeq column(q_);
  for (unsigned pass = 0; pass < spec.search_passes; ++pass) {
    bool changed = false;
    for (std::size_t u = 0; u < comps; ++u) {
      std::size_t i = u / 2;
      double c = u % 2 == 0 ? corr[i].real() : corr[i].imag();
      double best = -1e-12;
      long pick = -1;
      for (int d : {-1, 1}) {
        long nb = static_cast<long>(level[u]) + d;
        if (nb < 0 || nb >= static_cast<long>(levels)) continue;
        double dl = qam_.level(static_cast<unsigned>(nb)) - qam_.level(level[u]);
        double gain = dl * dl * gram_diag_[i] - 2.0 * dl * c;
        if (gain < best) {
          best = gain;
          pick = nb;
        }
      }
      if (pick < 0) continue;
      double dl = qam_.level(static_cast<unsigned>(pick)) - qam_.level(level[u]);
      level[u] = static_cast<unsigned>(pick);
      add_component(x, u, dl);
      // corr -= dl * s * A^H A e_i with s = 1 or j.
      std::fill(basis.begin(), basis.end(), cplx{});
      basis[i] = u % 2 == 0 ? cplx(dl, 0.0) : cplx(0.0, dl);
      forward(basis, column);
      ComplexSeq back(m_);
      adjoint(column, back);
      for (std::size_t j = 0; j < m_; ++j) corr[j] -= back[j];
      changed = true;
    }
    if (!changed) break;
  }

  // 5. Keep whichever of this and the linear decision fits y better.
  ComplexSeq lin_x = detect_linear(y);
  if (residual_energy(y, lin_x) < residual_energy(y, x)) return lin_x;
  return x;
}

}  // namespace nofs

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
#include <map>
#include <memory>
#include <mutex>

#include "nofslab/error.hpp"
#include "nofslab/numerics.hpp"

namespace nofs {

namespace {

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> radices;
  while (n % 4 == 0) {
    radices.push_back(4);
    n /= 4;
  }
  for (std::size_t p : {2u, 3u, 5u}) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  for (std::size_t p = 7; p * p <= n; p += 2) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  if (n > 1) radices.push_back(n);
  return radices;
}

}  // namespace

Fft::Fft(std::size_t length) : length_(length) {
  if (length == 0) throw DimensionError("fft: length must be at least 1");
  scale_ = 1.0 / std::sqrt(static_cast<double>(length));
  radices_ = factorize(length);
  if (radices_.empty()) radices_.push_back(1);
  std::size_t remaining = length;
  for (std::size_t p : radices_) {
    remaining /= p;
    spans_.push_back(remaining);
  }
  fwd_twiddles_.resize(length);
  inv_twiddles_.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double phase = -2.0 * kPi * static_cast<double>(i) / static_cast<double>(length);
    fwd_twiddles_[i] = std::polar(1.0, phase);
    inv_twiddles_[i] = std::conj(fwd_twiddles_[i]);
  }
}

void Fft::work(cplx* out, const cplx* in, std::size_t fstride, std::size_t stage,
               const std::vector<cplx>& tw) const {
  const std::size_t p = radices_[stage];
  const std::size_t m = spans_[stage];
  cplx* const begin = out;
  cplx* const end = out + p * m;

  if (m == 1) {
    for (cplx* o = out; o != end; ++o) {
      *o = *in;
      in += fstride;
    }
  } else {
    for (cplx* o = out; o != end; o += m) {
      work(o, in, fstride * p, stage + 1, tw);
      in += fstride;
    }
  }

  const bool inverse = &tw == &inv_twiddles_;
  switch (p) {
    case 2:
      for (std::size_t u = 0; u < m; ++u) {
        const cplx t = begin[u + m] * tw[u * fstride];
        begin[u + m] = begin[u] - t;
        begin[u] += t;
      }
      return;
    case 3: {
      const double sin3 = tw[fstride * m].imag();
      for (std::size_t u = 0; u < m; ++u) {
        const cplx s1 = begin[u + m] * tw[u * fstride];
        const cplx s2 = begin[u + 2 * m] * tw[2 * u * fstride];
        const cplx s3 = s1 + s2;
        const cplx s0 = (s1 - s2) * sin3;
        const cplx mid = begin[u] - 0.5 * s3;
        begin[u] += s3;
        begin[u + m] = mid + cplx(-s0.imag(), s0.real());
        begin[u + 2 * m] = mid + cplx(s0.imag(), -s0.real());
      }
      return;
    }
    case 4:
      for (std::size_t u = 0; u < m; ++u) {
        const cplx s0 = begin[u + m] * tw[u * fstride];
        const cplx s1 = begin[u + 2 * m] * tw[2 * u * fstride];
        const cplx s2 = begin[u + 3 * m] * tw[3 * u * fstride];
        const cplx s5 = begin[u] - s1;
        const cplx a = begin[u] + s1;
        const cplx s3 = s0 + s2;
        const cplx s4 = s0 - s2;
        // -j s4 forward, +j s4 inverse
        const cplx rot = inverse ? cplx(-s4.imag(), s4.real()) : cplx(s4.imag(), -s4.real());
        begin[u] = a + s3;
        begin[u + 2 * m] = a - s3;
        begin[u + m] = s5 + rot;
        begin[u + 3 * m] = s5 - rot;
      }
      return;
    case 5: {
      const cplx ya = tw[fstride * m];
      const cplx yb = tw[2 * fstride * m];
      for (std::size_t u = 0; u < m; ++u) {
        const cplx s0 = begin[u];
        const cplx s1 = begin[u + m] * tw[u * fstride];
        const cplx s2 = begin[u + 2 * m] * tw[2 * u * fstride];
        const cplx s3 = begin[u + 3 * m] * tw[3 * u * fstride];
        const cplx s4 = begin[u + 4 * m] * tw[4 * u * fstride];
        const cplx s7 = s1 + s4;
        const cplx s10 = s1 - s4;
        const cplx s8 = s2 + s3;
        const cplx s9 = s2 - s3;
        begin[u] = s0 + s7 + s8;
        const cplx s5 = s0 + s7 * ya.real() + s8 * yb.real();
        const cplx s6(s10.imag() * ya.imag() + s9.imag() * yb.imag(), -s10.real() * ya.imag() - s9.real() * yb.imag());
        begin[u + m] = s5 - s6;
        begin[u + 4 * m] = s5 + s6;
        const cplx s11 = s0 + s7 * yb.real() + s8 * ya.real();
        const cplx s12(-s10.imag() * yb.imag() + s9.imag() * ya.imag(), s10.real() * yb.imag() - s9.real() * ya.imag());
        begin[u + 2 * m] = s11 + s12;
        begin[u + 3 * m] = s11 - s12;
      }
      return;
    }
    default:
      break;
  }

  // Generic radix-p butterfly over the p sub-transforms of length m.
  cplx scratch[64];
  std::vector<cplx> heap_scratch;
  cplx* s = scratch;
  if (p > 64) {
    heap_scratch.resize(p);
    s = heap_scratch.data();
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q1 = 0, k = u; q1 < p; ++q1, k += m) s[q1] = begin[k];
    for (std::size_t q1 = 0, k = u; q1 < p; ++q1, k += m) {
      const std::size_t step = (fstride * k) % length_;
      std::size_t twidx = 0;
      cplx acc = s[0];
      for (std::size_t q = 1; q < p; ++q) {
        twidx += step;
        if (twidx >= length_) twidx -= length_;
        acc += s[q] * tw[twidx];
      }
      begin[k] = acc;
    }
  }
}

void Fft::run(const cplx* in, cplx* out, const std::vector<cplx>& tw) const {
  if (length_ == 1) {
    out[0] = in[0];
    return;
  }
  if (in == out) {
    std::vector<cplx> copy(in, in + length_);
    work(out, copy.data(), 1, 0, tw);
  } else {
    work(out, in, 1, 0, tw);
  }
  for (std::size_t i = 0; i < length_; ++i) out[i] *= scale_;
}

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != length_ || out.size() != length_)
    throw DimensionError("fft: buffer length does not match plan");
  run(in.data(), out.data(), fwd_twiddles_);
}

void Fft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != length_ || out.size() != length_)
    throw DimensionError("fft: buffer length does not match plan");
  run(in.data(), out.data(), inv_twiddles_);
}

const Fft& fft_plan(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Fft>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[length];
  if (!slot) slot = std::make_unique<Fft>(length);
  return *slot;
}

ComplexSeq dft(std::span<const cplx> x, bool inverse) {
  if (x.empty()) throw DimensionError("dft: empty input");
  ComplexSeq out(x.size());
  const Fft& plan = fft_plan(x.size());
  if (inverse)
    plan.inverse(x, out);
  else
    plan.forward(x, out);
  return out;
}

}  // namespace nofs

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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <sstream>

#include "nofslab/airframe.hpp"
#include "nofslab/error.hpp"
#include "nofslab/measure.hpp"
#include "oracles.hpp"

using namespace nofs;

namespace {

WaveformConfig toy(WaveformKind kind) {
  WaveformConfig c;
  c.kind = kind;
  c.n = 16;
  c.m = 8;
  c.q = 6;
  c.k = 10;
  c.cp = 4;
  c.pilot_block = 5;
  return c;
}

ResourceGrid random_grid(const WaveformConfig& c, std::uint64_t seed, BitSeq* bits_out = nullptr) {
  RandomStream payload(seed, 1);
  RandomStream pilots(seed, 2);
  BitSeq bits = payload.bits(c.payload_bits());
  if (bits_out) *bits_out = bits;
  return build_grid(c, bits, pilots);
}

double energy_of(const CMatrix& m) { return m.squaredNorm(); }

}  // namespace

TEST_CASE("grid layout", "[grid]") {
  WaveformConfig c;
  CHECK(c.pilot_columns() == 20);
  CHECK(c.data_columns() == 120);
  auto g = random_grid(c, 1);
  CHECK(g.pilot_column_indices().size() == 20);
  CHECK(g.data_column_indices().size() == 120);
  for (std::size_t i = 0; i < 20; ++i) CHECK(g.pilot_column_indices()[i] == 7 * i);
  for (Eigen::Index p = 0; p < g.pilot_values.cols(); ++p)
    for (Eigen::Index r = 0; r < g.pilot_values.rows(); ++r) CHECK(std::abs(std::norm(g.pilot_values(r, p)) - 1.0) < 1e-12);
  for (std::size_t col : g.pilot_column_indices()) CHECK(g.data.col(static_cast<Eigen::Index>(col)).isZero());

  c.k = 14;
  CHECK(c.payload_bits() == 14400);

  c.pilot_block = 1;
  c.k = 14;
  CHECK(c.payload_bits() == 0);
  auto all_pilots = random_grid(c, 1);
  CHECK(all_pilots.data_column_indices().empty());

  WaveformConfig d;
  RandomStream rs(1, 1);
  BitSeq short_payload(100, 0);
  CHECK_THROWS_AS(build_grid(d, short_payload, rs), FramingError);
}

TEST_CASE("config validation", "[grid]") {
  WaveformConfig c;
  CHECK_NOTHROW(c.validate());
  c.k = 141;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = WaveformConfig{};
  c.m = 1024;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = WaveformConfig{};
  c.q = 600;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = WaveformConfig{};
  c.mod_order = 8;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = WaveformConfig{};
  CHECK(c.sample_rate() == 1024 * 15e3);
  CHECK(c.compression_ratio() == 0.82);
}

TEST_CASE("bin mapping is centred with an empty DC bin", "[grid]") {
  const std::size_t n = 1024, used = 600;
  std::vector<bool> taken(n, false);
  for (std::size_t i = 0; i < used; ++i) {
    auto b = occupied_bin(i, used, n);
    REQUIRE(b < n);
    CHECK_FALSE(taken[b]);
    taken[b] = true;
    long s = signed_bin(i, used, n);
    CHECK(static_cast<std::size_t>((s + static_cast<long>(n)) % static_cast<long>(n)) == b);
  }
  CHECK_FALSE(taken[0]);
  CHECK(taken[1]);
  CHECK(taken[300]);
  CHECK_FALSE(taken[301]);
  CHECK(taken[n - 300]);
  CHECK(taken[n - 1]);
  CHECK(signed_bin(0, used, n) == 1);
  CHECK(signed_bin(used - 1, used, n) == -1);
}

TEST_CASE("precoding pipelines", "[precode]") {
  SECTION("OFDM is a pass-through") {
    auto c = toy(WaveformKind::ofdm);
    auto g = random_grid(c, 3);
    CMatrix p = precode(c, g);
    for (std::size_t col : g.data_column_indices())
      CHECK(p.col(static_cast<Eigen::Index>(col)) == g.data.col(static_cast<Eigen::Index>(col)));
    Eigen::Index pi = 0;
    for (std::size_t col : g.pilot_column_indices()) CHECK(p.col(static_cast<Eigen::Index>(col)) == g.pilot_values.col(pi++));
  }
  SECTION("SC-OFDM 1D applies an m-point DFT per data column") {
    auto c = toy(WaveformKind::sc_ofdm_1d);
    auto g = random_grid(c, 4);
    CMatrix p = precode(c, g);
    for (std::size_t col : g.data_column_indices()) {
      const auto ci = static_cast<Eigen::Index>(col);
      ComplexSeq x(g.data.col(ci).data(), g.data.col(ci).data() + 8);
      auto ref = oracle::naive_dft(x);
      for (int r = 0; r < 8; ++r) CHECK(std::abs(p(r, ci) - ref[static_cast<std::size_t>(r)]) < 1e-12);
    }
  }
  SECTION("2D kinds invert exactly") {
    for (auto kind : {WaveformKind::sc_ofdm_2d, WaveformKind::sc_ofdm_1d, WaveformKind::ofdm}) {
      auto c = toy(kind);  // k' = 8
      auto g = random_grid(c, 5);
      CMatrix back = unprecode(c, precode(c, g));
      CHECK((back - g.data).cwiseAbs().maxCoeff() < 1e-10);
    }
    auto c = toy(WaveformKind::sc_ofdm_2d);
    c.k = 5;  // one pilot, k' = 4
    auto g = random_grid(c, 6);
    CHECK((unprecode(c, precode(c, g)) - g.data).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("SC-NOFS kinds need a shaping pair") {
    auto c = toy(WaveformKind::sc_nofs_1d);
    auto g = random_grid(c, 7);
    CHECK_THROWS_AS(precode(c, g), ConfigurationError);
    auto wrong = build_nofst(8, 5);
    CHECK_THROWS_AS(precode(c, g, &wrong), ConfigurationError);
    auto pair = build_nofst(8, 6);
    CMatrix p = precode(c, g, &pair);
    CHECK(p.rows() == 6);
    CHECK_THROWS_AS(unprecode(c, p), ConfigurationError);
    for (std::size_t col : g.data_column_indices()) {
      const auto ci = static_cast<Eigen::Index>(col);
      CVector ref = pair.forward() * g.data.col(ci);
      CHECK((p.col(ci) - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("modulation", "[modulate]") {
  SECTION("zero input gives silence") {
    auto c = toy(WaveformKind::ofdm);
    c.k = 5;
    CMatrix zero = CMatrix::Zero(8, 5);
    auto f = map_and_modulate(c, zero);
    CHECK(f.samples.size() == 5 * 20);
    for (auto v : f.samples) CHECK(v == cplx(0.0, 0.0));
  }
  SECTION("cyclic prefix is the body tail") {
    WaveformConfig c;
    c.kind = WaveformKind::sc_ofdm_1d;
    c.k = 14;
    auto g = random_grid(c, 8);
    auto f = map_and_modulate(c, precode(c, g));
    for (std::size_t s = 0; s < c.k; ++s) {
      const cplx* sym = f.samples.data() + s * f.symbol_length();
      for (std::size_t i = 0; i < c.cp; ++i) CHECK(sym[i] == sym[c.n + i]);
    }
  }
  SECTION("single occupied value gives a sampled exponential") {
    WaveformConfig c;
    c.kind = WaveformKind::ofdm;
    c.n = 16;
    c.m = 4;
    c.q = 3;
    c.k = 1;
    c.cp = 3;
    c.pilot_block = 1;
    for (std::size_t i = 0; i < 4; ++i) {
      CMatrix p = CMatrix::Zero(4, 1);
      const cplx v(0.3, -0.7);
      p(static_cast<Eigen::Index>(i), 0) = v;
      auto f = map_and_modulate(c, p);
      const double bin = static_cast<double>(occupied_bin(i, 4, 16));
      for (std::size_t t = 0; t < f.samples.size(); ++t) {
        const double time = static_cast<double>(t) - 3.0;  // CP samples sit at negative time
        cplx expected = v / 4.0 * std::polar(1.0, 2.0 * kPi * bin * time / 16.0);
        CHECK(std::abs(f.samples[t] - expected) < 1e-12);
      }
    }
  }
  SECTION("too many values for the IFFT") {
    WaveformConfig c;
    CMatrix p = CMatrix::Zero(1024, 1);
    CHECK_THROWS_AS(map_and_modulate(c, p), MappingError);
  }
}

TEST_CASE("demapping inverts modulation", "[modulate]") {
  WaveformConfig c;
  c.kind = WaveformKind::ofdm;
  c.k = 14;
  auto g = random_grid(c, 9);
  CMatrix p = precode(c, g);
  auto f = map_and_modulate(c, p);
  CHECK((demap_frame(c, f) - p).cwiseAbs().maxCoeff() < 1e-10);

  // A cyclic delay of d samples inside each symbol is a per-bin phase ramp.
  for (std::size_t d : {1u, 7u, 72u}) {
    FrameSignal shifted = f;
    for (std::size_t s = 0; s < c.k; ++s) {
      const cplx* src = f.samples.data() + s * f.symbol_length();
      cplx* dst = shifted.samples.data() + s * f.symbol_length();
      // Delay the CP-extended symbol by d: body sample t comes from t - d, which reaches into the CP.
      for (std::size_t t = 0; t < c.n; ++t) dst[c.cp + t] = src[c.cp + t - d];
    }
    CMatrix y = demap_frame(c, shifted);
    double worst = 0;
    for (std::size_t i = 0; i < c.m; ++i) {
      const double bin = static_cast<double>(signed_bin(i, c.m, c.n));
      cplx ramp = std::polar(1.0, -2.0 * kPi * static_cast<double>(d) * bin / static_cast<double>(c.n));
      for (Eigen::Index s = 0; s < p.cols(); ++s)
        worst = std::max(worst, std::abs(y(static_cast<Eigen::Index>(i), s) - ramp * p(static_cast<Eigen::Index>(i), s)));
    }
    CHECK(worst < 1e-9);
  }

  FrameSignal cut = f;
  cut.samples.pop_back();
  CHECK_THROWS_AS(demap_frame(c, cut), FramingError);
}

TEST_CASE("noise-free loopback for the orthogonal kinds", "[modulate]") {
  for (auto kind : {WaveformKind::ofdm, WaveformKind::sc_ofdm_1d, WaveformKind::sc_ofdm_2d}) {
    WaveformConfig c;
    c.kind = kind;
    c.k = 28;
    BitSeq bits;
    auto g = random_grid(c, 10, &bits);
    auto f = map_and_modulate(c, precode(c, g));
    CMatrix data = unprecode(c, demap_frame(c, f));
    BitSeq out;
    for (std::size_t col : g.data_column_indices()) {
      const auto ci = static_cast<Eigen::Index>(col);
      ComplexSeq s(data.col(ci).data(), data.col(ci).data() + c.m);
      auto b = qam_demap(s, c.mod_order);
      out.insert(out.end(), b.begin(), b.end());
    }
    CHECK(out == bits);
  }
}

TEST_CASE("frame energy accounting", "[modulate]") {
  // Per frame the CP adds the energy of each body tail; cp/n of the body only on average.
  for (auto kind : {WaveformKind::ofdm, WaveformKind::sc_ofdm_1d, WaveformKind::sc_nofs_1d, WaveformKind::sc_nofs_2d}) {
    WaveformConfig c;
    c.kind = kind;
    c.k = 14;
    auto pair = build_nofst(c.m, c.q);
    double frame_total = 0, grid_total = 0;
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto g = random_grid(c, 11 + s);
      CMatrix p = precode(c, g, &pair);
      auto f = map_and_modulate(c, p);
      double tails = 0;
      for (std::size_t sym = 0; sym < c.k; ++sym)
        tails += energy(std::span<const cplx>(f.samples).subspan(sym * f.symbol_length() + c.n, c.cp));
      const double e = energy(f.samples);
      CHECK(std::abs(e - energy_of(p) - tails) / e < 1e-9);
      frame_total += e;
      grid_total += energy_of(p);
      if (uses_shaping(kind)) CHECK(p.rows() == 492);
    }
    const double expected = grid_total * (1.0 + double(c.cp) / double(c.n));
    CHECK(std::abs(frame_total - expected) / expected < 2e-3);
  }
  // Occupied bins: 492 of 600.
  WaveformConfig a, b;
  a.kind = WaveformKind::sc_nofs_1d;
  b.kind = WaveformKind::sc_ofdm_1d;
  CHECK(double(a.occupied_bins()) / double(b.occupied_bins()) == 0.82);
}

TEST_CASE("plain NOFS synthesis", "[nofs]") {
  WaveformConfig c;
  c.kind = WaveformKind::nofs;
  c.n = 256;
  c.m = 64;
  c.q = 52;
  c.k = 20;
  c.cp = 16;
  c.pilot_block = 10;

  SECTION("alpha = 1 is OFDM") {
    c.nofs_alpha = 1.0;
    auto g = random_grid(c, 12);
    auto nofs = nofs_modulate(c, g);
    WaveformConfig o = c;
    o.kind = WaveformKind::ofdm;
    auto ofdm = map_and_modulate(o, precode(o, g));
    double worst = 0;
    for (std::size_t i = 0; i < ofdm.samples.size(); ++i) worst = std::max(worst, std::abs(ofdm.samples[i] - nofs.samples[i]));
    CHECK(worst < 1e-10);
  }
  SECTION("compression narrows the band and raises the leakage floor") {
    // A copied prefix breaks phase continuity of off-grid tones; measure the bodies alone.
    c.cp = 0;
    auto spectrum = [&](double alpha) {
      c.nofs_alpha = alpha;
      ComplexSeq all;
      for (std::uint64_t s = 0; s < 30; ++s) {
        auto f = nofs_modulate(c, random_grid(c, 100 + s));
        all.insert(all.end(), f.samples.begin(), f.samples.end());
      }
      return psd_welch(all, 256, 128);
    };
    auto full = spectrum(1.0);
    auto packed = spectrum(0.8);
    const double ratio = occupied_bandwidth(packed) / occupied_bandwidth(full);
    CHECK(std::abs(ratio - 0.8) < 0.05);
    // Level just outside 1.2x each waveform's own band edge.
    const double edge_full = 32.0 / 256.0;
    const double edge_packed = 0.8 * 32.0 / 256.0;
    const double leak_full = mean_power_db(full, 1.2 * edge_full, 1.2 * edge_full + 4.0 / 256.0);
    const double leak_packed = mean_power_db(packed, 1.2 * edge_packed, 1.2 * edge_packed + 4.0 / 256.0);
    CHECK(leak_packed > leak_full);
  }
  SECTION("argument checks") {
    auto g = random_grid(c, 13);
    c.nofs_alpha = 0.0;
    CHECK_THROWS_AS(nofs_modulate(c, g), ParameterError);
    c.nofs_alpha = 1.2;
    CHECK_THROWS_AS(nofs_modulate(c, g), ParameterError);
    c.nofs_alpha = 0.8;
    c.kind = WaveformKind::ofdm;
    CHECK_THROWS_AS(nofs_modulate(c, g), ConfigurationError);
  }
}

TEST_CASE("binary frame export", "[export]") {
  FrameSignal f;
  f.n = 2;
  f.cp = 0;
  f.k = 1;
  f.samples = {cplx(1.5, -2.0), cplx(0.25, 3.0)};
  std::ostringstream os;
  write_frame_binary(os, f);
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 32);
  const double expect[4] = {1.5, -2.0, 0.25, 3.0};
  for (int i = 0; i < 4; ++i) {
    std::uint64_t word = 0;
    for (int b = 0; b < 8; ++b) word |= std::uint64_t(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
    double v;
    std::memcpy(&v, &word, 8);
    CHECK(v == expect[i]);
  }
}

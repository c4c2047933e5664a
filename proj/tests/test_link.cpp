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

#include <algorithm>
#include <cmath>

#include "nofslab/airframe.hpp"
#include "nofslab/channel.hpp"
#include "nofslab/detect.hpp"
#include "nofslab/error.hpp"
#include "nofslab/link.hpp"
#include "oracles.hpp"

using namespace nofs;
using Catch::Approx;

namespace {

ComplexSeq random_symbols(RandomStream& rs, std::size_t count, unsigned order = 4) {
  const unsigned bits = order == 4 ? 2 : 4;
  return qam_map(rs.bits(count * bits), order);
}

std::size_t symbol_errors(const ComplexSeq& a, const ComplexSeq& b) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e += std::abs(a[i] - b[i]) > 1e-9;
  return e;
}

}  // namespace

TEST_CASE("least-squares channel estimate", "[estimate]") {
  RandomStream rs(1, 1);
  const ComplexSeq pilots = random_symbols(rs, 600);

  SECTION("unit channel") {
    auto h = estimate_channel(pilots, pilots);
    for (auto v : h) CHECK(std::abs(v - cplx(1, 0)) < 1e-12);
  }
  SECTION("nominal profile, no noise") {
    WaveformConfig c;
    c.kind = WaveformKind::ofdm;
    c.k = 7;
    RandomStream payload(2, 1), pilot_rs(2, 2);
    auto grid = build_grid(c, payload.bits(c.payload_bits()), pilot_rs);
    auto frame = map_and_modulate(c, precode(c, grid));
    auto pdp = PdpSpec::paper_tdl4();
    RandomStream ch(2, 3);
    auto r = realize_channel(pdp, 1, 7 * (c.n + c.cp), ch, true);
    CMatrix y = demap_frame(c, apply_channel(frame, r));
    ComplexSeq rx(y.col(0).data(), y.col(0).data() + c.m);
    ComplexSeq tx(grid.pilot_values.col(0).data(), grid.pilot_values.col(0).data() + c.m);
    auto h = estimate_channel(rx, tx);
    double worst = 0;
    for (std::size_t i = 0; i < c.m; ++i) {
      cplx expected{};
      const double bin = double(signed_bin(i, c.m, c.n));
      for (const auto& tap : pdp.taps) expected += tap.gain * std::polar(1.0, -2.0 * oracle::pi * double(tap.delay) * bin / double(c.n));
      worst = std::max(worst, std::abs(h[i] - expected));
    }
    CHECK(worst < 1e-9);
  }
  SECTION("estimation error at 30 dB") {
    const double n0 = 1e-3;
    double mse = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto noise = draw_cgaussian(rs, pilots.size(), n0);
      ComplexSeq rx(pilots.size());
      for (std::size_t i = 0; i < rx.size(); ++i) rx[i] = pilots[i] + noise[i];
      auto h = estimate_channel(rx, pilots);
      for (auto v : h) mse += std::norm(v - cplx(1, 0));
    }
    mse /= 1000.0 * double(pilots.size());
    CHECK(mse > n0 / 2);
    CHECK(mse < n0 * 2);
  }
  SECTION("length mismatch") {
    CHECK_THROWS_AS(estimate_channel(std::span<const cplx>(pilots).first(10), pilots), DimensionError);
  }
}

TEST_CASE("one-tap equalizer", "[equalize]") {
  RandomStream rs(3, 1);
  const ComplexSeq x = random_symbols(rs, 64);
  SECTION("unit gains") {
    const ComplexSeq ones(64, cplx(1, 0));
    auto zf = equalize(x, ones, EqualizerMode::zf, 0.0);
    auto mm = equalize(x, ones, EqualizerMode::mmse, 0.0);
    CHECK(zf.values == x);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(mm.values[i] - x[i]) < 1e-15);
  }
  SECTION("zero forcing undoes the profile") {
    auto pdp = PdpSpec::paper_tdl4();
    std::vector<cplx> g;
    for (const auto& t : pdp.taps) g.push_back(t.gain);
    ComplexSeq h(64), y(64);
    for (std::size_t i = 0; i < 64; ++i) {
      h[i] = tap_response(pdp, g, signed_bin(i, 64, 128), 128);
      y[i] = h[i] * x[i];
    }
    auto zf = equalize(y, h, EqualizerMode::zf, 0.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(zf.values[i] - x[i]) < 1e-8);
    auto mm = equalize(y, h, EqualizerMode::mmse, 1e-12);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(mm.values[i] - zf.values[i]) < 1e-9);
  }
  SECTION("MMSE bias and noise") {
    ComplexSeq h = {cplx(2, 0), cplx(0, 0.5)};
    ComplexSeq y = {cplx(1, 1), cplx(1, 0)};
    auto mm = equalize(y, h, EqualizerMode::mmse, 0.25);
    CHECK(std::abs(mm.values[0] - cplx(1, 1) * 2.0 / 4.25) < 1e-15);
    CHECK(mm.bias[0] == Approx(4.0 / 4.25));
    CHECK(mm.bias[1] == Approx(0.5));
    CHECK(mm.noise[1] == Approx(0.25 * 0.25 / 0.25));
  }
  SECTION("deep fades are zeroed and flagged under ZF") {
    ComplexSeq h = {cplx(1, 0), cplx(1e-8, 0), cplx(0, 0)};
    ComplexSeq y = {cplx(1, 0), cplx(1, 0), cplx(1, 0)};
    auto zf = equalize(y, h, EqualizerMode::zf, 0.0);
    CHECK(zf.flagged == 2);
    CHECK(zf.values[1] == cplx(0, 0));
    CHECK(zf.values[2] == cplx(0, 0));
    CHECK(std::isfinite(zf.values[0].real()));
  }
}

TEST_CASE("de-precoding and detection", "[detect]") {
  SECTION("SC-OFDM toy column") {
    WaveformConfig c;
    c.kind = WaveformKind::sc_ofdm_1d;
    c.n = 16;
    c.m = 8;
    c.q = 6;
    c.k = 4;
    c.pilot_block = 4;
    RandomStream payload(4, 1), pilots(4, 2);
    BitSeq bits = payload.bits(c.payload_bits());
    auto grid = build_grid(c, bits, pilots);
    CMatrix p = precode(c, grid);
    CMatrix data(8, 3);
    for (Eigen::Index i = 0; i < 3; ++i) data.col(i) = p.col(i + 1);
    CHECK(deprecode_detect(c, data, DetectorSpec{}, nullptr) == bits);
  }
  SECTION("configuration errors") {
    WaveformConfig c;
    c.kind = WaveformKind::sc_nofs_1d;
    CMatrix data = CMatrix::Zero(492, 120);
    CHECK_THROWS_AS(deprecode_detect(c, data, DetectorSpec{}, nullptr), ConfigurationError);
    c.kind = WaveformKind::nofs;
    CHECK_THROWS_AS(deprecode_detect(c, CMatrix::Zero(600, 120), DetectorSpec{}, nullptr), ConfigurationError);
  }
  SECTION("oracle size cap") {
    auto pair = build_nofst(12, 10);  // 4^12 > 2^20
    CHECK_THROWS_AS(NofsDetector(pair, 4, {}, 0.0, DetectorKind::exhaustive_oracle), CapacityError);
    auto ok = build_nofst(10, 8);  // exactly 2^20
    CHECK_NOTHROW(NofsDetector(ok, 4, {}, 0.0, DetectorKind::linear_recon));
  }
  SECTION("detector names") {
    for (auto k : {DetectorKind::linear_recon, DetectorKind::mmse, DetectorKind::iterative, DetectorKind::exhaustive_oracle})
      CHECK(parse_detector_kind(to_string(k)) == k);
    CHECK_THROWS(parse_detector_kind("sphere"));
  }
}

TEST_CASE("toy SC-NOFS detection against brute force", "[detect][toy]") {
  auto pair = build_nofst(8, 6);
  RandomStream rs(6, 1);
  NofsDetector oracle_det(pair, 4, {}, 0.0, DetectorKind::exhaustive_oracle);
  NofsDetector iter_det(pair, 4, {}, 0.0, DetectorKind::iterative);
  NofsDetector lin_det(pair, 4, {}, 0.0, DetectorKind::linear_recon);
  DetectorSpec oracle_spec{DetectorKind::exhaustive_oracle};
  DetectorSpec iter_spec{DetectorKind::iterative};
  iter_spec.iterations = 8;
  DetectorSpec lin_spec{DetectorKind::linear_recon};

  std::size_t oracle_err = 0, mismatch = 0, lin_err = 0, symbols = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = random_symbols(rs, 8);
    ComplexSeq y(6);
    pair.apply_forward(x, y);
    auto xo = oracle_det.detect(y, oracle_spec);
    auto xi = iter_det.detect(y, iter_spec);
    auto xl = lin_det.detect(y, lin_spec);
    oracle_err += symbol_errors(xo, x);
    mismatch += symbol_errors(xi, xo);
    lin_err += symbol_errors(xl, x);
    symbols += 8;
  }
  CHECK(oracle_err == 0);
  CHECK(double(mismatch) / double(symbols) <= 1e-3);
  CHECK(lin_err > 0);  // q < m: the plain reconstruction alone is not enough
}

TEST_CASE("iterative detection is never worse than linear reconstruction", "[detect][toy]") {
  auto pair = build_nofst(8, 6);
  RandomStream rs(7, 1);
  for (double n0 : {0.0, 0.01, 0.1}) {
    NofsDetector iter_det(pair, 4, {}, n0, DetectorKind::iterative);
    NofsDetector lin_det(pair, 4, {}, n0, DetectorKind::linear_recon);
    DetectorSpec iter_spec;
    iter_spec.iterations = 8;
    DetectorSpec lin_spec{DetectorKind::linear_recon};
    std::size_t worse = 0, total_iter = 0, total_lin = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto x = random_symbols(rs, 8);
      ComplexSeq y(6);
      pair.apply_forward(x, y);
      if (n0 > 0) {
        auto noise = draw_cgaussian(rs, 6, n0);
        for (std::size_t i = 0; i < 6; ++i) y[i] += noise[i];
      }
      const auto ei = symbol_errors(iter_det.detect(y, iter_spec), x);
      const auto el = symbol_errors(lin_det.detect(y, lin_spec), x);
      worse += ei > el;
      total_iter += ei;
      total_lin += el;
      // The residual it reaches is never above the sliced linear estimate's.
      CHECK(iter_det.residual_energy(y, iter_det.detect(y, iter_spec)) <=
            lin_det.residual_energy(y, lin_det.detect(y, lin_spec)) + 1e-12);
    }
    INFO("noise variance " << n0);
    // Per trial at zero noise; with noise a residual minimiser can lose single draws, so compare totals.
    if (n0 == 0.0) CHECK(worse == 0);
    CHECK(total_iter <= total_lin);
  }
}

TEST_CASE("MMSE detector", "[detect]") {
  auto pair = build_nofst(8, 6);
  RandomStream rs(8, 1);
  NofsDetector det(pair, 4, {}, 1e-3, DetectorKind::mmse);
  DetectorSpec spec{DetectorKind::mmse};
  auto x = random_symbols(rs, 8);
  ComplexSeq y(6);
  pair.apply_forward(x, y);
  auto out = det.detect(y, spec);
  REQUIRE(out.size() == 8);
  NofsDetector lin(pair, 4, {}, 1e-3, DetectorKind::linear_recon);
  CHECK_THROWS_AS(lin.detect(y, spec), ConfigurationError);
}

TEST_CASE("Wilson interval", "[report]") {
  auto [lo, hi] = wilson_interval(0, 100);
  CHECK(lo == Approx(0.0).margin(1e-15));
  CHECK(hi == Approx(0.03699).epsilon(1e-3));
  auto [lo2, hi2] = wilson_interval(50, 100);
  CHECK(lo2 == Approx(0.40383).epsilon(1e-4));
  CHECK(hi2 == Approx(0.59617).epsilon(1e-4));
}

TEST_CASE("AWGN link run", "[run]") {
  WaveformConfig c;
  c.kind = WaveformKind::ofdm;
  DetectorSpec det;
  auto report = run_link(c, det, {4.0}, 1'000'000, 200'000, 11);
  REQUIRE(report.points.size() == 1);
  const auto& p = report.points[0];
  CHECK(p.bits_tested >= 100'000);
  CHECK(p.ber == Approx(double(p.bit_errors) / double(p.bits_tested)));
  CHECK(std::abs(p.ber - oracle::qpsk_ber(4.0)) / oracle::qpsk_ber(4.0) < 0.10);
  CHECK(std::abs(oracle::qpsk_ber(4.0) - 1.25e-2) < 1e-4);
  CHECK(p.ci_low <= p.ber);
  CHECK(p.ci_high >= p.ber);
  CHECK(report.frame_cost.real_mults == 2'867'200);

  SECTION("deterministic") {
    auto again = run_link(c, det, {4.0}, 1'000'000, 200'000, 11);
    CHECK(again.points[0].bit_errors == p.bit_errors);
    CHECK(again.points[0].bits_tested == p.bits_tested);
    LinkSetup s = again.setup;
    s.threads = 3;
    auto threaded = run_link(s);
    CHECK(threaded.points[0].bit_errors == p.bit_errors);
  }
  SECTION("stops on the error target") {
    auto quick = run_link(c, det, {0.0}, 200, 10'000'000, 11);
    CHECK(quick.points[0].bit_errors >= 200);
    CHECK(quick.points[0].frames == 1);
  }
  SECTION("setup checks") {
    CHECK_THROWS_AS(run_link(c, det, {}, 200, 1000, 1), ConfigurationError);
    WaveformConfig n = c;
    n.kind = WaveformKind::nofs;
    CHECK_THROWS_AS(run_link(n, det, {4.0}, 200, 1000, 1), ConfigurationError);
    LinkSetup s;
    s.config = c;
    s.channel = ChannelModel::tdl;
    s.config.cp = 4;
    s.ebn0_db = {5.0};
    CHECK_THROWS_AS(run_link(s), ConfigurationError);
  }
}

TEST_CASE("SC-OFDM beats OFDM on paired fading seeds", "[run][fading]") {
  std::size_t wins = 0;
  const std::size_t seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    double ber[2];
    int i = 0;
    for (auto kind : {WaveformKind::ofdm, WaveformKind::sc_ofdm_1d}) {
      LinkSetup s;
      s.config.kind = kind;
      s.channel = ChannelModel::tdl;
      s.csi = CsiMode::ls;
      s.equalizer = EqualizerMode::mmse;
      s.ebn0_db = {12.0};
      s.min_errors = 1'000'000;
      s.max_bits = 2 * s.config.payload_bits();
      s.seed = seed;
      ber[i++] = run_link(s).points[0].ber;
    }
    wins += ber[1] < ber[0];
  }
  CHECK(double(wins) / double(seeds) >= 0.9);
}

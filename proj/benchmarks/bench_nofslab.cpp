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

#include <benchmark/benchmark.h>

#include "nofslab/airframe.hpp"
#include "nofslab/detect.hpp"
#include "nofslab/link.hpp"
#include "nofslab/numerics.hpp"
#include "nofslab/shaping.hpp"

using namespace nofs;

static void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream rs(1, 1);
  ComplexSeq in = draw_cgaussian(rs, n, 1.0), out(n);
  const Fft& plan = fft_plan(n);
  for (auto _ : state) {
    plan.forward(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->Arg(492)->Arg(600)->Arg(1024)->Arg(4096)->Complexity();

static void BM_NofstForward(benchmark::State& state) {
  auto pair = build_nofst(600, 492);
  RandomStream rs(1, 2);
  ComplexSeq x = draw_cgaussian(rs, 600, 1.0), y(492);
  for (auto _ : state) {
    pair.apply_forward(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_NofstForward);

static void BM_FrameGeneration(benchmark::State& state) {
  WaveformConfig c;
  c.kind = static_cast<WaveformKind>(state.range(0));
  auto pair = build_nofst(c.m, c.q);
  std::uint64_t index = 0;
  for (auto _ : state) {
    FrameSignal f = random_frame(c, 1, index++, &pair);
    benchmark::DoNotOptimize(f.samples.data());
  }
  state.SetLabel(std::string(to_string(c.kind)));
}
BENCHMARK(BM_FrameGeneration)
    ->Arg(static_cast<int>(WaveformKind::ofdm))
    ->Arg(static_cast<int>(WaveformKind::sc_ofdm_1d))
    ->Arg(static_cast<int>(WaveformKind::sc_nofs_1d))
    ->Unit(benchmark::kMillisecond);

static void BM_NofsDetectColumn(benchmark::State& state) {
  auto pair = build_nofst(600, 492);
  RandomStream rs(3, 1);
  const ComplexSeq x = qam_map(rs.bits(1200), 4);
  ComplexSeq y(492);
  pair.apply_forward(x, y);
  const ComplexSeq noise = draw_cgaussian(rs, 492, 0.05);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];
  const auto kind = static_cast<DetectorKind>(state.range(0));
  NofsDetector det(pair, 4, {}, 0.05, kind);
  DetectorSpec spec;
  spec.kind = kind;
  for (auto _ : state) {
    ComplexSeq out = det.detect(y, spec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_NofsDetectColumn)
    ->Arg(static_cast<int>(DetectorKind::linear_recon))
    ->Arg(static_cast<int>(DetectorKind::iterative))
    ->Unit(benchmark::kMicrosecond);

static void BM_LinkFrame(benchmark::State& state) {
  LinkSetup s;
  s.config.kind = static_cast<WaveformKind>(state.range(0));
  s.channel = ChannelModel::tdl;
  s.csi = CsiMode::ls;
  auto pair = build_nofst(s.config.m, s.config.q);
  std::uint64_t frame = 0;
  for (auto _ : state) {
    auto outcome = simulate_frame(s, &pair, 12.0, 0, frame++);
    benchmark::DoNotOptimize(outcome.bit_errors);
  }
  state.SetLabel(std::string(to_string(s.config.kind)));
}
BENCHMARK(BM_LinkFrame)
    ->Arg(static_cast<int>(WaveformKind::ofdm))
    ->Arg(static_cast<int>(WaveformKind::sc_ofdm_2d))
    ->Arg(static_cast<int>(WaveformKind::sc_nofs_1d))
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

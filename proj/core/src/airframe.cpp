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

#include "nofslab/airframe.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <ostream>

#include "nofslab/error.hpp"

namespace nofs {

std::vector<std::size_t> ResourceGrid::data_column_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < pilot_mask.size(); ++c)
    if (!pilot_mask[c]) out.push_back(c);
  return out;
}

std::vector<std::size_t> ResourceGrid::pilot_column_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < pilot_mask.size(); ++c)
    if (pilot_mask[c]) out.push_back(c);
  return out;
}

std::span<const cplx> FrameSignal::body(std::size_t index) const {
  if (index >= k) throw DimensionError("frame: symbol index out of range");
  return std::span<const cplx>(samples).subspan(index * symbol_length() + cp, n);
}

namespace {

std::vector<std::size_t> data_columns_of(const WaveformConfig& config) {
  std::vector<std::size_t> out;
  out.reserve(config.data_columns());
  for (std::size_t c = 0; c < config.k; ++c)
    if (!config.is_pilot_column(c)) out.push_back(c);
  return out;
}

void transform_rows(CMatrix& matrix, std::span<const std::size_t> columns, bool inverse) {
  if (columns.empty()) return;
  const Fft& plan = fft_plan(columns.size());
  std::vector<cplx> row(columns.size());
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) row[i] = matrix(r, static_cast<Eigen::Index>(columns[i]));
    if (inverse)
      plan.inverse(row, row);
    else
      plan.forward(row, row);
    for (std::size_t i = 0; i < columns.size(); ++i) matrix(r, static_cast<Eigen::Index>(columns[i])) = row[i];
  }
}

void transform_column(CMatrix& matrix, Eigen::Index col, bool inverse) {
  const auto len = static_cast<std::size_t>(matrix.rows());
  std::span<cplx> view(matrix.col(col).data(), len);
  if (inverse)
    fft_plan(len).inverse(view, view);
  else
    fft_plan(len).forward(view, view);
}

}  // namespace

ResourceGrid build_grid(const WaveformConfig& config, std::span<const std::uint8_t> payload_bits,
                        RandomStream& pilot_stream) {
  config.validate();
  if (payload_bits.size() != config.payload_bits())
    throw FramingError("build_grid: payload has " + std::to_string(payload_bits.size()) + " bits, frame needs " +
                       std::to_string(config.payload_bits()));

  const auto m = static_cast<Eigen::Index>(config.m);
  const auto used = static_cast<Eigen::Index>(config.occupied_bins());
  ResourceGrid grid;
  grid.data = CMatrix::Zero(m, static_cast<Eigen::Index>(config.k));
  grid.pilot_mask.assign(config.k, false);
  grid.pilot_values.resize(used, static_cast<Eigen::Index>(config.pilot_columns()));

  const ComplexSeq symbols = qam_map(payload_bits, config.mod_order);
  std::size_t next_symbol = 0;
  Eigen::Index pilot_index = 0;
  for (std::size_t c = 0; c < config.k; ++c) {
    if (config.is_pilot_column(c)) {
      grid.pilot_mask[c] = true;
      const BitSeq bits = pilot_stream.bits(2 * config.occupied_bins());
      const ComplexSeq pilots = qam_map(bits, 4);
      for (Eigen::Index r = 0; r < used; ++r) grid.pilot_values(r, pilot_index) = pilots[static_cast<std::size_t>(r)];
      ++pilot_index;
      continue;
    }
    for (Eigen::Index r = 0; r < m; ++r) grid.data(r, static_cast<Eigen::Index>(c)) = symbols[next_symbol++];
  }
  return grid;
}

std::size_t occupied_bin(std::size_t index, std::size_t used, std::size_t n) {
  const std::size_t lower = (used + 1) / 2;
  return index < lower ? index + 1 : n - (used - lower) + (index - lower);
}

long signed_bin(std::size_t index, std::size_t used, std::size_t n) {
  const long bin = static_cast<long>(occupied_bin(index, used, n));
  return index < (used + 1) / 2 ? bin : bin - static_cast<long>(n);
}

CMatrix precode(const WaveformConfig& config, const ResourceGrid& grid, const ShapingPair* shaping) {
  config.validate();
  const auto m = static_cast<Eigen::Index>(config.m);
  const auto k = static_cast<Eigen::Index>(config.k);
  if (grid.data.rows() != m || grid.data.cols() != k || grid.pilot_mask.size() != config.k)
    throw DimensionError("precode: grid does not match config");
  const auto used = static_cast<Eigen::Index>(config.occupied_bins());
  if (grid.pilot_values.rows() != used ||
      grid.pilot_values.cols() != static_cast<Eigen::Index>(config.pilot_columns()))
    throw DimensionError("precode: pilot values do not match config");
  if (uses_shaping(config.kind)) {
    if (shaping == nullptr) throw ConfigurationError("precode: SC-NOFS waveforms need a shaping pair");
    if (shaping->m() != config.m || shaping->q() != config.q)
      throw ConfigurationError("precode: shaping pair dimensions do not match config");
  }

  CMatrix out = CMatrix::Zero(used, k);
  Eigen::Index pilot_index = 0;
  std::vector<cplx> column(config.m);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (grid.pilot_mask[static_cast<std::size_t>(c)]) {
      out.col(c) = grid.pilot_values.col(pilot_index++);
      continue;
    }
    switch (config.kind) {
      case WaveformKind::ofdm:
      case WaveformKind::nofs:
        out.col(c) = grid.data.col(c);
        break;
      case WaveformKind::sc_ofdm_1d:
      case WaveformKind::sc_ofdm_2d:
        out.col(c) = grid.data.col(c);
        transform_column(out, c, false);
        break;
      case WaveformKind::sc_nofs_1d:
      case WaveformKind::sc_nofs_2d: {
        for (Eigen::Index r = 0; r < m; ++r) column[static_cast<std::size_t>(r)] = grid.data(r, c);
        shaping->apply_forward(column, std::span<cplx>(out.col(c).data(), config.q));
        break;
      }
    }
  }
  if (is_two_dimensional(config.kind)) {
    const auto cols = data_columns_of(config);
    spread_time(out, cols);
  }
  return out;
}

void spread_time(CMatrix& matrix, std::span<const std::size_t> columns) { transform_rows(matrix, columns, true); }

void despread_time(CMatrix& matrix, std::span<const std::size_t> columns) { transform_rows(matrix, columns, false); }

CMatrix unprecode(const WaveformConfig& config, const CMatrix& precoded) {
  config.validate();
  if (uses_shaping(config.kind)) throw ConfigurationError("unprecode: SC-NOFS waveforms require a detector");
  const auto k = static_cast<Eigen::Index>(config.k);
  if (precoded.rows() != static_cast<Eigen::Index>(config.m) || precoded.cols() != k)
    throw DimensionError("unprecode: matrix does not match config");

  CMatrix work = precoded;
  const auto cols = data_columns_of(config);
  if (is_two_dimensional(config.kind)) despread_time(work, cols);
  CMatrix out = CMatrix::Zero(work.rows(), k);
  for (std::size_t c : cols) {
    const auto ci = static_cast<Eigen::Index>(c);
    out.col(ci) = work.col(ci);
    if (config.kind == WaveformKind::sc_ofdm_1d || config.kind == WaveformKind::sc_ofdm_2d)
      transform_column(out, ci, true);
  }
  return out;
}

FrameSignal map_and_modulate(const WaveformConfig& config, const CMatrix& precoded) {
  const std::size_t used = static_cast<std::size_t>(precoded.rows());
  const std::size_t n = config.n;
  if (used >= n) throw MappingError("map_and_modulate: more values than usable IFFT bins");
  FrameSignal frame;
  frame.n = n;
  frame.cp = config.cp;
  frame.k = static_cast<std::size_t>(precoded.cols());
  frame.samples.assign(frame.k * frame.symbol_length(), cplx{});
  if (frame.k == config.k && config.pilot_block > 0) {
    frame.pilot_symbols.resize(frame.k);
    for (std::size_t c = 0; c < frame.k; ++c) frame.pilot_symbols[c] = config.is_pilot_column(c);
  }

  const Fft& plan = fft_plan(n);
  std::vector<cplx> bins(n);
  for (std::size_t c = 0; c < frame.k; ++c) {
    std::fill(bins.begin(), bins.end(), cplx{});
    for (std::size_t i = 0; i < used; ++i)
      bins[occupied_bin(i, used, n)] = precoded(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    cplx* symbol = frame.samples.data() + c * frame.symbol_length();
    plan.inverse(bins, std::span<cplx>(symbol + frame.cp, n));
    std::copy(symbol + n, symbol + n + frame.cp, symbol);
  }
  return frame;
}

FrameSignal nofs_modulate(const WaveformConfig& config, const ResourceGrid& grid) {
  if (config.kind != WaveformKind::nofs) throw ConfigurationError("nofs_modulate: waveform kind must be nofs");
  const double alpha = config.nofs_alpha;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("nofs_modulate: alpha must be in (0, 1]");
  const std::size_t n = config.n;
  const std::size_t m = config.m;
  if (m >= n) throw MappingError("nofs_modulate: more subcarriers than IFFT bins");
  if (grid.data.rows() != static_cast<Eigen::Index>(m) || grid.pilot_mask.size() != config.k)
    throw DimensionError("nofs_modulate: grid does not match config");

  CMatrix basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const double f = static_cast<double>(signed_bin(i, m, n)) * alpha / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
      // Keep the phase argument small for accuracy at large t.
      const double cycles = f * static_cast<double>(t);
      basis(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          std::polar(norm, 2.0 * kPi * (cycles - std::round(cycles)));
    }
  }

  CMatrix columns(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(config.k));
  Eigen::Index pilot_index = 0;
  for (std::size_t c = 0; c < config.k; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    columns.col(ci) = grid.pilot_mask[c] ? grid.pilot_values.col(pilot_index++) : grid.data.col(ci);
  }
  const CMatrix bodies = basis * columns;

  FrameSignal frame;
  frame.n = n;
  frame.cp = config.cp;
  frame.k = config.k;
  frame.pilot_symbols = grid.pilot_mask;
  frame.samples.assign(frame.k * frame.symbol_length(), cplx{});
  for (std::size_t c = 0; c < frame.k; ++c) {
    cplx* symbol = frame.samples.data() + c * frame.symbol_length();
    for (std::size_t t = 0; t < n; ++t) symbol[frame.cp + t] = bodies(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c));
    std::copy(symbol + n, symbol + n + frame.cp, symbol);
  }
  return frame;
}

CMatrix demap_frame(const WaveformConfig& config, const FrameSignal& frame) {
  const std::size_t n = config.n;
  const std::size_t len = n + config.cp;
  if (frame.samples.size() != config.k * len)
    throw FramingError("demap_frame: expected " + std::to_string(config.k * len) + " samples, got " +
                       std::to_string(frame.samples.size()));
  const std::size_t used = config.occupied_bins();
  if (used >= n) throw MappingError("demap_frame: more values than usable IFFT bins");
  CMatrix out(static_cast<Eigen::Index>(used), static_cast<Eigen::Index>(config.k));
  const Fft& plan = fft_plan(n);
  std::vector<cplx> bins(n);
  for (std::size_t c = 0; c < config.k; ++c) {
    plan.forward(std::span<const cplx>(frame.samples).subspan(c * len + config.cp, n), bins);
    for (std::size_t i = 0; i < used; ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = bins[occupied_bin(i, used, n)];
  }
  return out;
}

FrameSignal random_frame(const WaveformConfig& config, std::uint64_t seed, std::uint64_t index,
                         const ShapingPair* shaping) {
  config.validate();
  RandomStream payload(seed, mix64(index * 2 + 0x51));
  RandomStream pilots(seed, mix64(index * 2 + 0x52));
  const BitSeq bits = payload.bits(config.payload_bits());
  const ResourceGrid grid = build_grid(config, bits, pilots);
  if (config.kind == WaveformKind::nofs) return nofs_modulate(config, grid);
  return map_and_modulate(config, precode(config, grid, shaping));
}

double energy(std::span<const cplx> x) {
  double e = 0.0;
  for (const cplx& v : x) e += std::norm(v);
  return e;
}

void write_frame_binary(std::ostream& out, const FrameSignal& frame) {
  auto put = [&out](double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    out.write(bytes, 8);
  };
  for (const cplx& s : frame.samples) {
    put(s.real());
    put(s.imag());
  }
}

void save_frame_binary(const std::string& path, const FrameSignal& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_frame_binary(out, frame);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace nofs

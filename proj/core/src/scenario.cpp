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

#include "nofslab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nofslab/error.hpp"

namespace nofs {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ParseError("bad number for '" + key + "': " + v);
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  double d = to_double(key, v);  // accepts 1e6
  if (d < 0 || d != std::floor(d) || d > 1.8e19) throw ParseError("bad count for '" + key + "': " + v);
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("bad boolean for '" + key + "': " + v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::string t = text;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream is(t);
  std::vector<std::string> out;
  std::string item;
  while (is >> item) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream is(t);
    std::string item;
    while (std::getline(is, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3) throw ParseError("range must be start:step:stop");
    double a = to_double("grid", parts[0]);
    double step = to_double("grid", parts[1]);
    double b = to_double("grid", parts[2]);
    if (!(step > 0) || b < a) throw ParseError("range needs step > 0 and stop >= start");
    auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
  } else {
    for (const auto& s : split_list(t)) out.push_back(to_double("grid", s));
  }
  if (out.empty()) throw ParseError("empty grid");
  return out;
}

Scenario preset(const std::string& name) {
  Scenario s;
  s.name = name;
  LinkSetup& l = s.setup;
  l.config = WaveformConfig{};  // 1024 / 600 / 492, cp 72, 140 symbols, QPSK, pilot every 7
  l.detector = DetectorSpec{};
  l.min_errors = 200;
  if (name == "fig4-awgn") {
    l.channel = ChannelModel::awgn;
    l.csi = CsiMode::perfect;
    l.equalizer = EqualizerMode::zf;
    l.ebn0_db = parse_grid("0:1:14");
    l.max_bits = 10'000'000;
    s.seeds = {1};
  } else if (name == "fig5-fading") {
    l.channel = ChannelModel::tdl;
    l.pdp = PdpSpec::paper_tdl4();
    l.csi = CsiMode::ls;
    l.equalizer = EqualizerMode::mmse;
    l.ebn0_db = parse_grid("0:3:30");
    l.max_bits = 2'000'000;
    s.seeds.clear();
    for (std::uint64_t i = 1; i <= 20; ++i) s.seeds.push_back(i);
  } else {
    throw ConfigurationError("unknown preset '" + name + "'");
  }
  l.seed = s.seeds.front();
  return s;
}

std::vector<std::string> preset_names() { return {"fig4-awgn", "fig5-fading"}; }

void apply_setting(Scenario& s, const std::string& key, const std::string& value) {
  LinkSetup& l = s.setup;
  WaveformConfig& c = l.config;
  const std::string v = trim(value);
  if (key == "name") s.name = v;
  else if (key == "waveform") c.kind = parse_waveform_kind(v);
  else if (key == "n") c.n = to_count(key, v);
  else if (key == "m") c.m = to_count(key, v);
  else if (key == "q") c.q = to_count(key, v);
  else if (key == "k") c.k = to_count(key, v);
  else if (key == "cp") c.cp = to_count(key, v);
  else if (key == "subcarrier_spacing") c.subcarrier_spacing = to_double(key, v);
  else if (key == "mod_order") c.mod_order = static_cast<unsigned>(to_count(key, v));
  else if (key == "pilot_block") c.pilot_block = to_count(key, v);
  else if (key == "nofs_alpha") c.nofs_alpha = to_double(key, v);
  else if (key == "channel") {
    if (v == "paper-tdl4") {
      l.channel = ChannelModel::tdl;
      l.pdp = PdpSpec::paper_tdl4();
    } else {
      l.channel = parse_channel_model(v);
    }
  } else if (key == "tap") {
    auto parts = split_list(v);
    if (parts.size() != 3) throw ParseError("tap needs 'delay re im'");
    l.pdp.taps.push_back({to_count(key, parts[0]), cplx(to_double(key, parts[1]), to_double(key, parts[2]))});
  } else if (key == "csi") l.csi = parse_csi_mode(v);
  else if (key == "equalizer") l.equalizer = parse_equalizer_mode(v);
  else if (key == "detector") l.detector.kind = parse_detector_kind(v);
  else if (key == "iterations") l.detector.iterations = static_cast<unsigned>(to_count(key, v));
  else if (key == "chase_bits") l.detector.chase_bits = static_cast<unsigned>(to_count(key, v));
  else if (key == "search_passes") l.detector.search_passes = static_cast<unsigned>(to_count(key, v));
  else if (key == "eb_accounting") l.accounting = parse_eb_accounting(v);
  else if (key == "ebn0") l.ebn0_db = parse_grid(v);
  else if (key == "seed") {
    s.seeds = {to_count(key, v)};
    l.seed = s.seeds.front();
  } else if (key == "seeds") {
    std::vector<std::uint64_t> seeds;
    if (v.find(':') != std::string::npos) {
      for (double d : parse_grid(v)) seeds.push_back(to_count(key, fmt(d)));
    } else {
      for (const auto& item : split_list(v)) seeds.push_back(to_count(key, item));
    }
    if (seeds.empty()) throw ParseError("empty seed list");
    s.seeds = seeds;
    l.seed = seeds.front();
  } else if (key == "min_errors") l.min_errors = to_count(key, v);
  else if (key == "max_bits") l.max_bits = to_count(key, v);
  else if (key == "threads") l.threads = static_cast<unsigned>(to_count(key, v));
  else if (key == "first_block_nominal") l.first_block_nominal = to_bool(key, v);
  else throw ParseError("unknown key '" + key + "'");
}

Scenario parse_scenario(std::istream& in, Scenario base) {
  Scenario s = std::move(base);
  std::string line;
  std::size_t lineno = 0;
  bool any = false;
  bool taps_reset = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "preset") {
        if (any) throw ParseError("'preset' must be the first setting");
        s = preset(value);
      } else {
        // Taps in a file describe the whole profile.
        if (key == "tap" && !taps_reset) {
          s.setup.pdp.taps.clear();
          taps_reset = true;
        }
        apply_setting(s, key, value);
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ConfigurationError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    any = true;
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path);
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& s) {
  const LinkSetup& l = s.setup;
  const WaveformConfig& c = l.config;
  out << "name = " << s.name << '\n';
  out << "waveform = " << to_string(c.kind) << '\n';
  out << "n = " << c.n << '\n';
  out << "m = " << c.m << '\n';
  out << "q = " << c.q << '\n';
  out << "k = " << c.k << '\n';
  out << "cp = " << c.cp << '\n';
  out << "subcarrier_spacing = " << fmt(c.subcarrier_spacing) << '\n';
  out << "mod_order = " << c.mod_order << '\n';
  out << "pilot_block = " << c.pilot_block << '\n';
  out << "nofs_alpha = " << fmt(c.nofs_alpha) << '\n';
  out << "channel = " << to_string(l.channel) << '\n';
  for (const Tap& t : l.pdp.taps)
    out << "tap = " << t.delay << ' ' << fmt(t.gain.real()) << ' ' << fmt(t.gain.imag()) << '\n';
  out << "first_block_nominal = " << (l.first_block_nominal ? "true" : "false") << '\n';
  out << "csi = " << to_string(l.csi) << '\n';
  out << "equalizer = " << to_string(l.equalizer) << '\n';
  out << "detector = " << to_string(l.detector.kind) << '\n';
  out << "iterations = " << l.detector.iterations << '\n';
  out << "chase_bits = " << l.detector.chase_bits << '\n';
  out << "search_passes = " << l.detector.search_passes << '\n';
  out << "eb_accounting = " << to_string(l.accounting) << '\n';
  out << "ebn0 = ";
  for (std::size_t i = 0; i < l.ebn0_db.size(); ++i) out << (i ? "," : "") << fmt(l.ebn0_db[i]);
  out << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < s.seeds.size(); ++i) out << (i ? "," : "") << s.seeds[i];
  out << '\n';
  out << "min_errors = " << l.min_errors << '\n';
  out << "max_bits = " << l.max_bits << '\n';
  out << "threads = " << l.threads << '\n';
}

LinkReport run_campaign(const Scenario& scenario, const ShapingPair* shaping) {
  if (scenario.seeds.empty()) throw ConfigurationError("scenario has no seeds");
  std::unique_ptr<ShapingPair> owned;
  const WaveformConfig& cfg = scenario.setup.config;
  if (uses_shaping(cfg.kind) && shaping == nullptr) {
    cfg.validate();
    owned = std::make_unique<ShapingPair>(build_nofst(cfg.m, cfg.q));
    shaping = owned.get();
  }
  LinkReport pooled;
  for (std::uint64_t seed : scenario.seeds) {
    LinkSetup setup = scenario.setup;
    setup.seed = seed;
    LinkReport r = run_link(setup, shaping);
    if (pooled.points.empty()) {
      pooled = r;
      continue;
    }
    pooled.seeds.push_back(seed);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      LinkPoint& p = pooled.points[i];
      p.bit_errors += r.points[i].bit_errors;
      p.bits_tested += r.points[i].bits_tested;
      p.frames += r.points[i].frames;
    }
  }
  for (LinkPoint& p : pooled.points) {
    p.ber = static_cast<double>(p.bit_errors) / static_cast<double>(p.bits_tested);
    std::tie(p.ci_low, p.ci_high) = wilson_interval(p.bit_errors, p.bits_tested);
  }
  return pooled;
}

}  // namespace nofs

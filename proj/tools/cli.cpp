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

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nofslab/airframe.hpp"
#include "nofslab/channel.hpp"
#include "nofslab/error.hpp"
#include "nofslab/link.hpp"
#include "nofslab/measure.hpp"
#include "nofslab/scenario.hpp"
#include "nofslab/shaping.hpp"

namespace nofs::cli {

double parse_quantity(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty quantity");
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: " + text);
  }
  std::string unit = t.substr(used);
  std::string lower = unit;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  struct Unit {
    const char* name;
    double scale;
  };
  static const Unit units[] = {{"", 1.0},       {"s", 1.0},      {"ms", 1e-3},    {"us", 1e-6},
                               {"hz", 1.0},     {"khz", 1e3},    {"mhz", 1e6},    {"ghz", 1e9},
                               {"m/s", 1.0},    {"km/h", 1 / 3.6}, {"kmh", 1 / 3.6}};
  for (const Unit& u : units)
    if (lower == u.name) return value * u.scale;
  throw ParseError("unknown unit '" + unit + "' in " + text);
}

namespace {

std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string preset;
  std::string config;
  std::string manifest;
  CLI::Option* seed_opt = nullptr;
};

/// Preset, then scenario file, then --seed.
Scenario resolve_scenario(const Globals& g) {
  Scenario s = preset(g.preset.empty() ? "fig4-awgn" : g.preset);
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw ParseError("cannot open scenario file " + g.config);
    s = parse_scenario(in, s);
  }
  if (g.seed_opt->count() > 0) {
    s.seeds = {g.seed};
    s.setup.seed = g.seed;
  }
  return s;
}

std::uint64_t seed_of(const Scenario& s) { return s.seeds.front(); }

/// CSV goes to --out, or to `out` when no path was given.
void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error("cannot write " + g.out);
  f << text;
}

void emit_manifest(const Globals& g, const std::vector<std::string>& args, const std::string& body,
                   std::ostream& err) {
  std::ostringstream m;
  m << "# nofslab manifest v1\n# command: nofslab";
  for (const auto& a : args) m << ' ' << a;
  m << '\n' << body;
  std::string path = g.manifest;
  if (path.empty() && !g.out.empty()) path = g.out + ".manifest";
  if (path.empty()) {
    err << m.str();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << m.str();
}

struct ConfigOverrides {
  std::string waveform;
  std::size_t n = 0, m = 0, q = 0, k = 0, cp = 0;
  unsigned mod_order = 0;
  CLI::Option* cp_opt = nullptr;

  void add_to(CLI::App* app) {
    app->add_option("--waveform", waveform, "ofdm, nofs, sc-ofdm-1d, sc-nofs-1d, sc-ofdm-2d, sc-nofs-2d");
    app->add_option("--n", n, "IFFT size");
    app->add_option("--m", m, "QAM symbols per multicarrier symbol");
    app->add_option("--q", q, "compressed length");
    app->add_option("--k", k, "symbols per frame");
    cp_opt = app->add_option("--cp", cp, "cyclic prefix samples");
    app->add_option("--mod-order", mod_order, "4, 16 or 64");
  }
  void apply(WaveformConfig& c) const {
    if (!waveform.empty()) c.kind = parse_waveform_kind(waveform);
    if (n) c.n = n;
    if (m) c.m = m;
    if (q) c.q = q;
    if (k) c.k = k;
    if (cp_opt->count() > 0) c.cp = cp;
    if (mod_order) c.mod_order = mod_order;
  }
};

std::string config_manifest(const WaveformConfig& c, std::uint64_t seed) {
  std::ostringstream os;
  os << "waveform = " << to_string(c.kind) << "\nn = " << c.n << "\nm = " << c.m << "\nq = " << c.q << "\nk = " << c.k
     << "\ncp = " << c.cp << "\nmod_order = " << c.mod_order << "\npilot_block = " << c.pilot_block
     << "\nnofs_alpha = " << num(c.nofs_alpha, 17) << "\nseed = " << seed << '\n';
  return os.str();
}

std::unique_ptr<ShapingPair> shaping_for(const WaveformConfig& c, const std::string& path) {
  if (!path.empty()) return std::make_unique<ShapingPair>(load_shaping_pair(path));
  if (uses_shaping(c.kind)) return std::make_unique<ShapingPair>(build_nofst(c.m, c.q));
  return nullptr;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nofslab: link-level laboratory for orthogonal and non-orthogonal multicarrier waveforms", "nofslab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "seed for every random stream");
  app.add_option("--out", g.out, "CSV output path (default: standard output)");
  app.add_option("--preset", g.preset, "fig4-awgn or fig5-fading");
  app.add_option("--config", g.config, "scenario file (key = value)");
  app.add_option("--manifest", g.manifest, "manifest path (default: <out>.manifest, or standard error)");

  // link
  auto* link = app.add_subcommand("link", "run a BER campaign");
  ConfigOverrides link_cfg;
  link_cfg.add_to(link);
  std::string ebn0, detector, accounting, shaping_path;
  unsigned iterations = 0, threads = 0;
  std::uint64_t min_errors = 0, max_bits = 0;
  link->add_option("--ebn0", ebn0, "Eb/N0 grid: a,b,c or start:step:stop");
  link->add_option("--detector", detector, "linear-recon, mmse, iterative, exhaustive-oracle");
  link->add_option("--iterations", iterations, "soft cancellation rounds");
  link->add_option("--min-errors", min_errors);
  link->add_option("--max-bits", max_bits);
  link->add_option("--threads", threads);
  link->add_option("--eb-accounting", accounting, "useful or frame");
  link->add_option("--shaping", shaping_path, "shaping pair file for SC-NOFS kinds");

  // papr
  auto* papr = app.add_subcommand("papr", "per-symbol PAPR CCDF");
  ConfigOverrides papr_cfg;
  papr_cfg.add_to(papr);
  std::size_t papr_frames = 10;
  std::string thresholds = "0:0.25:14";
  papr->add_option("--frames", papr_frames, "frames to generate");
  papr->add_option("--thresholds", thresholds, "threshold grid in dB");

  // psd
  auto* psd = app.add_subcommand("psd", "Welch PSD of generated frames");
  ConfigOverrides psd_cfg;
  psd_cfg.add_to(psd);
  std::size_t psd_frames = 4, segment = 0, overlap = 0;
  double alpha = 0;
  auto* overlap_opt = psd->add_option("--overlap", overlap, "samples (default: segment / 2)");
  psd->add_option("--frames", psd_frames);
  psd->add_option("--segment", segment, "segment length (default: n)");
  psd->add_option("--alpha", alpha, "NOFS compression factor");

  // complexity
  auto* complexity = app.add_subcommand("complexity", "per-frame transmit complexity of every kind");
  ConfigOverrides cx_cfg;
  cx_cfg.add_to(complexity);

  // design-nofst
  auto* design = app.add_subcommand("design-nofst", "build, refine and export a shaping pair");
  std::size_t d_m = 0, d_q = 0, d_steps = 0, d_training = 256;
  double d_rate = 0.05;
  std::string d_export;
  design->add_option("--m", d_m, "input length");
  design->add_option("--q", d_q, "compressed length");
  design->add_option("--refine-steps", d_steps, "gradient refinement steps (0 keeps the closed-form pair)");
  design->add_option("--rate", d_rate, "refinement step size");
  design->add_option("--training", d_training, "QPSK training columns for refinement");
  design->add_option("--export", d_export, "write the pair to this file");

  // calc
  auto* calc = app.add_subcommand("calc", "mobility figures");
  calc->require_subcommand(1);
  std::string tc, fm, velocity, carrier = "2.4GHz";
  double c_light = kSpeedOfLight;
  auto* calc_doppler = calc->add_subcommand("doppler", "Doppler from coherence time or velocity");
  auto* calc_velocity = calc->add_subcommand("velocity", "velocity from Doppler or coherence time");
  auto* calc_coherence = calc->add_subcommand("coherence", "coherence time from Doppler or velocity");
  for (auto* sub : {calc_doppler, calc_velocity, calc_coherence}) {
    sub->add_option("--tc", tc, "coherence time, e.g. 0.5ms");
    sub->add_option("--fm", fm, "Doppler frequency, e.g. 846Hz");
    sub->add_option("--velocity", velocity, "speed, e.g. 380km/h");
    sub->add_option("--carrier", carrier, "carrier frequency (default 2.4GHz)");
    sub->add_option("--c", c_light, "propagation speed in m/s");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "nofslab: " << e.what() << "\n" << "run 'nofslab --help' for usage\n";
    return exit_usage;
  }

  try {
    if (link->parsed()) {
      Scenario s = resolve_scenario(g);
      link_cfg.apply(s.setup.config);
      if (!ebn0.empty()) s.setup.ebn0_db = parse_grid(ebn0);
      if (!detector.empty()) s.setup.detector.kind = parse_detector_kind(detector);
      if (iterations) s.setup.detector.iterations = iterations;
      if (min_errors) s.setup.min_errors = min_errors;
      if (max_bits) s.setup.max_bits = max_bits;
      if (threads) s.setup.threads = threads;
      if (!accounting.empty()) s.setup.accounting = parse_eb_accounting(accounting);
      auto pair = shaping_for(s.setup.config, shaping_path);
      LinkReport report = run_campaign(s, pair.get());
      std::ostringstream csv;
      write_link_csv(csv, report);
      emit(g, csv.str(), out);
      std::ostringstream body;
      write_scenario(body, s);
      if (!shaping_path.empty()) body << "# shaping pair loaded from " << shaping_path << '\n';
      emit_manifest(g, args, body.str(), err);
    } else if (papr->parsed()) {
      Scenario s = resolve_scenario(g);
      WaveformConfig c = s.setup.config;
      papr_cfg.apply(c);
      if (papr_frames == 0) throw ParameterError("--frames must be positive");
      auto pair = shaping_for(c, "");
      std::vector<FrameSignal> frames;
      for (std::size_t i = 0; i < papr_frames; ++i) frames.push_back(random_frame(c, seed_of(s), i, pair.get()));
      auto grid = parse_grid(thresholds);
      CcdfCurve curve = papr_ccdf(frames, grid);
      std::ostringstream csv;
      csv << "threshold_db,ccdf\n";
      for (std::size_t i = 0; i < grid.size(); ++i) csv << num(grid[i], 10) << ',' << num(curve.exceed_prob[i], 10) << '\n';
      emit(g, csv.str(), out);
      emit_manifest(g, args, config_manifest(c, seed_of(s)) + "frames = " + std::to_string(papr_frames) + "\nthresholds = " + thresholds + '\n', err);
    } else if (psd->parsed()) {
      Scenario s = resolve_scenario(g);
      WaveformConfig c = s.setup.config;
      psd_cfg.apply(c);
      if (alpha > 0) c.nofs_alpha = alpha;
      if (psd_frames == 0) throw ParameterError("--frames must be positive");
      if (segment == 0) segment = c.n;
      if (overlap_opt->count() == 0) overlap = segment / 2;
      auto pair = shaping_for(c, "");
      ComplexSeq samples;
      for (std::size_t i = 0; i < psd_frames; ++i) {
        FrameSignal f = random_frame(c, seed_of(s), i, pair.get());
        samples.insert(samples.end(), f.samples.begin(), f.samples.end());
      }
      PsdEstimate est = psd_welch(samples, segment, overlap);
      std::ostringstream csv;
      csv << "freq,power_db\n";
      for (std::size_t i = 0; i < est.freq.size(); ++i) csv << num(est.freq[i], 10) << ',' << num(est.power_db[i], 10) << '\n';
      emit(g, csv.str(), out);
      emit_manifest(g, args,
                    config_manifest(c, seed_of(s)) + "frames = " + std::to_string(psd_frames) +
                        "\nsegment = " + std::to_string(segment) + "\noverlap = " + std::to_string(overlap) + '\n',
                    err);
    } else if (complexity->parsed()) {
      Scenario s = resolve_scenario(g);
      WaveformConfig c = s.setup.config;
      cx_cfg.apply(c);
      const std::string manifest = config_manifest(c, seed_of(s));
      std::ostringstream csv;
      csv << "waveform,real_mults,real_adds\n";
      for (WaveformKind kind : {WaveformKind::ofdm, WaveformKind::sc_ofdm_1d, WaveformKind::sc_nofs_1d,
                                WaveformKind::sc_ofdm_2d, WaveformKind::sc_nofs_2d}) {
        c.kind = kind;
        OpCount cost = frame_cost(c);
        csv << to_string(kind) << ',' << cost.real_mults << ',' << cost.real_adds << '\n';
      }
      emit(g, csv.str(), out);
      emit_manifest(g, args, manifest, err);
    } else if (design->parsed()) {
      Scenario s = resolve_scenario(g);
      const std::size_t m = d_m ? d_m : s.setup.config.m;
      const std::size_t q = d_q ? d_q : s.setup.config.q;
      ShapingPair pair = build_nofst(m, q);
      RandomStream rng(seed_of(s), 0xD5);
      CMatrix training(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(std::max<std::size_t>(d_training, 1)));
      for (Eigen::Index c = 0; c < training.cols(); ++c) {
        ComplexSeq col = qam_map(rng.bits(2 * m), 4);
        for (Eigen::Index r = 0; r < training.rows(); ++r) training(r, c) = col[static_cast<std::size_t>(r)];
      }
      std::optional<ShapingPair> refined;
      if (d_steps > 0) {
        try {
          refined.emplace(refine_nofst(pair, training, d_steps, d_rate));
        } catch (const OptimizationError& e) {
          err << "nofslab: refinement stopped early (" << e.what() << "); keeping the best pair\n";
          refined.emplace(e.best());
        }
      }
      const ShapingPair& final_pair = refined ? *refined : pair;
      InterferenceProfile prof = interference_profile(final_pair);
      std::ostringstream csv;
      csv << "m,q,alpha,training_mse,max_offdiag,diag_rmse,frobenius\n";
      csv << m << ',' << q << ',' << num(final_pair.alpha(), 10) << ',' << num(reconstruction_mse(final_pair, training), 10)
          << ',' << num(prof.max_offdiag, 10) << ',' << num(prof.diag_rmse, 10) << ',' << num(prof.frobenius, 10) << '\n';
      emit(g, csv.str(), out);
      if (!d_export.empty()) save_shaping_pair(d_export, final_pair);
      std::ostringstream body;
      body << "m = " << m << "\nq = " << q << "\nrefine_steps = " << d_steps << "\nrate = " << num(d_rate, 17)
           << "\ntraining = " << d_training << "\nseed = " << seed_of(s) << '\n';
      emit_manifest(g, args, body.str(), err);
    } else if (calc->parsed()) {
      const double f_rf = parse_quantity(carrier);
      std::ostringstream text;
      auto doppler_from_inputs = [&]() {
        if (!tc.empty()) return coherence_to_doppler(parse_quantity(tc));
        if (!fm.empty()) return parse_quantity(fm);
        if (!velocity.empty()) return velocity_to_doppler(parse_quantity(velocity), f_rf, c_light);
        throw ParameterError("give one of --tc, --fm, --velocity");
      };
      if (calc_doppler->parsed()) {
        text << "doppler: " << num(doppler_from_inputs()) << " Hz\n";
      } else if (calc_velocity->parsed()) {
        const double v = doppler_to_velocity(doppler_from_inputs(), f_rf, c_light);
        text << "velocity: " << num(v) << " m/s (" << num(mps_to_kmh(v)) << " km/h) at " << num(f_rf / 1e9)
             << " GHz\n";
      } else {
        text << "coherence time: " << num(doppler_to_coherence(doppler_from_inputs()) * 1e3) << " ms\n";
      }
      emit(g, text.str(), out);
      std::ostringstream body;
      body << "carrier = " << num(f_rf, 17) << "\nc = " << num(c_light, 17) << '\n';
      emit_manifest(g, args, body.str(), err);
    }
  } catch (const std::exception& e) {
    err << "nofslab: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}

}  // namespace nofs::cli

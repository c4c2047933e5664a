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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nofslab/link.hpp"

namespace nofs {

/// A named campaign: link setup plus the seeds whose results are pooled.
/// `setup.seed` is ignored in favour of `seeds` by run_campaign.
struct Scenario {
  std::string name = "custom";
  LinkSetup setup;
  std::vector<std::uint64_t> seeds{1};
};

/// "fig4-awgn" and "fig5-fading". Throws ConfigurationError for other names.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

/// Applies one "key = value" setting (keys documented in docs/formats.md).
/// Throws ParseError for unknown keys or malformed values.
void apply_setting(Scenario& scenario, const std::string& key, const std::string& value);

/// Reads "key = value" lines on top of `base`; '#' starts a comment. A
/// "preset" key, if present, must come first and replaces the base.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario(const std::string& path);

/// Writes every setting, so parse_scenario of the output reproduces the scenario exactly.
void write_scenario(std::ostream& out, const Scenario& scenario);

/// run_link once per seed, counts pooled per SNR point.
LinkReport run_campaign(const Scenario& scenario, const ShapingPair* shaping = nullptr);

/// Parses "a,b,c", "a b c" or "start:step:stop" (inclusive) into values.
std::vector<double> parse_grid(const std::string& text);

}  // namespace nofs

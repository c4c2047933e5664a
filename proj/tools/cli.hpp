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

#include <iosfwd>
#include <string>
#include <vector>

namespace nofs::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_runtime = 2 };

/// Runs the nofslab command line. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Physical quantity with an optional unit suffix, converted to SI:
/// time (s, ms, us), frequency (Hz, kHz, MHz, GHz), speed (m/s, km/h).
/// A bare number is taken as already in SI. Throws nofs::ParseError.
double parse_quantity(const std::string& text);

}  // namespace nofs::cli

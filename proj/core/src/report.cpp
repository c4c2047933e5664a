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

#include <cstdio>
#include <ostream>

#include "nofslab/link.hpp"

namespace nofs {

void write_link_csv(std::ostream& out, const LinkReport& report) {
  out << "ebn0_db,bits,errors,ber,ci_low,ci_high,real_mults,real_adds\n";
  char buf[256];
  for (const LinkPoint& p : report.points) {
    std::snprintf(buf, sizeof buf, "%.6g,%llu,%llu,%.9e,%.9e,%.9e,%llu,%llu\n", p.ebn0_db,
                  static_cast<unsigned long long>(p.bits_tested), static_cast<unsigned long long>(p.bit_errors), p.ber,
                  p.ci_low, p.ci_high, static_cast<unsigned long long>(report.frame_cost.real_mults),
                  static_cast<unsigned long long>(report.frame_cost.real_adds));
    out << buf;
  }
}

}  // namespace nofs

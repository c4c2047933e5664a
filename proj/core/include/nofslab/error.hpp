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

#include <stdexcept>
#include <string>

namespace nofs {

// Every library failure derives from Error so callers (the CLI in particular)
// can separate runtime failures from usage errors with a single catch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {  // empty input, q >= m, mismatched shapes
 public:
  using Error::Error;
};

class FramingError : public Error {  // bit or sample counts that do not fill a frame
 public:
  using Error::Error;
};

class ParameterError : public Error {  // out-of-range scalar arguments
 public:
  using Error::Error;
};

class ConfigurationError : public Error {  // inconsistent WaveformConfig / missing shaping pair
 public:
  using Error::Error;
};

class MappingError : public Error {  // more values than IFFT bins
 public:
  using Error::Error;
};

class CoverageError : public Error {  // channel realization shorter than the signal
 public:
  using Error::Error;
};

class CapacityError : public Error {  // exhaustive search beyond its size cap
 public:
  using Error::Error;
};

class ParseError : public Error {  // scenario / matrix file syntax
 public:
  using Error::Error;
};

}  // namespace nofs

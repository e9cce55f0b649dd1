//
// Copyright 2026 The symnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SYMNORM_ERRORS_HPP_
#define SYMNORM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace symnorm {

// Parameter combinations whose sketches would not fit the configured memory
// cap, or that violate a public-parameter invariant after derivation.
class InfeasibleParams : public std::runtime_error {
 public:
  explicit InfeasibleParams(const std::string& what)
      : std::runtime_error("parameters infeasible: " + what) {}
};

// A norm query whose mmc bound exceeds the M the release was built for.
class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what)
      : std::runtime_error("release not calibrated for this norm: " + what) {}
};

// Malformed stream files, configs, release files and blobs.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace symnorm

#endif  // SYMNORM_ERRORS_HPP_

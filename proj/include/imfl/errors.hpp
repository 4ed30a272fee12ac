// Copyright 2026 The imfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IMFL_ERRORS_HPP_
#define IMFL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace imfl {

// Parameter or configuration invariant violation. The message names the
// violated constraint, e.g. "plant.R: R > 0".
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Config text that is not well-formed JSON (as opposed to well-formed but
// invalid, which is ValidationError).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation at or across the x1 <= 0 singularity of the screw-pressure
// dynamics, or a non-finite dynamics evaluation.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// |L_g L_f^3 h| has shrunk below the configured epsilon: the cancellation
// law would divide by (nearly) zero.
class DegenerateDecouplingError : public std::runtime_error {
 public:
  explicit DegenerateDecouplingError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace imfl

#endif  // IMFL_ERRORS_HPP_

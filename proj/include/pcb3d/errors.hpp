// Copyright 2026 The pcb3d Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace pcb3d {

// Input violates a mathematical precondition (non-positive geometry, k >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inverse problem has no root inside the admissible bracket.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Networks sampled on different grids or referenced to different impedances.
class IncompatibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Carries the best candidate gate time so callers can still report it.
class CalibrationFailure : public std::runtime_error {
 public:
  CalibrationFailure(const std::string& what, double best_time, double best_contrast)
      : std::runtime_error(what), best_time_(best_time), best_contrast_(best_contrast) {}

  double best_time() const { return best_time_; }
  double best_contrast() const { return best_contrast_; }

 private:
  double best_time_;
  double best_contrast_;
};

// Malformed configuration document; `where` is a JSON-pointer-like location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

}  // namespace pcb3d

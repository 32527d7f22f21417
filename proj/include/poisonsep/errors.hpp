//
// Copyright 2026 The poisonsep Authors
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

#ifndef POISONSEP_ERRORS_HPP_
#define POISONSEP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace poisonsep {

// Malformed arguments: dimension mismatch, out-of-range index, bad parameter.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The call is well-formed but an operation precondition does not hold
// (e.g. asking for the budget of a feature that is already selected).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No non-support feature exists to attack.
class NoTargetError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// CSV ingestion failure. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace poisonsep

#endif  // POISONSEP_ERRORS_HPP_

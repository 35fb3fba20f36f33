// Copyright 2026 The CMSA-BIP Authors
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

#ifndef CMSA_ERROR_HPP_
#define CMSA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cmsa {

// Raised when an API is called outside its contract (bad lengths, values out
// of range, operations on an object in the wrong state).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed MPS input. `line()` is 1-based, 0 when no line applies.
class MpsFormatError : public std::runtime_error {
 public:
  MpsFormatError(const std::string& message, int line)
      : std::runtime_error(line > 0
                               ? "line " + std::to_string(line) + ": " + message
                               : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// A column that is not binary (continuous, or integer with bounds other than
// [0,1]).
class UnsupportedVariable : public MpsFormatError {
 public:
  UnsupportedVariable(const std::string& variable, const std::string& reason,
                      int line)
      : MpsFormatError("unsupported variable '" + variable + "': " + reason,
                       line),
        variable_(variable) {}

  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

}  // namespace cmsa

#endif  // CMSA_ERROR_HPP_

// Copyright 2026 The Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlcc {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Formula text that does not conform to the grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// Formula/trajectory combinations that cannot be evaluated (variable index
// out of range, time index out of range, horizon longer than the trace).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A formula inspects more samples than the trajectory provides at t = 0.
class HorizonError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

// Malformed input files or inconsistent datasets.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or hyperparameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stlcc

// Copyright 2026 The samalog Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace samalog {

/// A value lies outside the domain of an operation (nonpositive time,
/// sigma <= 0, zero probability, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inputs are individually valid but inconsistent with each other, e.g. a
/// skater's results do not match the program.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No positive time can produce the requested pointsum.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A time carries more precision than the requested output format.
class PrecisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input. `position()` is the zero-based byte offset within
/// the parsed field; `line()` is one-based and 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : std::runtime_error(what), position_(position), line_(line) {}

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

}  // namespace samalog

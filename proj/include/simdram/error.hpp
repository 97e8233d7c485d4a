// Copyright 2026 The simdram-toolchain Authors
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

namespace simdram {

/// Base class of every error raised by the toolchain.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A structurally invalid object (graph, program, layout, descriptor).
class validation_error : public error {
 public:
  using error::error;
};

/// Illegal micro-op at run time: unknown row, write to a constant row.
class execution_error : public error {
 public:
  using error::error;
};

/// Not enough data rows for a micro-program.
class allocation_error : public error {
 public:
  allocation_error(const std::string& what, std::size_t required, std::size_t available)
      : error(what), required_(required), available_(available) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t available() const noexcept { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

}  // namespace simdram

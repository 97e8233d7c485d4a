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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "simdram/error.hpp"

namespace simdram::oplib {

enum class Operation : std::uint8_t {
  and_, or_, xor_,           // N-input logic
  eq, neq, gt, max, min,     // relational
  add, sub, mul, div,        // arithmetic
  select,                    // predication
  bitcount, relu, shl, shr,  // other
};

enum class Category : std::uint8_t { n_input_logic, relational, arithmetic, predication, other };

enum class Signedness : std::uint8_t { unsigned_int, twos_complement };

struct OperationInfo {
  Operation op;
  std::string_view name;
  Category category;
};

inline constexpr OperationInfo operation_table[] = {
    {Operation::and_, "and", Category::n_input_logic},   {Operation::or_, "or", Category::n_input_logic},
    {Operation::xor_, "xor", Category::n_input_logic},   {Operation::eq, "eq", Category::relational},
    {Operation::neq, "neq", Category::relational},       {Operation::gt, "gt", Category::relational},
    {Operation::max, "max", Category::relational},       {Operation::min, "min", Category::relational},
    {Operation::add, "add", Category::arithmetic},       {Operation::sub, "sub", Category::arithmetic},
    {Operation::mul, "mul", Category::arithmetic},       {Operation::div, "div", Category::arithmetic},
    {Operation::select, "select", Category::predication}, {Operation::bitcount, "bitcount", Category::other},
    {Operation::relu, "relu", Category::other},          {Operation::shl, "shl", Category::other},
    {Operation::shr, "shr", Category::other},
};

inline const OperationInfo& info(Operation op) {
  for (const auto& i : operation_table)
    if (i.op == op) return i;
  throw validation_error("unknown operation");
}

inline std::string_view name(Operation op) { return info(op).name; }

/// A named operand (or result) of an operation: `width` bits named
/// <name>_0 .. <name>_{width-1}, LSB first.
struct Operand {
  std::string name;
  std::uint32_t width;

  friend bool operator==(const Operand&, const Operand&) = default;
};

inline std::uint32_t bitcount_width(std::uint32_t width) {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < std::uint64_t{width} + 1) ++bits;
  return bits;
}

/// Operation plus its parameters. Canonical string form (see key()):
///   <name>:w<width>[:n<N>][:signed][:s<amount>]
/// e.g. add:w8, and:w1:n4, gt:w16:signed, select:w8, shl:w8:s3.
struct OpDescriptor {
  Operation op = Operation::add;
  std::uint32_t width = 8;
  std::uint32_t n = 2;  // operand count of N-input logic
  Signedness signedness = Signedness::unsigned_int;
  std::uint32_t shift = 1;  // shl/shr amount

  Category category() const { return info(op).category; }

  bool has_signed_variant() const noexcept {
    return op == Operation::gt || op == Operation::max || op == Operation::min;
  }

  void validate() const {
    if (width < 1 || width > 64) throw validation_error("operation width must be in 1..64");
    if (category() == Category::n_input_logic && n < 2) throw validation_error("N-input logic needs N >= 2");
    if (category() == Category::n_input_logic && n > 64) throw validation_error("N-input logic supports N <= 64");
    if (signedness == Signedness::twos_complement && !has_signed_variant() && op != Operation::relu)
      throw validation_error(std::string(name(op)) + " has no signed variant");
    if ((op == Operation::shl || op == Operation::shr) && shift > width)
      throw validation_error("shift amount exceeds the width");
  }

  std::string key() const {
    std::string k = std::string(name(op)) + ":w" + std::to_string(width);
    if (category() == Category::n_input_logic) k += ":n" + std::to_string(n);
    if (signedness == Signedness::twos_complement && has_signed_variant()) k += ":signed";
    if (op == Operation::shl || op == Operation::shr) k += ":s" + std::to_string(shift);
    return k;
  }

  std::vector<Operand> operands() const {
    switch (category()) {
      case Category::n_input_logic: {
        std::vector<Operand> v;
        for (std::uint32_t i = 0; i < n; ++i) v.push_back({"x" + std::to_string(i), width});
        return v;
      }
      case Category::relational:
      case Category::arithmetic:
        return {{"a", width}, {"b", width}};
      case Category::predication:
        return {{"a", width}, {"b", width}, {"c", 1}};
      case Category::other:
        return {{"a", width}};
    }
    return {};
  }

  Operand result() const {
    switch (op) {
      case Operation::eq:
      case Operation::neq:
      case Operation::gt:
        return {"y", 1};
      case Operation::bitcount:
        return {"y", bitcount_width(width)};
      default:
        return {"y", width};
    }
  }

  friend bool operator==(const OpDescriptor&, const OpDescriptor&) = default;
};

inline OpDescriptor parse_descriptor(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  auto fail = [&](const std::string& why) -> void {
    throw parse_error("invalid operation descriptor '" + std::string(text) + "': " + why, 0, 0);
  };
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
      fail("expected a number in '" + s + "'");
    return static_cast<std::uint32_t>(std::stoul(s));
  };

  OpDescriptor d;
  bool found = false;
  for (const auto& i : operation_table) {
    if (i.name == parts[0]) {
      d.op = i.op;
      found = true;
    }
  }
  if (!found) fail("unknown operation '" + parts[0] + "'");
  if (d.op == Operation::relu) d.signedness = Signedness::twos_complement;
  bool have_width = false;
  for (std::size_t p = 1; p < parts.size(); ++p) {
    const std::string& s = parts[p];
    if (s == "signed") {
      d.signedness = Signedness::twos_complement;
    } else if (s == "unsigned") {
      d.signedness = Signedness::unsigned_int;
    } else if (!s.empty() && s[0] == 'w') {
      d.width = number(s.substr(1));
      have_width = true;
    } else if (!s.empty() && s[0] == 'n') {
      if (d.category() != Category::n_input_logic) fail("':n' applies only to and/or/xor");
      d.n = number(s.substr(1));
    } else if (!s.empty() && s[0] == 's') {
      if (d.op != Operation::shl && d.op != Operation::shr) fail("':s' applies only to shl/shr");
      d.shift = number(s.substr(1));
    } else {
      fail("unknown field '" + s + "'");
    }
  }
  if (!have_width) fail("missing width field ':w<bits>'");
  if (d.op == Operation::relu) d.signedness = Signedness::twos_complement;
  try {
    d.validate();
  } catch (const validation_error& e) {
    fail(e.what());
  }
  return d;
}

}  // namespace simdram::oplib

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

#include <bit>
#include <cstdint>
#include <span>

#include "simdram/error.hpp"
#include "simdram/oplib/descriptor.hpp"

namespace simdram::oplib {

inline std::uint64_t mask_of(std::uint32_t width) noexcept {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// Interprets the low `width` bits of x as a two's-complement number.
inline std::int64_t sign_extend(std::uint64_t x, std::uint32_t width) noexcept {
  if (width >= 64) return static_cast<std::int64_t>(x);
  const std::uint64_t sign = std::uint64_t{1} << (width - 1);
  x &= mask_of(width);
  return static_cast<std::int64_t>((x ^ sign) - sign);
}

inline bool oracle_gt(std::uint64_t a, std::uint64_t b, std::uint32_t width, Signedness s) {
  if (s == Signedness::twos_complement) return sign_extend(a, width) > sign_extend(b, width);
  return (a & mask_of(width)) > (b & mask_of(width));
}

/// Scalar reference for `d`. `operands` follow OpDescriptor::operands()
/// order; each holds its value in the low bits.
inline std::uint64_t oracle(const OpDescriptor& d, std::span<const std::uint64_t> operands) {
  if (operands.size() != d.operands().size()) throw validation_error("oracle: wrong operand count");
  const std::uint64_t m = mask_of(d.width);
  const std::uint64_t a = operands[0] & m;
  const std::uint64_t b = operands.size() > 1 ? operands[1] & m : 0;
  switch (d.op) {
    case Operation::and_:
    case Operation::or_:
    case Operation::xor_: {
      std::uint64_t acc = a;
      for (std::size_t i = 1; i < operands.size(); ++i) {
        const std::uint64_t x = operands[i] & m;
        acc = d.op == Operation::and_ ? (acc & x) : d.op == Operation::or_ ? (acc | x) : (acc ^ x);
      }
      return acc;
    }
    case Operation::eq: return a == b ? 1 : 0;
    case Operation::neq: return a != b ? 1 : 0;
    case Operation::gt: return oracle_gt(a, b, d.width, d.signedness) ? 1 : 0;
    case Operation::max: return oracle_gt(a, b, d.width, d.signedness) ? a : b;
    case Operation::min: return oracle_gt(a, b, d.width, d.signedness) ? b : a;
    case Operation::add: return (a + b) & m;
    case Operation::sub: return (a - b) & m;
    case Operation::mul: return (a * b) & m;
    case Operation::div: return b == 0 ? m : a / b;
    case Operation::select: return (operands[2] & 1) != 0 ? a : b;
    case Operation::bitcount: return static_cast<std::uint64_t>(std::popcount(a));
    case Operation::relu: return sign_extend(a, d.width) < 0 ? 0 : a;
    case Operation::shl: return d.shift >= 64 ? 0 : (a << d.shift) & m;
    case Operation::shr: return d.shift >= 64 ? 0 : a >> d.shift;
  }
  throw validation_error("oracle: unhandled operation");
}

}  // namespace simdram::oplib

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

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "simdram/error.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/oplib/descriptor.hpp"

namespace simdram::oplib {

using logic::NetlistBuilder;
using logic::Ref;
using Word = std::vector<Ref>;

namespace detail {

struct AddResult {
  Word sum;
  Ref carry;
};

/// Ripple-carry a + b + cin over equal-width words.
inline AddResult ripple_add(NetlistBuilder& b, const Word& x, const Word& y, Ref cin) {
  Word sum;
  Ref carry = cin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Ref p = b.xor_(x[i], y[i]);
    sum.push_back(b.xor_(p, carry));
    carry = b.or_(b.and_(x[i], y[i]), b.and_(p, carry));
  }
  return {std::move(sum), carry};
}

inline Word invert(NetlistBuilder& b, const Word& x) {
  Word out;
  for (Ref r : x) out.push_back(b.not_(r));
  return out;
}

/// a > b, rippling from the LSB. Signed compares flip the sign bits.
inline Ref greater_than(NetlistBuilder& b, Word x, Word y, Signedness s) {
  if (s == Signedness::twos_complement) {
    x.back() = b.not_(x.back());
    y.back() = b.not_(y.back());
  }
  Ref gt = b.constant(false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Ref here = b.and_(x[i], b.not_(y[i]));
    gt = b.or_(here, b.and_(b.xnor_(x[i], y[i]), gt));
  }
  return gt;
}

inline Word mux_word(NetlistBuilder& b, Ref sel, const Word& x, const Word& y) {
  Word out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(b.mux(sel, x[i], y[i]));
  return out;
}

/// Population count as a minimal-width binary number, by recursive halving.
inline Word popcount(NetlistBuilder& b, const Word& bits) {
  if (bits.size() == 1) return bits;
  const std::size_t half = bits.size() / 2;
  Word lo = popcount(b, Word(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(half)));
  Word hi = popcount(b, Word(bits.begin() + static_cast<std::ptrdiff_t>(half), bits.end()));
  const std::size_t w = std::max(lo.size(), hi.size());
  lo.resize(w, b.constant(false));
  hi.resize(w, b.constant(false));
  auto [sum, carry] = ripple_add(b, lo, hi, b.constant(false));
  sum.push_back(carry);
  return sum;
}

}  // namespace detail

/// Bitwise AND/OR/XOR folded across N operands x0..x{N-1}.
inline logic::LogicNetlist gen_n_input_logic(Operation kind, std::uint32_t n, std::uint32_t width) {
  if (info(kind).category != Category::n_input_logic) throw validation_error("not an N-input logic operation");
  if (n < 2) throw validation_error("N-input logic needs N >= 2");
  NetlistBuilder b;
  std::vector<Word> xs;
  for (std::uint32_t i = 0; i < n; ++i) xs.push_back(b.input_word("x" + std::to_string(i), width));
  Word acc = xs[0];
  for (std::uint32_t i = 1; i < n; ++i) {
    for (std::uint32_t k = 0; k < width; ++k) {
      switch (kind) {
        case Operation::and_: acc[k] = b.and_(acc[k], xs[i][k]); break;
        case Operation::or_: acc[k] = b.or_(acc[k], xs[i][k]); break;
        default: acc[k] = b.xor_(acc[k], xs[i][k]); break;
      }
    }
  }
  b.output_word("y", acc);
  return std::move(b).build();
}

/// eq/neq/gt produce one bit; max/min select between the operands via gt.
inline logic::LogicNetlist gen_relational(Operation kind, std::uint32_t width, Signedness s) {
  if (info(kind).category != Category::relational) throw validation_error("not a relational operation");
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  const Word y = b.input_word("b", width);
  switch (kind) {
    case Operation::eq:
    case Operation::neq: {
      Ref all = b.constant(true);
      for (std::uint32_t i = 0; i < width; ++i) all = b.and_(all, b.xnor_(x[i], y[i]));
      b.output("y_0", kind == Operation::eq ? all : b.not_(all));
      break;
    }
    case Operation::gt:
      b.output("y_0", detail::greater_than(b, x, y, s));
      break;
    case Operation::max:
    case Operation::min: {
      const Ref gt = detail::greater_than(b, x, y, s);
      b.output_word("y", kind == Operation::max ? detail::mux_word(b, gt, x, y) : detail::mux_word(b, gt, y, x));
      break;
    }
    default:
      break;
  }
  return std::move(b).build();
}

/// add/sub modulo 2^k (ripple carry), mul low k bits (shift-and-add, shifts
/// by index renaming), div unsigned quotient (restoring; x / 0 = all ones).
inline logic::LogicNetlist gen_arithmetic(Operation kind, std::uint32_t width) {
  if (info(kind).category != Category::arithmetic) throw validation_error("not an arithmetic operation");
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  const Word y = b.input_word("b", width);
  const Ref zero = b.constant(false);
  Word result;
  switch (kind) {
    case Operation::add:
      result = detail::ripple_add(b, x, y, zero).sum;
      break;
    case Operation::sub:
      result = detail::ripple_add(b, x, detail::invert(b, y), b.constant(true)).sum;
      break;
    case Operation::mul: {
      Word acc(width, zero);
      for (std::uint32_t i = 0; i < width; ++i) {
        // Partial product (a << i) & b_i: only bits i.. are non-zero.
        Word hi_acc(acc.begin() + i, acc.end());
        Word pp;
        for (std::uint32_t k = i; k < width; ++k) pp.push_back(b.and_(x[k - i], y[i]));
        const Word sum = detail::ripple_add(b, hi_acc, pp, zero).sum;
        std::copy(sum.begin(), sum.end(), acc.begin() + i);
      }
      result = acc;
      break;
    }
    case Operation::div: {
      Word rem(width, zero);
      Word quotient(width, zero);
      Word divisor = y;
      divisor.push_back(zero);
      const Word neg_divisor = detail::invert(b, divisor);
      for (std::uint32_t step = 0; step < width; ++step) {
        const std::uint32_t i = width - 1 - step;
        // shifted = (rem << 1) | a_i, one bit wider than rem.
        Word shifted{x[i]};
        shifted.insert(shifted.end(), rem.begin(), rem.end());
        const auto trial = detail::ripple_add(b, shifted, neg_divisor, b.constant(true));
        const Ref fits = trial.carry;  // no borrow: shifted >= divisor
        quotient[i] = fits;
        Word trial_low(trial.sum.begin(), trial.sum.begin() + width);
        Word shifted_low(shifted.begin(), shifted.begin() + width);
        rem = detail::mux_word(b, fits, trial_low, shifted_low);
      }
      result = quotient;
      break;
    }
    default:
      break;
  }
  b.output_word("y", result);
  return std::move(b).build();
}

/// y = c ? a : b per lane.
inline logic::LogicNetlist gen_predication(std::uint32_t width) {
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  const Word y = b.input_word("b", width);
  const Ref c = b.input("c_0");
  b.output_word("y", detail::mux_word(b, c, x, y));
  return std::move(b).build();
}

inline logic::LogicNetlist gen_bitcount(std::uint32_t width) {
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  Word count = detail::popcount(b, x);
  count.resize(bitcount_width(width), b.constant(false));
  b.output_word("y", count);
  return std::move(b).build();
}

/// Two's-complement ReLU: x with every bit cleared when the sign bit is set.
inline logic::LogicNetlist gen_relu(std::uint32_t width) {
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  const Ref keep = b.not_(x.back());
  Word y;
  for (Ref r : x) y.push_back(b.and_(r, keep));
  b.output_word("y", y);
  return std::move(b).build();
}

/// Logical shift by a constant amount; pure renaming plus constant zeros.
inline logic::LogicNetlist gen_shift(Operation kind, std::uint32_t width, std::uint32_t amount) {
  NetlistBuilder b;
  const Word x = b.input_word("a", width);
  Word y;
  for (std::uint32_t k = 0; k < width; ++k) {
    const std::int64_t src = kind == Operation::shl ? std::int64_t{k} - amount : std::int64_t{k} + amount;
    y.push_back(src >= 0 && src < width ? x[static_cast<std::size_t>(src)] : b.constant(false));
  }
  b.output_word("y", y);
  return std::move(b).build();
}

/// Netlist of the operation named by `d`.
inline logic::LogicNetlist generate(const OpDescriptor& d) {
  d.validate();
  switch (d.category()) {
    case Category::n_input_logic: return gen_n_input_logic(d.op, d.n, d.width);
    case Category::relational: return gen_relational(d.op, d.width, d.signedness);
    case Category::arithmetic: return gen_arithmetic(d.op, d.width);
    case Category::predication: return gen_predication(d.width);
    case Category::other:
      if (d.op == Operation::bitcount) return gen_bitcount(d.width);
      if (d.op == Operation::relu) return gen_relu(d.width);
      return gen_shift(d.op, d.width, d.shift);
  }
  throw validation_error("unhandled operation");
}

}  // namespace simdram::oplib

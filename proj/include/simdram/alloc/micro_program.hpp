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
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simdram/alloc/row_space.hpp"
#include "simdram/error.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/subarray/cost_model.hpp"

namespace simdram {

/// One row-level command of a micro-program.
struct MicroOp {
  OpKind kind = OpKind::copy;
  Row src{};
  Row dst{};
  bool immediate = false;     // CIMM value
  std::uint32_t triple = 0;   // MAJ triple (0 = T0..T2, 1 = T3..T5)

  static constexpr MicroOp copy(Row s, Row d) noexcept { return {OpKind::copy, s, d, false, 0}; }
  static constexpr MicroOp copy_neg(Row s, Row d) noexcept { return {OpKind::copy_neg, s, d, false, 0}; }
  static constexpr MicroOp copy_imm(bool v, Row d) noexcept {
    return {OpKind::copy_imm, v ? Row::ones() : Row::zeros(), d, v, 0};
  }
  static constexpr MicroOp maj(std::uint32_t t) noexcept { return {OpKind::maj, Row{}, Row{}, false, t}; }

  friend constexpr bool operator==(const MicroOp&, const MicroOp&) noexcept = default;
};

inline std::string to_string(const MicroOp& op) {
  switch (op.kind) {
    case OpKind::copy: return "COPY " + to_string(op.src) + " " + to_string(op.dst);
    case OpKind::copy_neg: return "CNEG " + to_string(op.src) + " " + to_string(op.dst);
    case OpKind::copy_imm: return std::string("CIMM ") + (op.immediate ? "1" : "0") + " " + to_string(op.dst);
    case OpKind::maj: {
      const std::uint32_t b = 3 * op.triple;
      return "MAJ " + to_string(Row::compute(b)) + " " + to_string(Row::compute(b + 1)) + " " +
             to_string(Row::compute(b + 2));
    }
  }
  return "?";
}

struct RowBinding {
  std::string name;
  std::uint32_t row;  // data row index

  friend bool operator==(const RowBinding&, const RowBinding&) = default;
};

/// Ordered micro-ops over a program-local row space. Data rows are numbered
/// inputs first, then outputs, then scratch rows.
struct MicroProgram {
  std::string label;  // operation key or source name; informational
  std::vector<MicroOp> ops;
  std::vector<RowBinding> input_bindings;
  std::vector<RowBinding> output_bindings;
  std::uint32_t rows_used = 0;
  std::uint64_t activation_cost = 0;

  std::optional<std::uint32_t> input_row(std::string_view name) const {
    for (const auto& b : input_bindings)
      if (b.name == name) return b.row;
    return std::nullopt;
  }
  std::optional<std::uint32_t> output_row(std::string_view name) const {
    for (const auto& b : output_bindings)
      if (b.name == name) return b.row;
    return std::nullopt;
  }

  friend bool operator==(const MicroProgram&, const MicroProgram&) = default;
};

/// Sum of per-op activation weights.
inline std::uint64_t cost(const MicroProgram& p, const CostModel& model = {}) {
  std::uint64_t total = 0;
  for (const auto& op : p.ops) total += model.weight(op.kind);
  return total;
}

/// Text dump: header lines (`op`, `rows`, `input`, `output`) followed by one
/// micro-op per line.
inline std::string to_text(const MicroProgram& p) {
  std::ostringstream os;
  os << "# micro-program, " << p.ops.size() << " ops, activation cost " << p.activation_cost << '\n';
  if (!p.label.empty()) os << "op " << p.label << '\n';
  os << "rows " << p.rows_used << '\n';
  for (const auto& b : p.input_bindings) os << "input " << b.name << " r" << b.row << '\n';
  for (const auto& b : p.output_bindings) os << "output " << b.name << " r" << b.row << '\n';
  for (const auto& op : p.ops) os << to_string(op) << '\n';
  return os.str();
}

inline MicroProgram parse_micro_program(std::string_view text, const CostModel& model = {}) {
  MicroProgram p;
  logic::detail::for_each_statement(text, [&](const std::vector<logic::detail::Token>& t, std::size_t line) {
    auto fail = [&](const std::string& msg) { throw parse_error(msg, line, t[0].column); };
    auto row = [&](std::size_t i) {
      try {
        return parse_row(t[i].text);
      } catch (const parse_error& e) {
        throw parse_error(e.what(), line, t[i].column);
      }
    };
    auto data_row = [&](std::size_t i) {
      const Row r = row(i);
      if (r.kind != RowKind::data) fail("bindings must name data rows");
      return r.index;
    };
    const std::string& head = t[0].text;
    if (head == "op") {
      if (t.size() != 2) fail("expected 'op <key>'");
      p.label = t[1].text;
    } else if (head == "rows") {
      if (t.size() != 2) fail("expected 'rows <count>'");
      try {
        p.rows_used = static_cast<std::uint32_t>(std::stoul(t[1].text));
      } catch (const std::exception&) {
        fail("invalid row count");
      }
    } else if (head == "input" || head == "output") {
      if (t.size() != 3) fail("expected '" + head + " <name> r<row>'");
      (head == "input" ? p.input_bindings : p.output_bindings).push_back({t[1].text, data_row(2)});
    } else if (head == "COPY" || head == "CNEG") {
      if (t.size() != 3) fail("expected '" + head + " <src> <dst>'");
      p.ops.push_back(head == "COPY" ? MicroOp::copy(row(1), row(2)) : MicroOp::copy_neg(row(1), row(2)));
    } else if (head == "CIMM") {
      if (t.size() != 3 || (t[1].text != "0" && t[1].text != "1")) fail("expected 'CIMM 0|1 <dst>'");
      p.ops.push_back(MicroOp::copy_imm(t[1].text == "1", row(2)));
    } else if (head == "MAJ") {
      if (t.size() != 4) fail("expected 'MAJ T<i> T<i+1> T<i+2>'");
      const Row a = row(1), b = row(2), c = row(3);
      if (a.kind != RowKind::compute || a.index % 3 != 0 || b != Row::compute(a.index + 1) ||
          c != Row::compute(a.index + 2))
        fail("MAJ must name one compute triple in order");
      p.ops.push_back(MicroOp::maj(a.index / 3));
    } else {
      fail("unknown statement '" + head + "'");
    }
  });
  p.activation_cost = cost(p, model);
  return p;
}

/// Structural checks against a row space: rows exist, no writes to constant
/// rows, MAJ names an existing triple, bindings fit rows_used.
inline void validate_program(const MicroProgram& p, const RowSpace& space) {
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const MicroOp& op = p.ops[i];
    const std::string where = "op #" + std::to_string(i) + " (" + to_string(op) + "): ";
    if (op.kind == OpKind::maj) {
      if (op.triple >= space.compute_triples) throw validation_error(where + "no such compute triple");
      continue;
    }
    if (!space.contains(op.src) || !space.contains(op.dst)) throw validation_error(where + "unknown row");
    if (op.dst.is_constant()) throw validation_error(where + "write to constant row");
    if (op.dst.kind == RowKind::data && op.dst.index >= p.rows_used)
      throw validation_error(where + "destination beyond rows_used");
  }
  for (const auto& b : p.input_bindings)
    if (b.row >= p.rows_used) throw validation_error("input binding beyond rows_used");
  for (const auto& b : p.output_bindings)
    if (b.row >= p.rows_used) throw validation_error("output binding beyond rows_used");
}

/// Index of the first op that reads a row before anything wrote it, or
/// op count if the program ends without writing some output row. Input rows,
/// constant rows and (for MAJ) nothing else count as initially written.
inline std::optional<std::size_t> find_read_before_write(const MicroProgram& p, const RowSpace& space) {
  std::vector<char> written(space.total_rows(), 0);
  for (const auto& b : p.input_bindings) written[space.physical(Row::data(b.row))] = 1;
  written[space.physical(Row::zeros())] = 1;
  written[space.physical(Row::ones())] = 1;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const MicroOp& op = p.ops[i];
    if (op.kind == OpKind::maj) {
      for (std::uint32_t k = 0; k < 3; ++k)
        if (!written[space.physical(Row::compute(3 * op.triple + k))]) return i;
      continue;
    }
    if (op.kind != OpKind::copy_imm && !written[space.physical(op.src)]) return i;
    written[space.physical(op.dst)] = 1;
  }
  for (const auto& b : p.output_bindings)
    if (!written[space.physical(Row::data(b.row))]) return p.ops.size();
  return std::nullopt;
}

}  // namespace simdram

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

#include "simdram/error.hpp"

namespace simdram {

enum class RowKind : std::uint8_t { data, compute, negation, constant };

/// Symbolic row address: r<i> data, T<i> compute, N<i> negation, C0/C1.
struct Row {
  RowKind kind = RowKind::data;
  std::uint32_t index = 0;

  static constexpr Row data(std::uint32_t i) noexcept { return {RowKind::data, i}; }
  static constexpr Row compute(std::uint32_t i) noexcept { return {RowKind::compute, i}; }
  static constexpr Row negation(std::uint32_t i) noexcept { return {RowKind::negation, i}; }
  static constexpr Row zeros() noexcept { return {RowKind::constant, 0}; }
  static constexpr Row ones() noexcept { return {RowKind::constant, 1}; }

  constexpr bool is_constant() const noexcept { return kind == RowKind::constant; }

  friend constexpr auto operator<=>(Row, Row) noexcept = default;
};

inline std::string to_string(Row r) {
  switch (r.kind) {
    case RowKind::data: return "r" + std::to_string(r.index);
    case RowKind::compute: return "T" + std::to_string(r.index);
    case RowKind::negation: return "N" + std::to_string(r.index);
    case RowKind::constant: return "C" + std::to_string(r.index);
  }
  return "?";
}

inline Row parse_row(std::string_view text) {
  if (text.size() < 2) throw parse_error("invalid row '" + std::string(text) + "'", 0, 0);
  RowKind kind;
  switch (text[0]) {
    case 'r': kind = RowKind::data; break;
    case 'T': kind = RowKind::compute; break;
    case 'N': kind = RowKind::negation; break;
    case 'C': kind = RowKind::constant; break;
    default: throw parse_error("invalid row '" + std::string(text) + "'", 0, 0);
  }
  std::uint32_t index = 0;
  for (char c : text.substr(1)) {
    if (c < '0' || c > '9') throw parse_error("invalid row '" + std::string(text) + "'", 0, 0);
    index = index * 10 + static_cast<std::uint32_t>(c - '0');
  }
  if (kind == RowKind::constant && index > 1) throw parse_error("invalid constant row '" + std::string(text) + "'", 0, 0);
  return Row{kind, index};
}

/// Partition of a subarray's rows. Physical order: data rows, compute rows
/// (grouped in triples), negation rows, C0, C1.
struct RowSpace {
  std::uint32_t data_rows = 1014;
  std::uint32_t compute_triples = 2;
  std::uint32_t negation_rows = 2;

  static RowSpace with_total_rows(std::uint32_t total, std::uint32_t triples = 2, std::uint32_t negation = 2) {
    const std::uint32_t reserved = 3 * triples + negation + 2;
    if (total <= reserved) throw validation_error("row count too small for the reserved rows");
    return RowSpace{total - reserved, triples, negation};
  }

  std::uint32_t compute_rows() const noexcept { return 3 * compute_triples; }
  std::uint32_t total_rows() const noexcept { return data_rows + compute_rows() + negation_rows + 2; }

  bool contains(Row r) const noexcept {
    switch (r.kind) {
      case RowKind::data: return r.index < data_rows;
      case RowKind::compute: return r.index < compute_rows();
      case RowKind::negation: return r.index < negation_rows;
      case RowKind::constant: return r.index < 2;
    }
    return false;
  }

  std::uint32_t physical(Row r) const {
    if (!contains(r)) throw execution_error("unknown row " + to_string(r));
    switch (r.kind) {
      case RowKind::data: return r.index;
      case RowKind::compute: return data_rows + r.index;
      case RowKind::negation: return data_rows + compute_rows() + r.index;
      case RowKind::constant: return data_rows + compute_rows() + negation_rows + r.index;
    }
    return 0;
  }

  void validate() const {
    if (compute_triples == 0) throw validation_error("row space needs at least one compute triple");
    if (negation_rows == 0) throw validation_error("row space needs at least one negation row");
  }

  friend bool operator==(const RowSpace&, const RowSpace&) = default;
};

}  // namespace simdram

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
#include <set>
#include <string>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/row_space.hpp"
#include "simdram/error.hpp"
#include "simdram/layout/transpose.hpp"
#include "simdram/subarray/subarray.hpp"

namespace simdram::layout {

/// Binds a vector of k-bit elements to k rows (LSB first) and a contiguous
/// lane range of a subarray. A row may be C0 in a shifted view.
struct ElementLayout {
  std::uint32_t width_bits = 0;
  std::vector<Row> rows;
  std::size_t lane_first = 0;
  std::size_t lane_count = 0;

  static ElementLayout contiguous(std::uint32_t first_row, std::uint32_t width, std::size_t lanes,
                                  std::size_t lane_first = 0) {
    ElementLayout l{width, {}, lane_first, lanes};
    for (std::uint32_t i = 0; i < width; ++i) l.rows.push_back(Row::data(first_row + i));
    return l;
  }

  /// Checks the layout against a row space. Views may read C0; a writable
  /// layout must consist of distinct data rows.
  void validate(const RowSpace& space, std::size_t lanes, bool writable) const {
    if (width_bits == 0 || width_bits > max_element_width) throw validation_error("layout width must be in 1..64");
    if (rows.size() != width_bits) throw validation_error("layout row count does not match its width");
    if (lane_first + lane_count > lanes) throw validation_error("layout lanes exceed the subarray");
    std::set<Row> seen;
    for (const Row r : rows) {
      if (r == Row::zeros() && !writable) continue;
      if (r.kind != RowKind::data || !space.contains(r))
        throw validation_error("layout row " + to_string(r) + " is outside the data partition");
      if (!seen.insert(r).second) throw validation_error("layout row " + to_string(r) + " appears twice");
    }
  }

  bool overlaps(const ElementLayout& o) const {
    for (const Row a : rows)
      for (const Row b : o.rows)
        if (a == b && a.kind == RowKind::data) return true;
    return false;
  }

  friend bool operator==(const ElementLayout&, const ElementLayout&) = default;
};

/// Logical shift by renaming rows: positive `amount` shifts left (bit k reads
/// the row of bit k - amount), negative shifts right. Vacated bits read C0.
inline ElementLayout row_shift_view(const ElementLayout& layout, int amount) {
  const auto w = static_cast<int>(layout.width_bits);
  if (amount <= -w || amount >= w)
    throw validation_error("shift amount " + std::to_string(amount) + " out of range for width " + std::to_string(w));
  ElementLayout view = layout;
  for (int k = 0; k < w; ++k) {
    const int src = k - amount;
    view.rows[static_cast<std::size_t>(k)] =
        (src >= 0 && src < w) ? layout.rows[static_cast<std::size_t>(src)] : Row::zeros();
  }
  return view;
}

/// Micro-ops shifting the layout's value in place by row copies. Left shifts
/// copy row j to row j + amount, highest row first; vacated rows get CIMM 0.
/// |amount| may equal the width, which clears the value.
inline std::vector<MicroOp> materialize_shift(const SubarrayState& state, const ElementLayout& layout, int amount) {
  layout.validate(state.space(), state.lanes(), true);
  const auto w = static_cast<int>(layout.width_bits);
  if (amount < -w || amount > w)
    throw validation_error("shift amount " + std::to_string(amount) + " out of range for width " + std::to_string(w));
  std::vector<MicroOp> ops;
  auto row = [&](int i) { return layout.rows[static_cast<std::size_t>(i)]; };
  if (amount >= 0) {
    for (int j = w - 1; j >= amount; --j) ops.push_back(MicroOp::copy(row(j - amount), row(j)));
    for (int j = 0; j < amount; ++j) ops.push_back(MicroOp::copy_imm(false, row(j)));
  } else {
    const int s = -amount;
    for (int j = 0; j + s < w; ++j) ops.push_back(MicroOp::copy(row(j + s), row(j)));
    for (int j = w - s; j < w; ++j) ops.push_back(MicroOp::copy_imm(false, row(j)));
  }
  return ops;
}

/// Writes a tile into the layout's rows and lanes (host data path, no
/// accounting).
inline void load_tile(SubarrayState& state, const VerticalTile& tile, const ElementLayout& at) {
  at.validate(state.space(), state.lanes(), true);
  if (tile.width_bits != at.width_bits) throw validation_error("tile width does not match layout width");
  if (tile.lanes != at.lane_count) throw validation_error("tile lanes do not match layout lanes");
  if (tile.rows.size() != tile.width_bits) throw validation_error("malformed tile");
  std::vector<std::uint64_t> buf(state.words());
  for (std::uint32_t i = 0; i < at.width_bits; ++i) {
    const auto current = state.row(at.rows[i]);
    std::copy(current.begin(), current.end(), buf.begin());
    if (at.lane_first % 64 == 0) {
      const std::size_t w0 = at.lane_first / 64;
      for (std::size_t w = 0; w < tile.words(); ++w) {
        const std::size_t remaining = at.lane_count - w * 64;
        const std::uint64_t mask = remaining >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << remaining) - 1;
        buf[w0 + w] = (buf[w0 + w] & ~mask) | (tile.rows[i][w] & mask);
      }
    } else {
      for (std::size_t j = 0; j < at.lane_count; ++j) {
        const std::size_t lane = at.lane_first + j;
        const std::uint64_t m = std::uint64_t{1} << (lane % 64);
        buf[lane / 64] = tile.bit(i, j) ? (buf[lane / 64] | m) : (buf[lane / 64] & ~m);
      }
    }
    state.write_row(at.rows[i], buf);
  }
}

/// Reads the layout's rows and lanes back into a tile. Views are allowed.
inline VerticalTile store_tile(const SubarrayState& state, const ElementLayout& at) {
  at.validate(state.space(), state.lanes(), false);
  VerticalTile tile{at.width_bits, at.lane_count, {}};
  tile.rows.assign(at.width_bits, std::vector<std::uint64_t>(tile.words(), 0));
  for (std::uint32_t i = 0; i < at.width_bits; ++i) {
    const auto src = state.row(at.rows[i]);
    if (at.lane_first % 64 == 0) {
      const std::size_t w0 = at.lane_first / 64;
      for (std::size_t w = 0; w < tile.words(); ++w) tile.rows[i][w] = src[w0 + w];
      if (at.lane_count % 64 != 0) tile.rows[i].back() &= (std::uint64_t{1} << (at.lane_count % 64)) - 1;
    } else {
      for (std::size_t j = 0; j < at.lane_count; ++j) {
        const std::size_t lane = at.lane_first + j;
        if ((src[lane / 64] >> (lane % 64)) & 1u) tile.rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
  return tile;
}

}  // namespace simdram::layout

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
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simdram/error.hpp"

namespace simdram::layout {

inline constexpr std::uint32_t max_element_width = 64;

inline std::uint64_t width_mask(std::uint32_t width) noexcept {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// Conventional word-per-element data.
struct HorizontalBuffer {
  std::uint32_t width_bits = 0;
  std::vector<std::uint64_t> elements;

  void validate() const {
    if (width_bits == 0 || width_bits > max_element_width)
      throw validation_error("element width must be in 1..64, got " + std::to_string(width_bits));
    const std::uint64_t mask = width_mask(width_bits);
    for (std::size_t j = 0; j < elements.size(); ++j)
      if ((elements[j] & ~mask) != 0)
        throw validation_error("element " + std::to_string(j) + " does not fit in " + std::to_string(width_bits) +
                               " bits");
  }

  friend bool operator==(const HorizontalBuffer&, const HorizontalBuffer&) = default;
};

/// Bit-per-row data: rows[i] holds bit i (LSB first) of every element, one
/// element per lane, packed 64 lanes per word.
struct VerticalTile {
  std::uint32_t width_bits = 0;
  std::size_t lanes = 0;
  std::vector<std::vector<std::uint64_t>> rows;

  std::size_t words() const noexcept { return (lanes + 63) / 64; }

  bool bit(std::uint32_t row, std::size_t lane) const {
    return ((rows.at(row)[lane / 64] >> (lane % 64)) & 1u) != 0;
  }

  friend bool operator==(const VerticalTile&, const VerticalTile&) = default;
};

/// In-place transpose of a 64x64 bit matrix: bit c of word r moves to bit r
/// of word c.
inline void transpose64(std::array<std::uint64_t, 64>& a) noexcept {
  std::uint64_t mask = 0x00000000FFFFFFFFull;
  for (unsigned j = 32; j != 0; j >>= 1, mask ^= (mask << j)) {
    for (unsigned k = 0; k < 64; k = ((k | j) + 1) & ~j) {
      const std::uint64_t t = ((a[k] >> j) ^ a[k | j]) & mask;
      a[k] ^= t << j;
      a[k | j] ^= t;
    }
  }
}

/// Horizontal -> vertical, 64 elements at a time.
inline VerticalTile transpose(const HorizontalBuffer& h) {
  h.validate();
  VerticalTile v{h.width_bits, h.elements.size(), {}};
  const std::size_t words = v.words();
  v.rows.assign(h.width_bits, std::vector<std::uint64_t>(words, 0));
  std::array<std::uint64_t, 64> block{};
  for (std::size_t w = 0; w < words; ++w) {
    block.fill(0);
    const std::size_t base = w * 64;
    const std::size_t count = std::min<std::size_t>(64, h.elements.size() - base);
    for (std::size_t j = 0; j < count; ++j) block[j] = h.elements[base + j];
    transpose64(block);
    for (std::uint32_t i = 0; i < h.width_bits; ++i) v.rows[i][w] = block[i];
  }
  return v;
}

/// Vertical -> horizontal; exact inverse of transpose.
inline HorizontalBuffer untranspose(const VerticalTile& v) {
  if (v.width_bits == 0 || v.width_bits > max_element_width)
    throw validation_error("tile width must be in 1..64");
  if (v.rows.size() != v.width_bits) throw validation_error("tile row count does not match its width");
  HorizontalBuffer h{v.width_bits, std::vector<std::uint64_t>(v.lanes, 0)};
  std::array<std::uint64_t, 64> block{};
  for (std::size_t w = 0; w < v.words(); ++w) {
    block.fill(0);
    for (std::uint32_t i = 0; i < v.width_bits; ++i) block[i] = v.rows[i].at(w);
    transpose64(block);
    const std::size_t base = w * 64;
    const std::size_t count = std::min<std::size_t>(64, v.lanes - base);
    for (std::size_t j = 0; j < count; ++j) h.elements[base + j] = block[j];
  }
  return h;
}

}  // namespace simdram::layout

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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <vector>

#include "simdram/layout/buffer_io.hpp"
#include "simdram/layout/element_layout.hpp"
#include "simdram/layout/transpose.hpp"
#include "simdram/subarray/subarray.hpp"

namespace {

using namespace simdram;
using namespace simdram::layout;

const RowSpace kSpace = RowSpace::with_total_rows(160);

std::vector<std::uint64_t> random_elements(std::mt19937_64& rng, std::size_t n, std::uint32_t width) {
  const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng() & mask;
  return v;
}

// Element j as read bit by bit from the tile, LSB in row 0.
std::uint64_t column(const VerticalTile& t, std::size_t j) {
  std::uint64_t x = 0;
  for (std::uint32_t i = 0; i < t.width_bits; ++i) x |= std::uint64_t{t.bit(i, j)} << i;
  return x;
}

std::vector<std::uint64_t> read_values(const SubarrayState& s, const ElementLayout& l) {
  return untranspose(store_tile(s, l)).elements;
}

TEST(Transpose, TwoBitExample) {
  const auto t = transpose({2, {1, 2}});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], std::vector<std::uint64_t>{0b01});
  EXPECT_EQ(t.rows[1], std::vector<std::uint64_t>{0b10});
  EXPECT_EQ(untranspose(t), (HorizontalBuffer{2, {1, 2}}));
}

TEST(Transpose, ZerosStayZero) {
  const auto t = transpose({16, std::vector<std::uint64_t>(300, 0)});
  for (const auto& r : t.rows)
    for (auto w : r) EXPECT_EQ(w, 0u);
}

TEST(Transpose, ColumnsReconstructElements) {
  std::mt19937_64 rng(1);
  const HorizontalBuffer h{32, random_elements(rng, 1000, 32)};
  const auto t = transpose(h);
  EXPECT_EQ(t.lanes, 1000u);
  EXPECT_EQ(t.words(), 16u);
  for (std::size_t j = 0; j < h.elements.size(); ++j) ASSERT_EQ(column(t, j), h.elements[j]) << j;
}

TEST(Transpose, SingleLaneTile) {
  const VerticalTile t{4, 1, {{1}, {1}, {0}, {0}}};
  EXPECT_EQ(untranspose(t).elements, std::vector<std::uint64_t>{3});
}

TEST(Transpose, RoundTripAcrossShapes) {
  std::mt19937_64 rng(2);
  for (std::uint32_t w = 1; w <= 64; ++w) {
    for (std::size_t n : {0u, 1u, 3u, 63u, 64u, 65u, 1000u}) {
      const HorizontalBuffer h{w, random_elements(rng, n, w)};
      const auto t = transpose(h);
      ASSERT_EQ(untranspose(t), h) << "w=" << w << " n=" << n;
      ASSERT_EQ(transpose(untranspose(t)), t);
    }
  }
}

TEST(Transpose, BlockTransposeIsAnInvolution) {
  std::mt19937_64 rng(3);
  std::array<std::uint64_t, 64> a{};
  for (auto& x : a) x = rng();
  auto b = a;
  transpose64(b);
  for (unsigned r = 0; r < 64; ++r)
    for (unsigned c = 0; c < 64; ++c) ASSERT_EQ((b[c] >> r) & 1, (a[r] >> c) & 1);
  transpose64(b);
  EXPECT_EQ(a, b);
}

TEST(Transpose, Validation) {
  EXPECT_THROW(transpose({4, {16}}), validation_error);
  EXPECT_THROW(transpose({0, {}}), validation_error);
  EXPECT_THROW(transpose({65, {}}), validation_error);
  EXPECT_THROW(untranspose(VerticalTile{2, 1, {{1}}}), validation_error);
  EXPECT_EQ(width_mask(64), ~std::uint64_t{0});
  EXPECT_EQ(width_mask(3), 7u);
}

TEST(Tiles, LoadThenStore) {
  std::mt19937_64 rng(4);
  SubarrayState s(kSpace, 300);
  const auto tile = transpose({4, random_elements(rng, 300, 4)});
  const auto at = ElementLayout::contiguous(5, 4, 300);
  load_tile(s, tile, at);
  EXPECT_EQ(store_tile(s, at), tile);
  for (std::uint32_t i = 0; i < 4; ++i) {
    const auto raw = s.row(Row::data(5 + i));
    EXPECT_EQ(std::vector<std::uint64_t>(raw.begin(), raw.end()), tile.rows[i]);
  }
}

TEST(Tiles, DisjointLayoutsDoNotInterfere) {
  std::mt19937_64 rng(5);
  SubarrayState s(kSpace, 128);
  const HorizontalBuffer a{8, random_elements(rng, 128, 8)};
  const HorizontalBuffer b{8, random_elements(rng, 128, 8)};
  const auto la = ElementLayout::contiguous(0, 8, 128);
  const auto lb = ElementLayout::contiguous(8, 8, 128);
  EXPECT_FALSE(la.overlaps(lb));
  EXPECT_TRUE(la.overlaps(ElementLayout::contiguous(7, 2, 128)));
  load_tile(s, transpose(a), la);
  load_tile(s, transpose(b), lb);
  EXPECT_EQ(read_values(s, la), a.elements);
  EXPECT_EQ(read_values(s, lb), b.elements);
}

TEST(Tiles, LaneRangesLeaveOtherLanesAlone) {
  std::mt19937_64 rng(6);
  SubarrayState s(kSpace, 200);
  const auto full = ElementLayout::contiguous(0, 6, 200);
  const HorizontalBuffer base{6, random_elements(rng, 200, 6)};
  load_tile(s, transpose(base), full);
  for (std::size_t first : {0u, 64u, 37u}) {
    const HorizontalBuffer part{6, random_elements(rng, 50, 6)};
    const auto at = ElementLayout::contiguous(0, 6, 50, first);
    load_tile(s, transpose(part), at);
    EXPECT_EQ(read_values(s, at), part.elements);
    auto expected = base.elements;
    std::copy(part.elements.begin(), part.elements.end(), expected.begin() + static_cast<std::ptrdiff_t>(first));
    EXPECT_EQ(read_values(s, full), expected);
    load_tile(s, transpose(base), full);
  }
}

TEST(Tiles, ShapeChecks) {
  SubarrayState s(kSpace, 64);
  const auto tile = transpose({4, std::vector<std::uint64_t>(64, 1)});
  EXPECT_THROW(load_tile(s, tile, ElementLayout::contiguous(0, 8, 64)), validation_error);
  EXPECT_THROW(load_tile(s, tile, ElementLayout::contiguous(0, 4, 32)), validation_error);
  EXPECT_THROW(load_tile(s, tile, ElementLayout::contiguous(kSpace.data_rows - 2, 4, 64)), validation_error);
  EXPECT_THROW(load_tile(s, tile, ElementLayout::contiguous(0, 4, 64, 10)), validation_error);
  ElementLayout dup = ElementLayout::contiguous(0, 4, 64);
  dup.rows[3] = dup.rows[0];
  EXPECT_THROW(load_tile(s, tile, dup), validation_error);
}

TEST(ShiftView, RemapsRows) {
  const auto l = ElementLayout::contiguous(10, 8, 64);
  const auto v = row_shift_view(l, 1);
  EXPECT_EQ(v.rows[0], Row::zeros());
  for (int k = 1; k < 8; ++k) EXPECT_EQ(v.rows[k], l.rows[k - 1]);
  EXPECT_EQ(row_shift_view(l, 0), l);
  const auto r = row_shift_view(l, -3);
  EXPECT_EQ(r.rows[0], l.rows[3]);
  EXPECT_EQ(r.rows[7], Row::zeros());
  EXPECT_THROW(row_shift_view(l, 8), validation_error);
  EXPECT_THROW(row_shift_view(l, -8), validation_error);
}

TEST(ShiftView, FiveBecomesTen) {
  SubarrayState s(kSpace, 1);
  const auto l = ElementLayout::contiguous(0, 4, 1);
  load_tile(s, transpose({4, {5}}), l);
  EXPECT_EQ(read_values(s, row_shift_view(l, 1)), std::vector<std::uint64_t>{10});
  run(s, materialize_shift(s, l, 1));
  EXPECT_EQ(read_values(s, l), std::vector<std::uint64_t>{10});
}

TEST(MaterializeShift, OpCounts) {
  SubarrayState s(kSpace, 64);
  const auto l = ElementLayout::contiguous(0, 4, 64);
  const auto ops = materialize_shift(s, l, 1);
  ASSERT_EQ(ops.size(), 4u);
  EXPECT_EQ(std::count_if(ops.begin(), ops.end(), [](const MicroOp& o) { return o.kind == OpKind::copy; }), 3);
  EXPECT_EQ(std::count_if(ops.begin(), ops.end(), [](const MicroOp& o) { return o.kind == OpKind::copy_imm; }), 1);
  EXPECT_THROW(materialize_shift(s, l, 5), validation_error);
}

TEST(MaterializeShift, ShiftByWidthClears) {
  std::mt19937_64 rng(7);
  SubarrayState s(kSpace, 100);
  const auto l = ElementLayout::contiguous(3, 8, 100);
  load_tile(s, transpose({8, random_elements(rng, 100, 8)}), l);
  run(s, materialize_shift(s, l, 8));
  EXPECT_EQ(read_values(s, l), std::vector<std::uint64_t>(100, 0));
}

TEST(MaterializeShift, MatchesScalarShifts) {
  std::mt19937_64 rng(8);
  const auto x = random_elements(rng, 500, 16);
  for (int amount : {3, -3, 0, 15, -15}) {
    SubarrayState s(kSpace, 500);
    const auto l = ElementLayout::contiguous(20, 16, 500);
    load_tile(s, transpose({16, x}), l);
    const auto view = amount > -16 && amount < 16 ? read_values(s, row_shift_view(l, amount)) : x;
    run(s, materialize_shift(s, l, amount));
    const auto got = read_values(s, l);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const std::uint64_t want = amount >= 0 ? (x[j] << amount) & 0xFFFF : x[j] >> -amount;
      ASSERT_EQ(got[j], want) << "amount " << amount;
      ASSERT_EQ(view[j], want) << "amount " << amount;
    }
  }
}

TEST(BufferIo, CsvParsing) {
  EXPECT_EQ(parse_csv_elements("1,2, 3\n4\n\n5"), (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_csv_elements("18446744073709551615"), std::vector<std::uint64_t>{~std::uint64_t{0}});
  EXPECT_TRUE(parse_csv_elements("").empty());
  try {
    parse_csv_elements("1\n2,x3");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_csv_elements("-1"), parse_error);
  EXPECT_THROW(parse_csv_elements("18446744073709551616"), parse_error);
}

TEST(BufferIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "simdram_buffer_io";
  std::filesystem::create_directories(dir);
  const std::vector<std::uint64_t> v{0, 1, 255, 0x0123456789ABCDEFull, ~std::uint64_t{0}};
  for (const char* name : {"v.csv", "v.bin"}) {
    const auto path = (dir / name).string();
    write_elements(path, v);
    EXPECT_EQ(read_elements(path), v) << name;
  }
  EXPECT_EQ(std::filesystem::file_size(dir / "v.bin"), 40u);
  std::ifstream bin(dir / "v.bin", std::ios::binary);
  std::vector<unsigned char> bytes(40);
  bin.read(reinterpret_cast<char*>(bytes.data()), 40);
  EXPECT_EQ(bytes[24], 0xEF);  // little-endian
  EXPECT_EQ(bytes[31], 0x01);
  EXPECT_THROW(read_elements((dir / "missing.csv").string()), error);
  std::filesystem::remove_all(dir);
}

}  // namespace

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
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/error.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/logic/truth_table.hpp"
#include "simdram/subarray/subarray.hpp"

namespace simdram {

struct VerifyOptions {
  /// Random valuations when the graph has more than 16 inputs.
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
};

struct VerifyResult {
  bool ok = true;
  std::size_t cases_checked = 0;
  /// First failing valuation, one bit per graph input in declaration order.
  std::optional<std::vector<bool>> counterexample;
  std::string failing_output;
};

/// Runs `p` on a simulated subarray with one lane per input valuation and
/// compares its output rows with `g`. Exhaustive up to 16 inputs, random
/// valuations beyond. Rows that are not inputs start out holding random bits,
/// so a read of a row the program never wrote shows up as a mismatch.
inline VerifyResult verify_program(const MicroProgram& p, const logic::MajGraph& g, const VerifyOptions& opt = {}) {
  const std::size_t n = g.input_count();
  std::vector<std::uint32_t> in_rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = p.input_row(g.input_names()[i]);
    if (!r) throw validation_error("verify_program: program has no row for input '" + g.input_names()[i] + "'");
    in_rows[i] = *r;
  }
  std::vector<std::uint32_t> out_rows(g.output_count());
  for (std::size_t o = 0; o < g.output_count(); ++o) {
    const auto r = p.output_row(g.outputs()[o].name);
    if (!r) throw validation_error("verify_program: program has no row for output '" + g.outputs()[o].name + "'");
    out_rows[o] = *r;
  }

  std::uint32_t triples = 2;
  for (const auto& op : p.ops)
    if (op.kind == OpKind::maj) triples = std::max(triples, op.triple + 1);
  const RowSpace space{std::max<std::uint32_t>(p.rows_used, 1), triples, 2};
  validate_program(p, space);

  std::mt19937_64 rng(opt.seed);
  VerifyResult result;

  auto check_batch = [&](const std::vector<std::uint64_t>& patterns, std::size_t lanes) {
    SubarrayState state(space, lanes);
    const std::size_t words = state.words();
    std::vector<std::uint64_t> noise(words);
    auto scramble = [&](Row r) {
      for (auto& w : noise) w = rng();
      state.write_row(r, noise);
    };
    for (std::uint32_t r = 0; r < space.data_rows; ++r) scramble(Row::data(r));
    for (std::uint32_t r = 0; r < space.compute_rows(); ++r) scramble(Row::compute(r));
    for (std::uint32_t r = 0; r < space.negation_rows; ++r) scramble(Row::negation(r));
    for (std::size_t i = 0; i < n; ++i)
      state.write_row(Row::data(in_rows[i]), std::span(patterns).subspan(i * words, words));

    run(state, p);
    const auto expected = g.simulate(patterns, words);

    std::size_t first_lane = lanes;
    std::size_t first_output = 0;
    for (std::size_t o = 0; o < out_rows.size(); ++o) {
      const auto got = state.row(Row::data(out_rows[o]));
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t diff = (got[w] ^ expected[o * words + w]);
        if (w == words - 1) diff &= state.tail_mask();
        if (diff != 0) {
          const std::size_t lane = w * 64 + static_cast<std::size_t>(std::countr_zero(diff));
          if (lane < first_lane) {
            first_lane = lane;
            first_output = o;
          }
          break;
        }
      }
    }
    result.cases_checked += lanes;
    if (first_lane == lanes) return true;
    std::vector<bool> cex(n);
    for (std::size_t i = 0; i < n; ++i) cex[i] = ((patterns[i * words + first_lane / 64] >> (first_lane % 64)) & 1u) != 0;
    result.ok = false;
    result.counterexample = std::move(cex);
    result.failing_output = g.outputs()[first_output].name;
    return false;
  };

  if (n <= logic::max_truth_table_inputs) {
    check_batch(logic::exhaustive_patterns(n), std::size_t{1} << n);
    return result;
  }
  constexpr std::size_t batch = 4096;
  for (std::size_t done = 0; done < opt.trials;) {
    const std::size_t lanes = std::min(batch, opt.trials - done);
    const std::size_t words = (lanes + 63) / 64;
    std::vector<std::uint64_t> patterns(n * words);
    for (auto& w : patterns) w = rng();
    if (!check_batch(patterns, lanes)) return result;
    done += lanes;
  }
  return result;
}

}  // namespace simdram

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

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "simdram/error.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/logic/netlist.hpp"

namespace simdram::logic {

/// Anything that can be simulated bit-parallel over its primary inputs.
template <typename N>
concept Network = requires(const N& n, std::span<const std::uint64_t> patterns, std::size_t words) {
  { n.input_count() } -> std::convertible_to<std::size_t>;
  { n.output_count() } -> std::convertible_to<std::size_t>;
  { n.simulate(patterns, words) } -> std::same_as<std::vector<std::uint64_t>>;
};

inline constexpr std::size_t max_truth_table_inputs = 16;

/// Exhaustive function table. Assignment index m sets input i to bit i of m.
struct TruthTable {
  std::size_t input_count = 0;
  std::vector<std::vector<std::uint64_t>> outputs;

  std::size_t entries() const noexcept { return std::size_t{1} << input_count; }

  bool bit(std::size_t output, std::size_t assignment) const {
    return ((outputs.at(output)[assignment / 64] >> (assignment % 64)) & 1u) != 0;
  }

  /// Most significant assignment first, e.g. "11101000" for MAJ3.
  std::string to_string(std::size_t output = 0) const {
    std::string s;
    for (std::size_t m = entries(); m-- > 0;) s.push_back(bit(output, m) ? '1' : '0');
    return s;
  }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

/// Patterns enumerating all 2^n assignments, input-major, ceil(2^n / 64)
/// words per input. Bits past 2^n in the last word are zero.
inline std::vector<std::uint64_t> exhaustive_patterns(std::size_t n) {
  const std::size_t entries = std::size_t{1} << n;
  const std::size_t words = (entries + 63) / 64;
  std::vector<std::uint64_t> p(n * words, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < entries; ++m)
      if ((m >> i) & 1u) p[i * words + m / 64] |= std::uint64_t{1} << (m % 64);
  return p;
}

template <Network N>
TruthTable truth_table(const N& net) {
  const std::size_t n = net.input_count();
  if (n > max_truth_table_inputs)
    throw validation_error("truth_table: " + std::to_string(n) + " inputs exceeds the limit of 16");
  const std::size_t entries = std::size_t{1} << n;
  const std::size_t words = (entries + 63) / 64;
  const auto out = net.simulate(exhaustive_patterns(n), words);
  const std::uint64_t tail = entries % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << entries) - 1;
  TruthTable tt{n, {}};
  for (std::size_t o = 0; o < net.output_count(); ++o) {
    std::vector<std::uint64_t> bits(out.begin() + static_cast<std::ptrdiff_t>(o * words),
                                    out.begin() + static_cast<std::ptrdiff_t>((o + 1) * words));
    bits.back() &= tail;
    tt.outputs.push_back(std::move(bits));
  }
  return tt;
}

struct EquivalenceResult {
  bool equivalent = true;
  /// First failing assignment, one bit per input in declaration order.
  std::optional<std::vector<bool>> counterexample;
  std::size_t cases_checked = 0;
};

/// Exhaustive comparison up to 16 inputs, otherwise `trials` uniformly random
/// assignments drawn from `seed`.
template <Network A, Network B>
EquivalenceResult equivalent(const A& a, const B& b, std::size_t trials = 10000, std::uint64_t seed = 1) {
  if (a.input_count() != b.input_count() || a.output_count() != b.output_count())
    throw validation_error("equivalent: input/output signature mismatch");
  const std::size_t n = a.input_count();
  EquivalenceResult result;

  auto compare = [&](const std::vector<std::uint64_t>& patterns, std::size_t words, std::size_t cases) {
    const auto oa = a.simulate(patterns, words);
    const auto ob = b.simulate(patterns, words);
    for (std::size_t m = 0; m < cases; ++m) {
      const std::size_t w = m / 64;
      const std::uint64_t bit = std::uint64_t{1} << (m % 64);
      for (std::size_t o = 0; o < a.output_count(); ++o) {
        if (((oa[o * words + w] ^ ob[o * words + w]) & bit) != 0) {
          std::vector<bool> cex(n);
          for (std::size_t i = 0; i < n; ++i) cex[i] = (patterns[i * words + w] & bit) != 0;
          result.equivalent = false;
          result.counterexample = std::move(cex);
          return false;
        }
      }
    }
    return true;
  };

  if (n <= max_truth_table_inputs) {
    const std::size_t entries = std::size_t{1} << n;
    result.cases_checked = entries;
    compare(exhaustive_patterns(n), (entries + 63) / 64, entries);
    return result;
  }

  std::mt19937_64 rng(seed);
  constexpr std::size_t batch = 4096;
  for (std::size_t done = 0; done < trials;) {
    const std::size_t cases = std::min(batch, trials - done);
    const std::size_t words = (cases + 63) / 64;
    std::vector<std::uint64_t> patterns(n * words);
    for (auto& w : patterns) w = rng();
    result.cases_checked += cases;
    if (!compare(patterns, words, cases)) return result;
    done += cases;
  }
  return result;
}

}  // namespace simdram::logic

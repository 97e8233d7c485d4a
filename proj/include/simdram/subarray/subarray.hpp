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

#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/row_space.hpp"
#include "simdram/error.hpp"
#include "simdram/subarray/cost_model.hpp"

namespace simdram {

/// Accounting for one run (or an aggregate of runs).
struct RunStats {
  std::uint64_t total_activations = 0;
  double simulated_latency_ns = 0.0;
  double simulated_energy_pj = 0.0;
  std::array<std::uint64_t, op_kind_count> ops_by_kind{};
  std::uint64_t elements = 0;

  std::uint64_t op_count() const noexcept {
    std::uint64_t n = 0;
    for (auto c : ops_by_kind) n += c;
    return n;
  }

  double elements_per_activation() const noexcept {
    return total_activations == 0 ? 0.0 : static_cast<double>(elements) / static_cast<double>(total_activations);
  }

  RunStats& operator+=(const RunStats& o) noexcept {
    total_activations += o.total_activations;
    simulated_latency_ns += o.simulated_latency_ns;
    simulated_energy_pj += o.simulated_energy_pj;
    for (std::size_t k = 0; k < op_kind_count; ++k) ops_by_kind[k] += o.ops_by_kind[k];
    elements += o.elements;
    return *this;
  }

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

/// Simulated DRAM subarray: a rows x lanes bit matrix executing micro-ops
/// bitline-parallel. Bits past `lanes` in the last word of a row stay zero.
class SubarrayState {
 public:
  struct Counters {
    std::uint64_t activations = 0;
    std::uint64_t copies = 0;
    std::uint64_t maj_ops = 0;
    std::array<std::uint64_t, op_kind_count> by_kind{};
  };

  SubarrayState(RowSpace space, std::size_t lanes, CostModel model = {})
      : space_(space), model_(model), lanes_(lanes), words_((lanes + 63) / 64) {
    space_.validate();
    model_.validate();
    if (lanes == 0) throw validation_error("subarray needs at least one lane");
    bits_.assign(static_cast<std::size_t>(space_.total_rows()) * words_, 0);
    auto ones = mutable_row(Row::ones());
    std::fill(ones.begin(), ones.end(), ~std::uint64_t{0});
    ones.back() &= tail_mask();
  }

  const RowSpace& space() const noexcept { return space_; }
  const CostModel& model() const noexcept { return model_; }
  std::size_t lanes() const noexcept { return lanes_; }
  std::size_t words() const noexcept { return words_; }
  const Counters& counters() const noexcept { return counters_; }

  std::uint64_t tail_mask() const noexcept {
    const std::size_t r = lanes_ % 64;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
  }

  std::span<const std::uint64_t> row(Row r) const {
    return {bits_.data() + static_cast<std::size_t>(space_.physical(r)) * words_, words_};
  }

  bool bit(Row r, std::size_t lane) const {
    if (lane >= lanes_) throw execution_error("lane out of range");
    return ((row(r)[lane / 64] >> (lane % 64)) & 1u) != 0;
  }

  /// Host-side write path (no accounting). Constant rows are read-only.
  void write_row(Row r, std::span<const std::uint64_t> value) {
    if (value.size() != words_) throw execution_error("row width mismatch");
    auto dst = writable(r);
    std::copy(value.begin(), value.end(), dst.begin());
    dst.back() &= tail_mask();
  }

  void set_bit(Row r, std::size_t lane, bool v) {
    if (lane >= lanes_) throw execution_error("lane out of range");
    auto dst = writable(r);
    const std::uint64_t m = std::uint64_t{1} << (lane % 64);
    dst[lane / 64] = v ? (dst[lane / 64] | m) : (dst[lane / 64] & ~m);
  }

  /// Executes one micro-op across all lanes and charges its weight.
  void step(const MicroOp& op) {
    switch (op.kind) {
      case OpKind::copy: {
        const auto src = row(op.src);
        auto dst = writable(op.dst);
        if (src.data() != dst.data()) std::copy(src.begin(), src.end(), dst.begin());
        break;
      }
      case OpKind::copy_neg: {
        auto neg = mutable_row(Row::negation(0));
        const auto src = row(op.src);
        auto dst = writable(op.dst);
        for (std::size_t w = 0; w < words_; ++w) neg[w] = ~src[w];
        neg.back() &= tail_mask();
        std::copy(neg.begin(), neg.end(), dst.begin());
        break;
      }
      case OpKind::copy_imm: {
        auto dst = writable(op.dst);
        std::fill(dst.begin(), dst.end(), op.immediate ? ~std::uint64_t{0} : 0);
        dst.back() &= tail_mask();
        break;
      }
      case OpKind::maj: {
        if (op.triple >= space_.compute_triples) throw execution_error("no such compute triple");
        auto a = mutable_row(Row::compute(3 * op.triple));
        auto b = mutable_row(Row::compute(3 * op.triple + 1));
        auto c = mutable_row(Row::compute(3 * op.triple + 2));
        for (std::size_t w = 0; w < words_; ++w) {
          const std::uint64_t m = (a[w] & b[w]) | (a[w] & c[w]) | (b[w] & c[w]);
          a[w] = b[w] = c[w] = m;
        }
        break;
      }
    }
    const std::uint32_t weight = model_.weight(op.kind);
    counters_.activations += weight;
    counters_.by_kind[static_cast<std::size_t>(op.kind)] += 1;
    if (op.kind == OpKind::maj) ++counters_.maj_ops;
    else ++counters_.copies;
  }

  RunStats stats_since(const Counters& before) const {
    RunStats s;
    s.total_activations = counters_.activations - before.activations;
    for (std::size_t k = 0; k < op_kind_count; ++k) s.ops_by_kind[k] = counters_.by_kind[k] - before.by_kind[k];
    s.simulated_latency_ns =
        static_cast<double>(s.total_activations) * (model_.t_activate_ns + model_.t_precharge_ns);
    s.simulated_energy_pj = static_cast<double>(s.total_activations) * model_.e_activate_pj;
    return s;
  }

 private:
  std::span<std::uint64_t> mutable_row(Row r) {
    return {bits_.data() + static_cast<std::size_t>(space_.physical(r)) * words_, words_};
  }
  std::span<std::uint64_t> writable(Row r) {
    if (r.is_constant()) throw execution_error("write to constant row " + to_string(r));
    return mutable_row(r);
  }

  RowSpace space_;
  CostModel model_;
  std::size_t lanes_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  Counters counters_;
};

/// Executes ops in order. A failing op aborts the run with its index.
inline RunStats run(SubarrayState& state, std::span<const MicroOp> ops) {
  const auto before = state.counters();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    try {
      state.step(ops[i]);
    } catch (const execution_error& e) {
      throw execution_error("op #" + std::to_string(i) + " (" + to_string(ops[i]) + "): " + e.what());
    }
  }
  RunStats s = state.stats_since(before);
  s.elements = ops.empty() ? 0 : state.lanes();
  return s;
}

inline RunStats run(SubarrayState& state, const MicroProgram& p) {
  if (p.rows_used > state.space().data_rows)
    throw execution_error("program needs " + std::to_string(p.rows_used) + " data rows");
  return run(state, std::span<const MicroOp>(p.ops));
}

}  // namespace simdram

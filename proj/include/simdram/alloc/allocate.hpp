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
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/row_space.hpp"
#include "simdram/error.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/subarray/cost_model.hpp"

namespace simdram {

namespace detail {

inline constexpr std::size_t no_use = std::numeric_limits<std::size_t>::max();

/// Per-node liveness facts under the graph's own topological order.
struct NodeUsage {
  std::vector<char> live;              // reachable from an output
  std::vector<std::size_t> last_use;   // position of the last consuming node, or no_use
  std::vector<char> output_bound;      // bound (either polarity) to an output
};

inline NodeUsage analyze_usage(const logic::MajGraph& g) {
  const std::size_t n = g.node_count();
  NodeUsage u{std::vector<char>(n, 0), std::vector<std::size_t>(n, no_use), std::vector<char>(n, 0)};
  for (const auto& o : g.outputs()) {
    if (g.is_node(o.signal)) {
      u.live[g.node_position(o.signal)] = 1;
      u.output_bound[g.node_position(o.signal)] = 1;
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    if (!u.live[i]) continue;
    for (logic::Signal f : g.nodes()[i].fanins) {
      if (!g.is_node(f)) continue;
      const std::size_t p = g.node_position(f);
      u.live[p] = 1;
      if (u.last_use[p] == no_use) u.last_use[p] = i;
    }
  }
  return u;
}

}  // namespace detail

/// Largest number of node values alive at once when nodes are evaluated in
/// graph order. A value lives from its creation until its last consumer has
/// read it, or to the end of the program when it is bound to an output.
inline std::size_t peak_liveness(const logic::MajGraph& g) {
  const auto u = detail::analyze_usage(g);
  std::vector<std::size_t> dies_at(g.node_count(), detail::no_use);
  std::size_t live = 0;
  std::size_t peak = 0;
  std::vector<std::size_t> released(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!u.live[i]) continue;
    live -= released[i];
    ++live;
    peak = std::max(peak, live);
    if (!u.output_bound[i] && u.last_use[i] != detail::no_use) ++released[u.last_use[i]];
  }
  return peak;
}

struct AllocateOptions {
  /// Reuse scratch rows of dead intermediates.
  bool recycle_rows = true;
  /// Compute triple used for every MAJ.
  std::uint32_t triple = 0;
  CostModel model{};
};

/// Maps a MajGraph onto rows and emits its micro-program.
///
/// Inputs occupy data rows 0..I-1 and outputs rows I..I+O-1; scratch rows
/// follow. For each live node, in graph order: its three operands are copied
/// into the compute triple (COPY, CNEG for complemented edges, CIMM for
/// constants), one MAJ is issued, and the result is copied from the triple's
/// first row to every output bound to the node and, if later nodes read it,
/// to a home row. The home is the node's first non-complemented output row
/// when there is one, otherwise a scratch row freed after the last read.
/// Outputs bound directly to inputs or constants are written last.
inline MicroProgram allocate(const logic::MajGraph& g, const RowSpace& space, const AllocateOptions& options = {}) {
  g.validate();
  space.validate();
  if (options.triple >= space.compute_triples) throw validation_error("allocate: no such compute triple");

  const auto ni = static_cast<std::uint32_t>(g.input_count());
  const auto no = static_cast<std::uint32_t>(g.output_count());
  const auto u = detail::analyze_usage(g);

  MicroProgram p;
  for (std::uint32_t i = 0; i < ni; ++i) p.input_bindings.push_back({g.input_names()[i], i});
  for (std::uint32_t o = 0; o < no; ++o) p.output_bindings.push_back({g.outputs()[o].name, ni + o});

  std::vector<std::vector<std::uint32_t>> outputs_of(g.node_count());
  for (std::uint32_t o = 0; o < no; ++o)
    if (g.is_node(g.outputs()[o].signal)) outputs_of[g.node_position(g.outputs()[o].signal)].push_back(o);

  const std::uint32_t scratch_base = ni + no;
  std::uint32_t scratch_high = scratch_base;
  std::set<std::uint32_t> free_rows;
  auto take_row = [&] {
    if (!free_rows.empty()) {
      const std::uint32_t r = *free_rows.begin();
      free_rows.erase(free_rows.begin());
      return r;
    }
    return scratch_high++;
  };

  std::vector<std::uint32_t> home(g.node_count(), 0);
  std::vector<std::vector<std::size_t>> release_after(g.node_count());

  const std::uint32_t t0 = 3 * options.triple;
  auto source_row = [&](logic::Signal s) {
    return g.is_input(s) ? Row::data(static_cast<std::uint32_t>(g.input_position(s)))
                         : Row::data(home[g.node_position(s)]);
  };
  auto emit_read = [&](logic::Signal s, Row dst) {
    if (g.is_constant(s)) p.ops.push_back(MicroOp::copy_imm(s.complemented(), dst));
    else if (s.complemented()) p.ops.push_back(MicroOp::copy_neg(source_row(s), dst));
    else p.ops.push_back(MicroOp::copy(source_row(s), dst));
  };

  for (std::size_t n = 0; n < g.node_count(); ++n) {
    if (!u.live[n]) continue;
    const auto& f = g.nodes()[n].fanins;
    for (std::uint32_t k = 0; k < 3; ++k) emit_read(f[k], Row::compute(t0 + k));
    p.ops.push_back(MicroOp::maj(options.triple));

    if (options.recycle_rows) {
      for (std::size_t dead : release_after[n]) free_rows.insert(home[dead]);
    }

    const Row result = Row::compute(t0);
    for (std::uint32_t o : outputs_of[n]) {
      const Row out = Row::data(ni + o);
      p.ops.push_back(g.outputs()[o].signal.complemented() ? MicroOp::copy_neg(result, out)
                                                           : MicroOp::copy(result, out));
    }
    if (u.last_use[n] == detail::no_use) continue;
    const auto plain = std::find_if(outputs_of[n].begin(), outputs_of[n].end(),
                                    [&](std::uint32_t o) { return !g.outputs()[o].signal.complemented(); });
    if (plain != outputs_of[n].end()) {
      home[n] = ni + *plain;
    } else {
      home[n] = take_row();
      p.ops.push_back(MicroOp::copy(result, Row::data(home[n])));
      release_after[u.last_use[n]].push_back(n);
    }
  }

  for (std::uint32_t o = 0; o < no; ++o) {
    const logic::Signal s = g.outputs()[o].signal;
    if (!g.is_node(s)) emit_read(s, Row::data(ni + o));
  }

  p.rows_used = scratch_high;
  p.activation_cost = cost(p, options.model);
  if (p.rows_used > space.data_rows) {
    throw allocation_error("allocate: needs " + std::to_string(p.rows_used) + " data rows (" + std::to_string(ni) +
                               " inputs, " + std::to_string(no) + " outputs, peak liveness " +
                               std::to_string(peak_liveness(g)) + "), only " + std::to_string(space.data_rows) +
                               " available",
                           p.rows_used, space.data_rows);
  }
  return p;
}

}  // namespace simdram

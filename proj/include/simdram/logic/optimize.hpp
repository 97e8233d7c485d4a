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
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simdram/logic/maj_graph.hpp"

namespace simdram::logic {

namespace detail {

/// Canonical form of MAJ(a,b,c): either a trivial result, or a sorted fanin
/// triple with at most one complemented edge plus an output complement.
struct MajForm {
  bool trivial = false;
  Signal result{};
  std::array<Signal, 3> key{};
  bool flip = false;
};

inline MajForm normalize_maj(Signal a, Signal b, Signal c) {
  std::array<Signal, 3> f{a, b, c};
  std::sort(f.begin(), f.end());
  // M(x,x,y) = x and M(x,!x,y) = y. Sorting puts equal indices side by side.
  if (f[0].index() == f[1].index()) return {true, f[0] == f[1] ? f[0] : f[2], {}, false};
  if (f[1].index() == f[2].index()) return {true, f[1] == f[2] ? f[1] : f[0], {}, false};
  // Self-duality: M(!x,!y,!z) = !M(x,y,z).
  const int complemented = f[0].complemented() + f[1].complemented() + f[2].complemented();
  MajForm form;
  if (complemented >= 2) {
    for (auto& s : f) s = !s;
    form.flip = true;
  }
  form.key = f;
  return form;
}

struct KeyHash {
  std::size_t operator()(const std::array<Signal, 3>& k) const noexcept {
    std::uint64_t h = k[0].raw();
    h = h * 0x9E3779B97F4A7C15ull + k[1].raw();
    h = h * 0x9E3779B97F4A7C15ull + k[2].raw();
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace detail

/// Builds a MajGraph through the majority axioms and structural hashing.
class MigBuilder {
 public:
  explicit MigBuilder(std::vector<std::string> input_names) : graph_(std::move(input_names)) {}

  Signal input(std::size_t i) const { return graph_.input(i); }

  Signal create_maj(Signal a, Signal b, Signal c) {
    const auto form = detail::normalize_maj(a, b, c);
    if (form.trivial) return form.result;
    const auto it = table_.find(form.key);
    if (it != table_.end()) return it->second ^ form.flip;
    const Signal s = graph_.add_node(form.key[0], form.key[1], form.key[2]);
    table_.emplace(form.key, s);
    return s ^ form.flip;
  }

  /// Result of create_maj without inserting, or nullopt if a new node would
  /// be required.
  std::optional<Signal> find_maj(Signal a, Signal b, Signal c) const {
    const auto form = detail::normalize_maj(a, b, c);
    if (form.trivial) return form.result;
    const auto it = table_.find(form.key);
    if (it == table_.end()) return std::nullopt;
    return it->second ^ form.flip;
  }

  void add_output(std::string name, Signal s) { graph_.add_output(std::move(name), s); }

  const MajGraph& graph() const noexcept { return graph_; }
  MajGraph take() && { return std::move(graph_); }

 private:
  MajGraph graph_;
  std::unordered_map<std::array<Signal, 3>, Signal, detail::KeyHash> table_;
};

/// Copies the nodes reachable from the outputs, preserving their order.
inline MajGraph remove_dead_nodes(const MajGraph& g) {
  std::vector<char> live(g.signal_count(), 0);
  for (const auto& o : g.outputs()) live[o.signal.index()] = 1;
  for (std::size_t n = g.node_count(); n-- > 0;)
    if (live[g.first_node_index() + n])
      for (Signal f : g.nodes()[n].fanins) live[f.index()] = 1;

  MajGraph out(g.input_names());
  std::vector<Signal> map(g.signal_count());
  for (std::size_t i = 0; i <= g.input_count(); ++i) map[i] = Signal::make(static_cast<std::uint32_t>(i));
  auto mapped = [&](Signal s) { return map[s.index()] ^ s.complemented(); };
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const std::size_t idx = g.first_node_index() + n;
    if (!live[idx]) continue;
    const auto& f = g.nodes()[n].fanins;
    map[idx] = out.add_node(mapped(f[0]), mapped(f[1]), mapped(f[2]));
  }
  for (const auto& o : g.outputs()) out.add_output(o.name, mapped(o.signal));
  return out;
}

/// Rebuilds through MigBuilder (axioms, complement normalization, structural
/// hashing) and drops dead nodes.
inline MajGraph strash(const MajGraph& g) {
  const MajGraph live = remove_dead_nodes(g);
  MigBuilder b(live.input_names());
  std::vector<Signal> map(live.signal_count());
  for (std::size_t i = 0; i <= live.input_count(); ++i) map[i] = Signal::make(static_cast<std::uint32_t>(i));
  auto mapped = [&](Signal s) { return map[s.index()] ^ s.complemented(); };
  for (std::size_t n = 0; n < live.node_count(); ++n) {
    const auto& f = live.nodes()[n].fanins;
    map[live.first_node_index() + n] = b.create_maj(mapped(f[0]), mapped(f[1]), mapped(f[2]));
  }
  for (const auto& o : live.outputs()) b.add_output(o.name, mapped(o.signal));
  return remove_dead_nodes(std::move(b).take());
}

/// Minimum-size MIG implementations of every 3-input Boolean function.
///
/// A literal is (index << 1) | complement with index 0 the constant, 1..3 the
/// leaves x0..x2, and 4.. the implementation's own nodes.
struct MigImplementation {
  std::vector<std::array<std::uint8_t, 3>> nodes;
  std::uint8_t output = 0;
};

class MigLibrary {
 public:
  static constexpr std::size_t max_size = 4;
  static constexpr std::size_t max_implementations = 32;
  static constexpr std::uint8_t unknown = 0xFF;

  MigLibrary() {
    best_.fill(unknown);
    record_literals();
    std::vector<std::array<std::uint8_t, 3>> dag;
    std::vector<std::uint8_t> tables{0x00, 0xAA, 0xCC, 0xF0};
    for (std::size_t size = 1; size <= max_size; ++size) enumerate(dag, tables, size);
  }

  /// Size of the smallest implementation, or `unknown` beyond max_size nodes.
  std::uint8_t size(std::uint8_t function) const noexcept { return best_[function]; }

  const std::vector<MigImplementation>& implementations(std::uint8_t function) const noexcept {
    return impls_[function];
  }

 private:
  void record(std::uint8_t tt, const std::vector<std::array<std::uint8_t, 3>>& dag, std::uint8_t out) {
    const auto size = static_cast<std::uint8_t>(dag.size());
    if (best_[tt] != unknown && best_[tt] != size) return;
    best_[tt] = size;
    if (impls_[tt].size() < max_implementations) impls_[tt].push_back(MigImplementation{dag, out});
  }

  void record_literals() {
    const std::array<std::uint8_t, 4> tables{0x00, 0xAA, 0xCC, 0xF0};
    for (std::uint8_t i = 0; i < 4; ++i) {
      record(tables[i], {}, static_cast<std::uint8_t>(i << 1));
      record(static_cast<std::uint8_t>(~tables[i]), {}, static_cast<std::uint8_t>((i << 1) | 1));
    }
  }

  void enumerate(std::vector<std::array<std::uint8_t, 3>>& dag, std::vector<std::uint8_t>& tables, std::size_t size) {
    const auto signals = static_cast<std::uint8_t>(tables.size());
    for (std::uint8_t a = 0; a < signals; ++a) {
      for (std::uint8_t b = a + 1; b < signals; ++b) {
        for (std::uint8_t c = b + 1; c < signals; ++c) {
          // At most one complemented fanin; output polarity is free.
          for (int neg = -1; neg < 3; ++neg) {
            const std::array<std::uint8_t, 3> idx{a, b, c};
            std::array<std::uint8_t, 3> lits{};
            std::array<std::uint8_t, 3> val{};
            for (int k = 0; k < 3; ++k) {
              const bool n = (k == neg);
              lits[k] = static_cast<std::uint8_t>((idx[k] << 1) | (n ? 1 : 0));
              val[k] = n ? static_cast<std::uint8_t>(~tables[idx[k]]) : tables[idx[k]];
            }
            const auto tt = static_cast<std::uint8_t>((val[0] & val[1]) | (val[0] & val[2]) | (val[1] & val[2]));
            dag.push_back(lits);
            tables.push_back(tt);
            if (dag.size() == size) {
              const auto out = static_cast<std::uint8_t>((tables.size() - 1) << 1);
              record(tt, dag, out);
              record(static_cast<std::uint8_t>(~tt), dag, static_cast<std::uint8_t>(out | 1));
            } else {
              enumerate(dag, tables, size);
            }
            dag.pop_back();
            tables.pop_back();
          }
        }
      }
    }
  }

  std::array<std::uint8_t, 256> best_{};
  std::array<std::vector<MigImplementation>, 256> impls_{};
};

inline const MigLibrary& mig_library() {
  static const MigLibrary library;
  return library;
}

namespace detail {

struct Cut {
  std::array<std::uint32_t, 3> leaves{};
  std::uint8_t size = 0;
  std::uint8_t table = 0;  // over leaf positions: variable j is leaves[j]

  bool dominates(const Cut& other) const {
    return std::includes(other.leaves.begin(), other.leaves.begin() + other.size, leaves.begin(),
                         leaves.begin() + size);
  }
  friend bool operator<(const Cut& a, const Cut& b) {
    if (a.size != b.size) return a.size < b.size;
    return std::lexicographical_compare(a.leaves.begin(), a.leaves.begin() + a.size, b.leaves.begin(),
                                        b.leaves.begin() + b.size);
  }
  bool same_leaves(const Cut& b) const {
    return size == b.size && std::equal(leaves.begin(), leaves.begin() + size, b.leaves.begin());
  }
};

/// Re-expresses a cut function over a superset of its leaves.
inline std::uint8_t expand_table(const Cut& c, const std::array<std::uint32_t, 3>& leaves, std::uint8_t size) {
  std::array<int, 3> pos{-1, -1, -1};
  for (std::uint8_t i = 0; i < c.size; ++i)
    for (std::uint8_t j = 0; j < size; ++j)
      if (leaves[j] == c.leaves[i]) pos[i] = j;
  std::uint8_t out = 0;
  for (unsigned m = 0; m < 8; ++m) {
    unsigned local = 0;
    for (std::uint8_t i = 0; i < c.size; ++i)
      if ((m >> pos[i]) & 1u) local |= 1u << i;
    if ((c.table >> local) & 1u) out |= static_cast<std::uint8_t>(1u << m);
  }
  return out;
}

inline std::vector<std::vector<Cut>> enumerate_cuts(const MajGraph& g, std::size_t max_cuts) {
  std::vector<std::vector<Cut>> cuts(g.signal_count());
  cuts[0].push_back(Cut{});  // constant: empty cut, function 0
  for (std::uint32_t i = 1; i <= g.input_count(); ++i) cuts[i].push_back(Cut{{i, 0, 0}, 1, 0xAA});

  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const std::uint32_t idx = g.first_node_index() + static_cast<std::uint32_t>(n);
    const auto& f = g.nodes()[n].fanins;
    std::vector<Cut> result;
    for (const Cut& c0 : cuts[f[0].index()]) {
      for (const Cut& c1 : cuts[f[1].index()]) {
        for (const Cut& c2 : cuts[f[2].index()]) {
          std::array<std::uint32_t, 9> all{};
          std::size_t count = 0;
          for (const Cut* c : {&c0, &c1, &c2})
            for (std::uint8_t k = 0; k < c->size; ++k) all[count++] = c->leaves[k];
          std::sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
          const auto end = std::unique(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
          const auto size = static_cast<std::size_t>(end - all.begin());
          if (size > 3) continue;
          Cut merged;
          merged.size = static_cast<std::uint8_t>(size);
          std::copy(all.begin(), end, merged.leaves.begin());
          std::array<std::uint8_t, 3> t{expand_table(c0, merged.leaves, merged.size),
                                        expand_table(c1, merged.leaves, merged.size),
                                        expand_table(c2, merged.leaves, merged.size)};
          for (int k = 0; k < 3; ++k)
            if (f[k].complemented()) t[k] = static_cast<std::uint8_t>(~t[k]);
          merged.table = static_cast<std::uint8_t>((t[0] & t[1]) | (t[0] & t[2]) | (t[1] & t[2]));
          result.push_back(merged);
        }
      }
    }
    std::sort(result.begin(), result.end());
    std::vector<Cut> kept;
    for (const Cut& c : result) {
      if (kept.size() >= max_cuts) break;
      const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Cut& k) { return k.dominates(c); });
      if (!dominated) kept.push_back(c);
    }
    kept.push_back(Cut{{idx, 0, 0}, 1, 0xAA});
    cuts[idx] = std::move(kept);
  }
  return cuts;
}

/// Size of the maximum fanout-free cone of `root` bounded by `leaves`.
inline std::size_t mffc_size(const MajGraph& g, std::uint32_t root, const Cut& cut, std::vector<std::uint32_t>& refs) {
  std::vector<std::uint32_t> touched;
  std::size_t count = 0;
  auto is_leaf = [&](std::uint32_t idx) {
    return std::find(cut.leaves.begin(), cut.leaves.begin() + cut.size, idx) != cut.leaves.begin() + cut.size;
  };
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const std::uint32_t idx = stack.back();
    stack.pop_back();
    ++count;
    for (Signal f : g.nodes()[idx - g.first_node_index()].fanins) {
      const std::uint32_t child = f.index();
      if (child < g.first_node_index() || is_leaf(child)) continue;
      touched.push_back(child);
      if (--refs[child] == 0) stack.push_back(child);
    }
  }
  for (std::uint32_t t : touched) ++refs[t];
  return count;
}

}  // namespace detail

/// One round of 3-input cut rewriting against the exact MIG library.
inline MajGraph rewrite_pass(const MajGraph& g) {
  constexpr std::size_t max_cuts = 8;
  const auto& library = mig_library();
  const auto cuts = detail::enumerate_cuts(g, max_cuts);

  std::vector<std::uint32_t> refs(g.signal_count(), 0);
  for (const auto& node : g.nodes())
    for (Signal f : node.fanins) ++refs[f.index()];
  for (const auto& o : g.outputs()) ++refs[o.signal.index()];

  MigBuilder b(g.input_names());
  std::vector<Signal> map(g.signal_count());
  for (std::size_t i = 0; i <= g.input_count(); ++i) map[i] = Signal::make(static_cast<std::uint32_t>(i));
  auto mapped = [&](Signal s) { return map[s.index()] ^ s.complemented(); };

  auto leaf_literal = [&](const detail::Cut& cut, std::uint8_t lit, const std::vector<Signal>& local) {
    const std::uint8_t index = lit >> 1;
    Signal s;
    if (index == 0) s = MajGraph::constant(false);
    else if (index <= 3) s = index - 1u < cut.size ? map[cut.leaves[index - 1]] : MajGraph::constant(false);
    else s = local[index - 4];
    return s ^ ((lit & 1u) != 0);
  };

  // New nodes that instantiating `impl` on `cut` would add to the builder.
  auto dry_run = [&](const detail::Cut& cut, const MigImplementation& impl) {
    std::vector<Signal> local;
    std::size_t added = 0;
    std::uint32_t placeholder = static_cast<std::uint32_t>(g.signal_count() * 4 + 16);
    for (const auto& node : impl.nodes) {
      const Signal a = leaf_literal(cut, node[0], local);
      const Signal bb = leaf_literal(cut, node[1], local);
      const Signal c = leaf_literal(cut, node[2], local);
      if (auto found = b.find_maj(a, bb, c)) {
        local.push_back(*found);
      } else {
        local.push_back(Signal::make(placeholder++));
        ++added;
      }
    }
    return added;
  };

  auto instantiate = [&](const detail::Cut& cut, const MigImplementation& impl) {
    std::vector<Signal> local;
    for (const auto& node : impl.nodes)
      local.push_back(b.create_maj(leaf_literal(cut, node[0], local), leaf_literal(cut, node[1], local),
                                   leaf_literal(cut, node[2], local)));
    return leaf_literal(cut, impl.output, local);
  };

  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const std::uint32_t idx = g.first_node_index() + static_cast<std::uint32_t>(n);
    const detail::Cut* best_cut = nullptr;
    const MigImplementation* best_impl = nullptr;
    long best_gain = 0;
    for (const auto& cut : cuts[idx]) {
      if (cut.size == 1 && cut.leaves[0] == idx) continue;
      if (library.size(cut.table) == MigLibrary::unknown) continue;
      const auto mffc = static_cast<long>(detail::mffc_size(g, idx, cut, refs));
      for (const auto& impl : library.implementations(cut.table)) {
        const long gain = mffc - static_cast<long>(dry_run(cut, impl));
        if (gain > best_gain) {
          best_gain = gain;
          best_cut = &cut;
          best_impl = &impl;
        }
      }
    }
    if (best_impl != nullptr) {
      map[idx] = instantiate(*best_cut, *best_impl);
    } else {
      const auto& f = g.nodes()[n].fanins;
      map[idx] = b.create_maj(mapped(f[0]), mapped(f[1]), mapped(f[2]));
    }
  }
  for (const auto& o : g.outputs()) b.add_output(o.name, mapped(o.signal));
  return remove_dead_nodes(std::move(b).take());
}

inline constexpr std::size_t default_rewrite_budget = 1000;

/// Minimizes MAJ node count (ties broken by depth): structural hashing with
/// the majority axioms, then cut-rewriting rounds until no round improves the
/// graph or `budget` rounds have run. Deterministic; never increases the
/// node count; preserves the function of every output.
inline MajGraph optimize_mig(const MajGraph& g, std::size_t budget = default_rewrite_budget) {
  MajGraph current = strash(g);
  auto better = [](const MajGraph& a, const MajGraph& b) {
    if (a.node_count() != b.node_count()) return a.node_count() < b.node_count();
    return a.depth() < b.depth();
  };
  for (std::size_t round = 0; round < budget; ++round) {
    MajGraph next = rewrite_pass(current);
    if (!better(next, current)) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace simdram::logic

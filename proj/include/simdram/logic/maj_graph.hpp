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
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simdram/error.hpp"
#include "simdram/logic/netlist.hpp"

namespace simdram::logic {

/// Edge of a majority-inverter graph: a signal index plus a complement flag,
/// packed as (index << 1) | complemented. Index 0 is the constant-0 value
/// (its complement is constant 1), indices 1..I are primary inputs and the
/// remaining indices are MAJ nodes in topological order.
class Signal {
 public:
  constexpr Signal() = default;
  static constexpr Signal make(std::uint32_t index, bool complemented = false) noexcept {
    return Signal((index << 1) | (complemented ? 1u : 0u));
  }
  static constexpr Signal from_raw(std::uint32_t raw) noexcept { return Signal(raw); }

  constexpr std::uint32_t index() const noexcept { return data_ >> 1; }
  constexpr bool complemented() const noexcept { return (data_ & 1u) != 0; }
  constexpr std::uint32_t raw() const noexcept { return data_; }

  constexpr Signal operator!() const noexcept { return Signal(data_ ^ 1u); }
  constexpr Signal operator^(bool flip) const noexcept { return Signal(data_ ^ (flip ? 1u : 0u)); }
  constexpr Signal regular() const noexcept { return Signal(data_ & ~1u); }

  friend constexpr auto operator<=>(Signal, Signal) noexcept = default;

 private:
  constexpr explicit Signal(std::uint32_t d) noexcept : data_(d) {}
  std::uint32_t data_ = 0;
};

struct MajNode {
  std::array<Signal, 3> fanins;
};

struct MajOutput {
  std::string name;
  Signal signal;
};

/// DAG of three-input majority nodes with complemented edges. NOT exists only
/// as an edge attribute.
class MajGraph {
 public:
  MajGraph() = default;
  explicit MajGraph(std::vector<std::string> input_names) : inputs_(std::move(input_names)) {}

  static constexpr Signal constant(bool value) noexcept { return Signal::make(0, value); }
  Signal input(std::size_t i) const {
    if (i >= inputs_.size()) throw validation_error("MajGraph: input index out of range");
    return Signal::make(static_cast<std::uint32_t>(i + 1));
  }
  Signal node(std::size_t i) const {
    if (i >= nodes_.size()) throw validation_error("MajGraph: node index out of range");
    return Signal::make(static_cast<std::uint32_t>(first_node_index() + i));
  }

  /// Appends a node verbatim (no simplification, no hashing).
  Signal add_node(Signal a, Signal b, Signal c) {
    for (Signal s : {a, b, c}) check(s);
    nodes_.push_back(MajNode{{a, b, c}});
    return node(nodes_.size() - 1);
  }

  void add_output(std::string name, Signal s) {
    check(s);
    outputs_.push_back(MajOutput{std::move(name), s});
  }

  bool is_constant(Signal s) const noexcept { return s.index() == 0; }
  bool is_input(Signal s) const noexcept { return s.index() >= 1 && s.index() <= inputs_.size(); }
  bool is_node(Signal s) const noexcept { return s.index() > inputs_.size(); }
  std::size_t input_position(Signal s) const noexcept { return s.index() - 1; }
  std::size_t node_position(Signal s) const noexcept { return s.index() - first_node_index(); }
  std::uint32_t first_node_index() const noexcept { return static_cast<std::uint32_t>(inputs_.size() + 1); }
  std::size_t signal_count() const noexcept { return 1 + inputs_.size() + nodes_.size(); }

  std::size_t input_count() const noexcept { return inputs_.size(); }
  std::size_t output_count() const noexcept { return outputs_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  const std::vector<std::string>& input_names() const noexcept { return inputs_; }
  std::vector<std::string> output_names() const {
    std::vector<std::string> names;
    for (const auto& o : outputs_) names.push_back(o.name);
    return names;
  }
  const std::vector<MajNode>& nodes() const noexcept { return nodes_; }
  const std::vector<MajOutput>& outputs() const noexcept { return outputs_; }
  const MajNode& node_at(Signal s) const { return nodes_[node_position(s)]; }

  /// Logic level of every signal index (constants and inputs at level 0).
  std::vector<std::uint32_t> levels() const {
    std::vector<std::uint32_t> level(signal_count(), 0);
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      std::uint32_t l = 0;
      for (Signal f : nodes_[n].fanins) l = std::max(l, level[f.index()]);
      level[first_node_index() + n] = l + 1;
    }
    return level;
  }

  /// Longest output path measured in MAJ nodes.
  std::uint32_t depth() const {
    const auto level = levels();
    std::uint32_t d = 0;
    for (const auto& o : outputs_) d = std::max(d, level[o.signal.index()]);
    return d;
  }

  std::vector<std::uint64_t> simulate(std::span<const std::uint64_t> inputs, std::size_t words) const {
    if (inputs.size() != inputs_.size() * words)
      throw validation_error("MajGraph simulation: pattern size does not match input count");
    std::vector<std::uint64_t> values(words, 0);  // constant row
    values.insert(values.end(), inputs.begin(), inputs.end());
    values.resize(signal_count() * words, 0);
    auto read = [&](Signal s, std::size_t w) {
      const std::uint64_t v = values[s.index() * words + w];
      return s.complemented() ? ~v : v;
    };
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const auto& f = nodes_[n].fanins;
      std::uint64_t* out = values.data() + (first_node_index() + n) * words;
      for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t a = read(f[0], w), b = read(f[1], w), c = read(f[2], w);
        out[w] = (a & b) | (a & c) | (b & c);
      }
    }
    std::vector<std::uint64_t> result(outputs_.size() * words);
    for (std::size_t o = 0; o < outputs_.size(); ++o)
      for (std::size_t w = 0; w < words; ++w) result[o * words + w] = read(outputs_[o].signal, w);
    return result;
  }

  void validate() const {
    for (std::size_t n = 0; n < nodes_.size(); ++n)
      for (Signal f : nodes_[n].fanins)
        if (f.index() >= first_node_index() + n)
          throw validation_error("MajGraph: node m" + std::to_string(n) + " is not topologically ordered");
    for (const auto& o : outputs_) check(o.signal);
  }

  /// Structural equality (same inputs, nodes, and output bindings).
  friend bool operator==(const MajGraph& a, const MajGraph& b) {
    if (a.inputs_ != b.inputs_ || a.nodes_.size() != b.nodes_.size() || a.outputs_.size() != b.outputs_.size())
      return false;
    for (std::size_t n = 0; n < a.nodes_.size(); ++n)
      if (a.nodes_[n].fanins != b.nodes_[n].fanins) return false;
    for (std::size_t o = 0; o < a.outputs_.size(); ++o)
      if (a.outputs_[o].name != b.outputs_[o].name || a.outputs_[o].signal != b.outputs_[o].signal) return false;
    return true;
  }

 private:
  void check(Signal s) const {
    if (s.index() >= signal_count()) throw validation_error("MajGraph: dangling edge");
  }

  std::vector<std::string> inputs_;
  std::vector<MajNode> nodes_;
  std::vector<MajOutput> outputs_;
};

/// Dump format: `in <name>` lines, one `m<id> = MAJ <edge> <edge> <edge>`
/// line per node, and `out <name> = <edge>` lines. An edge is `0`, `1`,
/// `<ref>` or `!<ref>`.
inline std::string to_text(const MajGraph& g) {
  std::ostringstream os;
  auto edge = [&](Signal s) {
    if (g.is_constant(s)) return std::string(s.complemented() ? "1" : "0");
    std::string name = g.is_input(s) ? g.input_names()[g.input_position(s)] : "m" + std::to_string(g.node_position(s));
    return s.complemented() ? "!" + name : name;
  };
  for (const auto& in : g.input_names()) os << "in " << in << '\n';
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const auto& f = g.nodes()[n].fanins;
    os << 'm' << n << " = MAJ " << edge(f[0]) << ' ' << edge(f[1]) << ' ' << edge(f[2]) << '\n';
  }
  for (const auto& o : g.outputs()) os << "out " << o.name << " = " << edge(o.signal) << '\n';
  return os.str();
}

/// Reads the dump format written by to_text(const MajGraph&). Input
/// declarations must precede the first node.
inline MajGraph parse_maj_graph(std::string_view text) {
  std::vector<std::string> inputs;
  std::vector<std::pair<std::array<std::string, 3>, std::size_t>> pending_nodes;
  struct PendingOutput {
    std::string name;
    std::string edge;
    std::size_t line;
  };
  std::vector<PendingOutput> pending_outputs;
  std::vector<std::string> node_names;

  detail::for_each_statement(text, [&](const std::vector<detail::Token>& t, std::size_t line) {
    if (t[0].text == "in") {
      if (t.size() != 2) throw parse_error("expected 'in <name>'", line, t[0].column);
      if (!node_names.empty()) throw parse_error("inputs must precede nodes", line, t[0].column);
      inputs.push_back(t[1].text);
    } else if (t[0].text == "out") {
      if (t.size() != 4 || t[2].text != "=") throw parse_error("expected 'out <name> = <edge>'", line, t[0].column);
      pending_outputs.push_back({t[1].text, t[3].text, line});
    } else {
      if (t.size() != 6 || t[1].text != "=" || t[2].text != "MAJ")
        throw parse_error("expected 'm<id> = MAJ <edge> <edge> <edge>'", line, t[0].column);
      node_names.push_back(t[0].text);
      pending_nodes.push_back({{t[3].text, t[4].text, t[5].text}, line});
    }
  });

  MajGraph g(inputs);
  std::unordered_map<std::string, Signal> names;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!names.emplace(inputs[i], g.input(i)).second) throw parse_error("duplicate name '" + inputs[i] + "'", 0, 0);
  }
  auto resolve = [&](const std::string& e, std::size_t line) {
    if (e == "0") return MajGraph::constant(false);
    if (e == "1") return MajGraph::constant(true);
    const bool neg = !e.empty() && e[0] == '!';
    const auto it = names.find(neg ? e.substr(1) : e);
    if (it == names.end()) throw parse_error("dangling reference '" + e + "'", line, 0);
    return it->second ^ neg;
  };
  for (std::size_t n = 0; n < pending_nodes.size(); ++n) {
    const auto& [edges, line] = pending_nodes[n];
    const Signal s = g.add_node(resolve(edges[0], line), resolve(edges[1], line), resolve(edges[2], line));
    if (!names.emplace(node_names[n], s).second) throw parse_error("duplicate name '" + node_names[n] + "'", line, 0);
  }
  for (const auto& o : pending_outputs) g.add_output(o.name, resolve(o.edge, o.line));
  return g;
}

}  // namespace simdram::logic

template <>
struct std::hash<simdram::logic::Signal> {
  std::size_t operator()(simdram::logic::Signal s) const noexcept { return std::hash<std::uint32_t>{}(s.raw()); }
};

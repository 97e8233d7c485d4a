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
#include <cctype>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simdram/error.hpp"

namespace simdram::logic {

enum class GateKind : std::uint8_t { and2, or2, not1, const0, const1 };

inline std::size_t arity(GateKind k) noexcept {
  switch (k) {
    case GateKind::and2:
    case GateKind::or2:
      return 2;
    case GateKind::not1:
      return 1;
    default:
      return 0;
  }
}

inline std::string_view to_string(GateKind k) noexcept {
  switch (k) {
    case GateKind::and2: return "AND";
    case GateKind::or2: return "OR";
    case GateKind::not1: return "NOT";
    case GateKind::const0: return "CONST0";
    case GateKind::const1: return "CONST1";
  }
  return "?";
}

/// Reference to a primary input or to a gate of a netlist.
struct Ref {
  enum class Kind : std::uint8_t { input, gate };
  Kind kind = Kind::input;
  std::uint32_t index = 0;

  static constexpr Ref input(std::uint32_t i) noexcept { return {Kind::input, i}; }
  static constexpr Ref gate(std::uint32_t i) noexcept { return {Kind::gate, i}; }
  constexpr bool is_input() const noexcept { return kind == Kind::input; }
  constexpr bool is_gate() const noexcept { return kind == Kind::gate; }

  friend constexpr bool operator==(Ref, Ref) noexcept = default;
};

struct Gate {
  GateKind kind;
  std::array<Ref, 2> operands{};
  std::string name;
};

struct NetlistOutput {
  std::string name;
  Ref ref;
};

/// AND2/OR2/NOT gate DAG with named primary inputs and outputs.
///
/// Gates are kept in topological order: a gate may only reference inputs and
/// gates added before it. The class is built incrementally and is treated as
/// immutable once handed to the rest of the toolchain.
class LogicNetlist {
 public:
  Ref add_input(std::string name) {
    inputs_.push_back(std::move(name));
    return Ref::input(static_cast<std::uint32_t>(inputs_.size() - 1));
  }

  Ref add_gate(GateKind kind, std::array<Ref, 2> operands, std::string name = {}) {
    for (std::size_t i = 0; i < arity(kind); ++i) check_ref(operands[i]);
    for (std::size_t i = arity(kind); i < 2; ++i) operands[i] = Ref{};
    if (name.empty()) name = "n" + std::to_string(gates_.size());
    gates_.push_back(Gate{kind, operands, std::move(name)});
    return Ref::gate(static_cast<std::uint32_t>(gates_.size() - 1));
  }

  void add_output(std::string name, Ref ref) {
    check_ref(ref);
    outputs_.push_back(NetlistOutput{std::move(name), ref});
  }

  std::size_t input_count() const noexcept { return inputs_.size(); }
  std::size_t output_count() const noexcept { return outputs_.size(); }
  std::size_t gate_count() const noexcept { return gates_.size(); }

  const std::vector<std::string>& input_names() const noexcept { return inputs_; }
  std::vector<std::string> output_names() const {
    std::vector<std::string> names;
    names.reserve(outputs_.size());
    for (const auto& o : outputs_) names.push_back(o.name);
    return names;
  }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<NetlistOutput>& outputs() const noexcept { return outputs_; }

  /// Bit-parallel simulation. `inputs` holds `words` 64-bit words per primary
  /// input, input-major; the result holds `words` words per output.
  std::vector<std::uint64_t> simulate(std::span<const std::uint64_t> inputs, std::size_t words) const {
    if (inputs.size() != inputs_.size() * words)
      throw validation_error("netlist simulation: pattern size does not match input count");
    std::vector<std::uint64_t> values(gates_.size() * words);
    auto row = [&](Ref r) -> const std::uint64_t* {
      return r.is_input() ? inputs.data() + r.index * words : values.data() + r.index * words;
    };
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      std::uint64_t* out = values.data() + g * words;
      const Gate& gate = gates_[g];
      switch (gate.kind) {
        case GateKind::and2: {
          const auto* a = row(gate.operands[0]);
          const auto* b = row(gate.operands[1]);
          for (std::size_t w = 0; w < words; ++w) out[w] = a[w] & b[w];
          break;
        }
        case GateKind::or2: {
          const auto* a = row(gate.operands[0]);
          const auto* b = row(gate.operands[1]);
          for (std::size_t w = 0; w < words; ++w) out[w] = a[w] | b[w];
          break;
        }
        case GateKind::not1: {
          const auto* a = row(gate.operands[0]);
          for (std::size_t w = 0; w < words; ++w) out[w] = ~a[w];
          break;
        }
        case GateKind::const0:
          std::fill(out, out + words, std::uint64_t{0});
          break;
        case GateKind::const1:
          std::fill(out, out + words, ~std::uint64_t{0});
          break;
      }
    }
    std::vector<std::uint64_t> result(outputs_.size() * words);
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
      const auto* src = row(outputs_[o].ref);
      std::copy(src, src + words, result.begin() + static_cast<std::ptrdiff_t>(o * words));
    }
    return result;
  }

  /// Checks every structural invariant; throws validation_error.
  void validate() const {
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      for (std::size_t i = 0; i < arity(gates_[g].kind); ++i) {
        const Ref r = gates_[g].operands[i];
        if (r.is_input() ? r.index >= inputs_.size() : r.index >= g)
          throw validation_error("gate '" + gates_[g].name + "' references a later or missing signal");
      }
    }
    for (const auto& o : outputs_) check_ref(o.ref);
  }

 private:
  void check_ref(Ref r) const {
    const std::size_t limit = r.is_input() ? inputs_.size() : gates_.size();
    if (r.index >= limit) throw validation_error("dangling reference in netlist");
  }

  std::vector<std::string> inputs_;
  std::vector<Gate> gates_;
  std::vector<NetlistOutput> outputs_;
};

/// Scalar evaluation, one bit per input in declaration order.
inline std::vector<bool> eval_netlist(const LogicNetlist& net, const std::vector<bool>& assignment) {
  if (assignment.size() != net.input_count())
    throw validation_error("eval_netlist: assignment does not cover all inputs");
  std::vector<std::uint64_t> words(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) words[i] = assignment[i] ? 1 : 0;
  const auto out = net.simulate(words, 1);
  std::vector<bool> result(out.size());
  for (std::size_t o = 0; o < out.size(); ++o) result[o] = (out[o] & 1) != 0;
  return result;
}

/// Front-end helper used by the operation generators. Folds constants and
/// double negations so the emitted netlist carries no trivially dead logic.
class NetlistBuilder {
 public:
  Ref input(const std::string& name) { return net_.add_input(name); }

  std::vector<Ref> input_word(const std::string& name, std::size_t width) {
    std::vector<Ref> bits;
    for (std::size_t i = 0; i < width; ++i) bits.push_back(input(name + "_" + std::to_string(i)));
    return bits;
  }

  Ref constant(bool value) {
    Ref& cached = value ? one_ : zero_;
    if (!has_constant(value)) {
      cached = net_.add_gate(value ? GateKind::const1 : GateKind::const0, {});
      (value ? has_one_ : has_zero_) = true;
    }
    return cached;
  }

  Ref not_(Ref a) {
    if (auto c = const_value(a)) return constant(!*c);
    if (a.is_gate() && net_.gates()[a.index].kind == GateKind::not1) return net_.gates()[a.index].operands[0];
    return net_.add_gate(GateKind::not1, {a, Ref{}});
  }

  Ref and_(Ref a, Ref b) {
    const auto ca = const_value(a);
    const auto cb = const_value(b);
    if (ca) return *ca ? b : constant(false);
    if (cb) return *cb ? a : constant(false);
    if (a == b) return a;
    return net_.add_gate(GateKind::and2, {a, b});
  }

  Ref or_(Ref a, Ref b) {
    const auto ca = const_value(a);
    const auto cb = const_value(b);
    if (ca) return *ca ? constant(true) : b;
    if (cb) return *cb ? constant(true) : a;
    if (a == b) return a;
    return net_.add_gate(GateKind::or2, {a, b});
  }

  /// (a AND NOT b) OR (NOT a AND b)
  Ref xor_(Ref a, Ref b) {
    const auto ca = const_value(a);
    const auto cb = const_value(b);
    if (ca) return *ca ? not_(b) : b;
    if (cb) return *cb ? not_(a) : a;
    return or_(and_(a, not_(b)), and_(not_(a), b));
  }

  Ref xnor_(Ref a, Ref b) { return not_(xor_(a, b)); }

  /// sel ? a : b
  Ref mux(Ref sel, Ref a, Ref b) {
    if (auto c = const_value(sel)) return *c ? a : b;
    if (a == b) return a;
    return or_(and_(sel, a), and_(not_(sel), b));
  }

  void output(const std::string& name, Ref r) { net_.add_output(name, r); }

  void output_word(const std::string& name, const std::vector<Ref>& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i) output(name + "_" + std::to_string(i), bits[i]);
  }

  LogicNetlist build() && { return std::move(net_); }
  const LogicNetlist& netlist() const noexcept { return net_; }

 private:
  bool has_constant(bool value) const noexcept { return value ? has_one_ : has_zero_; }

  std::optional<bool> const_value(Ref r) const {
    if (!r.is_gate()) return std::nullopt;
    const auto k = net_.gates()[r.index].kind;
    if (k == GateKind::const0) return false;
    if (k == GateKind::const1) return true;
    return std::nullopt;
  }

  LogicNetlist net_;
  Ref zero_{}, one_{};
  bool has_zero_ = false;
  bool has_one_ = false;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto tail = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']';
  };
  return head(s[0]) && std::all_of(s.begin() + 1, s.end(), tail);
}

/// Splits a line-oriented source into statements. A statement ends at a
/// newline or ';'; '#' comments run to end of line.
template <typename Fn>
void for_each_statement(std::string_view text, Fn&& fn) {
  std::size_t line = 1;
  std::size_t col = 1;
  std::vector<Token> tokens;
  std::string current;
  std::size_t current_col = 0;
  bool in_comment = false;
  std::size_t stmt_line = 1;
  auto flush_token = [&] {
    if (!current.empty()) tokens.push_back(Token{std::move(current), current_col});
    current.clear();
  };
  auto flush_statement = [&] {
    flush_token();
    if (!tokens.empty()) fn(tokens, stmt_line);
    tokens.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      in_comment = false;
      flush_statement();
      ++line;
      col = 1;
      stmt_line = line;
      continue;
    }
    if (!in_comment) {
      if (c == '#') {
        in_comment = true;
      } else if (c == ';') {
        flush_statement();
        stmt_line = line;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        flush_token();
      } else if (c == '=') {
        flush_token();
        tokens.push_back(Token{"=", col});
      } else {
        if (current.empty()) current_col = col;
        current.push_back(c);
      }
    }
    ++col;
  }
  flush_statement();
}

}  // namespace detail

/// Parses the line-oriented netlist format:
///   in <name>
///   <name> = AND <ref> <ref> | OR <ref> <ref> | NOT <ref> | CONST0 | CONST1
///   out <name> = <ref>
/// Statements may also be separated by ';'. '#' starts a comment.
inline LogicNetlist parse_netlist(std::string_view text) {
  LogicNetlist net;
  std::unordered_map<std::string, Ref> names;
  std::unordered_map<std::string, bool> output_names;

  detail::for_each_statement(text, [&](const std::vector<detail::Token>& t, std::size_t line) {
    auto fail = [&](const std::string& msg, std::size_t tok) -> void {
      throw parse_error(msg, line, tok < t.size() ? t[tok].column : t.back().column);
    };
    auto declare = [&](std::size_t tok) {
      const std::string& name = t[tok].text;
      if (!detail::is_identifier(name)) fail("invalid identifier '" + name + "'", tok);
      if (names.count(name) || output_names.count(name)) fail("duplicate name '" + name + "'", tok);
    };
    auto resolve = [&](std::size_t tok) -> Ref {
      const auto it = names.find(t[tok].text);
      if (it == names.end()) fail("dangling reference '" + t[tok].text + "'", tok);
      return it->second;
    };

    if (t[0].text == "in") {
      if (t.size() != 2) fail("expected 'in <name>'", t.size() < 2 ? 0 : 2);
      declare(1);
      names.emplace(t[1].text, net.add_input(t[1].text));
      return;
    }
    if (t[0].text == "out") {
      if (t.size() != 4 || t[2].text != "=") fail("expected 'out <name> = <ref>'", t.size() < 3 ? 0 : 2);
      declare(1);
      net.add_output(t[1].text, resolve(3));
      output_names.emplace(t[1].text, true);
      return;
    }
    if (t.size() < 3 || t[1].text != "=") fail("expected '<name> = <GATE> <refs...>'", t.size() < 2 ? 0 : 1);
    declare(0);
    const std::string& op = t[2].text;
    GateKind kind;
    if (op == "AND") kind = GateKind::and2;
    else if (op == "OR") kind = GateKind::or2;
    else if (op == "NOT") kind = GateKind::not1;
    else if (op == "CONST0") kind = GateKind::const0;
    else if (op == "CONST1") kind = GateKind::const1;
    else {
      fail("unknown gate '" + op + "'", 2);
      return;
    }
    const std::size_t given = t.size() - 3;
    if (given != arity(kind)) {
      fail("arity mismatch: " + std::string(to_string(kind)) + " takes " + std::to_string(arity(kind)) +
               " operand(s), got " + std::to_string(given),
           2);
    }
    std::array<Ref, 2> ops{};
    for (std::size_t i = 0; i < given; ++i) ops[i] = resolve(3 + i);
    names.emplace(t[0].text, net.add_gate(kind, ops, t[0].text));
  });
  net.validate();
  return net;
}

/// Writes a netlist in the format accepted by parse_netlist.
inline std::string to_text(const LogicNetlist& net) {
  std::ostringstream os;
  auto name_of = [&](Ref r) -> const std::string& {
    return r.is_input() ? net.input_names()[r.index] : net.gates()[r.index].name;
  };
  for (const auto& in : net.input_names()) os << "in " << in << '\n';
  for (const auto& g : net.gates()) {
    os << g.name << " = " << to_string(g.kind);
    for (std::size_t i = 0; i < arity(g.kind); ++i) os << ' ' << name_of(g.operands[i]);
    os << '\n';
  }
  for (const auto& o : net.outputs()) os << "out " << o.name << " = " << name_of(o.ref) << '\n';
  return os.str();
}

}  // namespace simdram::logic

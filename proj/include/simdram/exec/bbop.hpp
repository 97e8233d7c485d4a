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

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simdram/error.hpp"
#include "simdram/logic/netlist.hpp"

namespace simdram::exec {

enum class Direction : std::uint8_t { h2v, v2h };

/// trsp h2v <buffer> <layout> w<k> n<N>   |   trsp v2h <layout> <buffer> w<k> n<N>
struct Transpose {
  Direction direction = Direction::h2v;
  std::string src;
  std::string dst;
  std::uint32_t width = 0;
  std::size_t elements = 0;
};

/// op <key> <dst> <src>...   (predication: op select:w8 <dst> <a> <b> <cond>)
struct Operate {
  std::string key;
  std::string dst;
  std::vector<std::string> srcs;
};

/// load <buffer> <file>   (.bin: little-endian 64-bit elements, else CSV)
struct Load {
  std::string buffer;
  std::string path;
};

/// store <buffer> <file>
struct Store {
  std::string buffer;
  std::string path;
};

using BbopInstruction = std::variant<Transpose, Operate, Load, Store>;

struct SourceInstruction {
  BbopInstruction instruction;
  std::size_t line = 0;
};

inline std::string to_text(const BbopInstruction& ins) {
  struct Visitor {
    std::string operator()(const Transpose& t) const {
      return std::string("trsp ") + (t.direction == Direction::h2v ? "h2v " : "v2h ") + t.src + " " + t.dst + " w" +
             std::to_string(t.width) + " n" + std::to_string(t.elements);
    }
    std::string operator()(const Operate& o) const {
      std::string s = "op " + o.key + " " + o.dst;
      for (const auto& src : o.srcs) s += " " + src;
      return s;
    }
    std::string operator()(const Load& l) const { return "load " + l.buffer + " " + l.path; }
    std::string operator()(const Store& s) const { return "store " + s.buffer + " " + s.path; }
  };
  return std::visit(Visitor{}, ins);
}

inline std::vector<SourceInstruction> parse_bbop(std::string_view text) {
  std::vector<SourceInstruction> program;
  logic::detail::for_each_statement(text, [&](const std::vector<logic::detail::Token>& t, std::size_t line) {
    auto fail = [&](const std::string& msg, std::size_t tok = 0) {
      throw parse_error(msg, line, t[tok < t.size() ? tok : 0].column);
    };
    auto prefixed_number = [&](std::size_t tok, char prefix) -> std::uint64_t {
      const std::string& s = t[tok].text;
      if (s.size() < 2 || s[0] != prefix || s.find_first_not_of("0123456789", 1) != std::string::npos || s.size() > 12)
        fail(std::string("expected '") + prefix + "<number>'", tok);
      return std::stoull(s.substr(1));
    };
    const std::string& head = t[0].text;
    if (head == "trsp") {
      if (t.size() != 6) fail("expected 'trsp h2v|v2h <src> <dst> w<k> n<N>'");
      Transpose tr;
      if (t[1].text == "h2v") tr.direction = Direction::h2v;
      else if (t[1].text == "v2h") tr.direction = Direction::v2h;
      else fail("expected h2v or v2h", 1);
      tr.src = t[2].text;
      tr.dst = t[3].text;
      tr.width = static_cast<std::uint32_t>(prefixed_number(4, 'w'));
      tr.elements = static_cast<std::size_t>(prefixed_number(5, 'n'));
      program.push_back({tr, line});
    } else if (head == "op") {
      if (t.size() < 4) fail("expected 'op <key> <dst> <src>...'");
      Operate op{t[1].text, t[2].text, {}};
      for (std::size_t i = 3; i < t.size(); ++i) op.srcs.push_back(t[i].text);
      program.push_back({op, line});
    } else if (head == "load" || head == "store") {
      if (t.size() != 3) fail("expected '" + head + " <buffer> <file>'");
      if (head == "load") program.push_back({Load{t[1].text, t[2].text}, line});
      else program.push_back({Store{t[1].text, t[2].text}, line});
    } else {
      fail("unknown instruction '" + head + "'");
    }
  });
  return program;
}

}  // namespace simdram::exec

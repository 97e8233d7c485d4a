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
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simdram/error.hpp"

namespace simdram::layout {

/// Decimal elements separated by commas, whitespace or newlines.
inline std::vector<std::uint64_t> parse_csv_elements(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::string cur;
  std::size_t cur_col = 0;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur.find_first_not_of("0123456789") != std::string::npos || cur.size() > 20)
      throw parse_error("invalid element '" + cur + "'", line, cur_col);
    try {
      out.push_back(std::stoull(cur));
    } catch (const std::out_of_range&) {
      throw parse_error("element '" + cur + "' exceeds 64 bits", line, cur_col);
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      flush();
      if (c == '\n') {
        ++line;
        col = 0;
      }
    } else {
      if (cur.empty()) cur_col = col;
      cur.push_back(c);
    }
    ++col;
  }
  flush();
  return out;
}

inline std::string to_csv(const std::vector<std::uint64_t>& elements) {
  std::string s;
  for (auto e : elements) {
    s += std::to_string(e);
    s += '\n';
  }
  return s;
}

inline bool is_binary_path(std::string_view path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".bin";
}

/// Reads a .bin file (little-endian 64-bit elements) or a CSV file.
inline std::vector<std::uint64_t> read_elements(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  if (!is_binary_path(path)) return parse_csv_elements(data);
  if (data.size() % 8 != 0) throw parse_error("binary element file size is not a multiple of 8 bytes", 0, 0);
  std::vector<std::uint64_t> out(data.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(data[i * 8 + static_cast<std::size_t>(b)]);
    out[i] = v;
  }
  return out;
}

inline void write_elements(const std::string& path, const std::vector<std::uint64_t>& elements) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write '" + path + "'");
  if (!is_binary_path(path)) {
    out << to_csv(elements);
    return;
  }
  for (auto v : elements)
    for (int b = 0; b < 8; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFF));
}

}  // namespace simdram::layout

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
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simdram/alloc/row_space.hpp"
#include "simdram/error.hpp"
#include "simdram/subarray/cost_model.hpp"
#include "simdram/subarray/subarray.hpp"

namespace simdram {

/// Geometry plus cost model, read from `key = value` text.
struct SimConfig {
  std::uint32_t rows = 1024;
  std::size_t lanes = 65536;
  std::uint32_t compute_triples = 2;
  std::uint32_t negation_rows = 2;
  CostModel model{};

  RowSpace space() const { return RowSpace::with_total_rows(rows, compute_triples, negation_rows); }
};

inline SimConfig parse_config(std::string_view text) {
  SimConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw parse_error("expected key = value", number, first + 1);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      std::size_t used = 0;
      auto as_uint = [&] {
        const auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      };
      auto as_double = [&] {
        const auto v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      };
      if (key == "rows") c.rows = static_cast<std::uint32_t>(as_uint());
      else if (key == "lanes") c.lanes = static_cast<std::size_t>(as_uint());
      else if (key == "compute_triples") c.compute_triples = static_cast<std::uint32_t>(as_uint());
      else if (key == "negation_rows") c.negation_rows = static_cast<std::uint32_t>(as_uint());
      else if (key == "t_activate_ns") c.model.t_activate_ns = as_double();
      else if (key == "t_precharge_ns") c.model.t_precharge_ns = as_double();
      else if (key == "e_activate_pj") c.model.e_activate_pj = as_double();
      else if (key == "w_copy") c.model.w_copy = static_cast<std::uint32_t>(as_uint());
      else if (key == "w_copy_neg") c.model.w_copy_neg = static_cast<std::uint32_t>(as_uint());
      else if (key == "w_copy_imm") c.model.w_copy_imm = static_cast<std::uint32_t>(as_uint());
      else if (key == "w_maj") c.model.w_maj = static_cast<std::uint32_t>(as_uint());
      else throw parse_error("unknown configuration key '" + key + "'", number, first + 1);
    } catch (const std::invalid_argument&) {
      throw parse_error("invalid value '" + value + "' for '" + key + "'", number, eq + 2);
    } catch (const std::out_of_range&) {
      throw parse_error("value out of range for '" + key + "'", number, eq + 2);
    }
  }
  c.model.validate();
  if (c.lanes == 0) throw validation_error("lanes must be positive");
  c.space().validate();
  return c;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string format_fixed(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline constexpr std::string_view stats_csv_header =
    "program,lanes,activations,latency_ns,energy_pj,elements,elements_per_activation";

inline void write_stats_csv_row(std::ostream& os, std::string_view program, std::size_t lanes, const RunStats& s) {
  os << program << ',' << lanes << ',' << s.total_activations << ',' << format_fixed(s.simulated_latency_ns) << ','
     << format_fixed(s.simulated_energy_pj) << ',' << s.elements << ',' << format_fixed(s.elements_per_activation(), 6)
     << '\n';
}

}  // namespace simdram

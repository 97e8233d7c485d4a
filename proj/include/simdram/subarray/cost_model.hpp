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

#include "simdram/error.hpp"

namespace simdram {

enum class OpKind : std::uint8_t { copy, copy_neg, copy_imm, maj };

inline constexpr std::size_t op_kind_count = 4;

inline std::string_view to_string(OpKind k) noexcept {
  switch (k) {
    case OpKind::copy: return "COPY";
    case OpKind::copy_neg: return "CNEG";
    case OpKind::copy_imm: return "CIMM";
    case OpKind::maj: return "MAJ";
  }
  return "?";
}

/// Timing, energy and activation weights of the functional DRAM model.
/// Latency of a micro-op is weight * (t_activate + t_precharge); energy is
/// weight * e_activate.
struct CostModel {
  double t_activate_ns = 35.0;
  double t_precharge_ns = 15.0;
  double e_activate_pj = 1.0;
  std::uint32_t w_copy = 2;
  std::uint32_t w_copy_neg = 2;
  std::uint32_t w_copy_imm = 2;
  std::uint32_t w_maj = 1;

  std::uint32_t weight(OpKind k) const noexcept {
    switch (k) {
      case OpKind::copy: return w_copy;
      case OpKind::copy_neg: return w_copy_neg;
      case OpKind::copy_imm: return w_copy_imm;
      case OpKind::maj: return w_maj;
    }
    return 0;
  }

  void validate() const {
    if (!(t_activate_ns > 0) || !(t_precharge_ns > 0) || !(e_activate_pj > 0))
      throw validation_error("cost model times and energies must be strictly positive");
    if (w_copy == 0 || w_copy_neg == 0 || w_copy_imm == 0 || w_maj == 0)
      throw validation_error("cost model weights must be strictly positive");
  }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

}  // namespace simdram

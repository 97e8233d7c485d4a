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
#include <vector>

#include "simdram/alloc/allocate.hpp"
#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/verify.hpp"
#include "simdram/error.hpp"
#include "simdram/logic/convert.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/logic/optimize.hpp"
#include "simdram/logic/truth_table.hpp"
#include "simdram/oplib/descriptor.hpp"
#include "simdram/oplib/generators.hpp"

namespace simdram::oplib {

/// `maj`: AND/OR/NOT netlist -> MIG -> optimized MIG -> rows.
/// `ambit`: every AND/OR gate becomes its own MAJ with a constant operand and
/// no MIG-level optimization is applied.
enum class Basis : std::uint8_t { maj, ambit };

inline std::string_view to_string(Basis b) noexcept { return b == Basis::maj ? "maj" : "ambit"; }

inline Basis parse_basis(std::string_view s) {
  if (s == "maj") return Basis::maj;
  if (s == "ambit") return Basis::ambit;
  throw parse_error("unknown basis '" + std::string(s) + "' (expected maj or ambit)", 0, 0);
}

struct CompileOptions {
  Basis basis = Basis::maj;
  RowSpace space{};
  std::size_t rewrite_budget = logic::default_rewrite_budget;
  AllocateOptions allocate{};
  VerifyOptions verify{};
};

struct CompiledOp {
  std::string key;
  Basis basis = Basis::maj;
  std::vector<Operand> operands;
  std::vector<Operand> results;
  logic::LogicNetlist netlist;
  logic::MajGraph graph;
  MicroProgram program;
  VerifyResult verification;
};

/// Groups inputs named <stem>_0, <stem>_1, ... into one operand per stem, in
/// declaration order. Names without a numeric suffix form 1-bit operands.
inline std::vector<Operand> infer_operands(const std::vector<std::string>& names) {
  std::vector<Operand> groups;
  for (const auto& n : names) {
    const auto us = n.rfind('_');
    const bool indexed = us != std::string::npos && us + 1 < n.size() &&
                         n.find_first_not_of("0123456789", us + 1) == std::string::npos;
    const std::string stem = indexed ? n.substr(0, us) : n;
    const std::uint32_t bit = indexed ? static_cast<std::uint32_t>(std::stoul(n.substr(us + 1))) : 0;
    if (indexed && !groups.empty() && groups.back().name == stem && groups.back().width == bit) {
      ++groups.back().width;
    } else {
      groups.push_back({indexed && bit == 0 ? stem : n, 1});
    }
  }
  return groups;
}

/// Compiles a netlist and verifies both the graph (against the netlist) and
/// the micro-program (against the graph). Throws validation_error when
/// either check fails.
inline CompiledOp compile_netlist(const logic::LogicNetlist& net, std::string label, const CompileOptions& opt = {}) {
  net.validate();
  CompiledOp c;
  c.key = std::move(label);
  c.basis = opt.basis;
  c.operands = infer_operands(net.input_names());
  c.results = infer_operands(net.output_names());
  c.netlist = net;
  const logic::MajGraph direct = logic::aoi_to_mig(net);
  c.graph = opt.basis == Basis::maj ? logic::optimize_mig(direct, opt.rewrite_budget) : direct;

  const auto eq = logic::equivalent(net, c.graph, opt.verify.trials, opt.verify.seed);
  if (!eq.equivalent) throw validation_error("compile " + c.key + ": optimized graph differs from the netlist");

  c.program = allocate(c.graph, opt.space, opt.allocate);
  c.program.label = c.key;
  c.verification = verify_program(c.program, c.graph, opt.verify);
  if (!c.verification.ok)
    throw validation_error("compile " + c.key + ": micro-program fails verification on output " +
                           c.verification.failing_output);
  return c;
}

/// gen -> aoi_to_mig -> optimize_mig (maj basis only) -> allocate -> verify.
inline CompiledOp compile_op(const OpDescriptor& d, const CompileOptions& opt = {}) {
  d.validate();
  CompiledOp c = compile_netlist(generate(d), d.key(), opt);
  c.operands = d.operands();
  c.results = {d.result()};
  return c;
}

}  // namespace simdram::oplib

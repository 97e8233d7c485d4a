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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/verify.hpp"
#include "simdram/error.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/oplib/compile.hpp"
#include "simdram/oplib/descriptor.hpp"

namespace simdram::exec {

/// A verified micro-program and the operand signature used to bind it.
struct ProgramEntry {
  std::string key;
  std::vector<oplib::Operand> operands;
  std::vector<oplib::Operand> results;
  MicroProgram program;

  std::uint32_t result_width() const {
    std::uint32_t w = 0;
    for (const auto& r : results) w += r.width;
    return w;
  }
};

/// Operation key -> micro-program. Every program is checked with
/// verify_program on the way in, so the table never holds an unverified one.
class ProgramTable {
 public:
  /// Verifies `p` against `reference` and stores it under `key`.
  void register_program(const std::string& key, const MicroProgram& p, const logic::MajGraph& reference,
                        std::vector<oplib::Operand> operands, std::vector<oplib::Operand> results,
                        const VerifyOptions& verify = {}) {
    if (entries_.count(key)) throw validation_error("program key '" + key + "' is already registered");
    check_signature(key, p, operands, results);
    for (const auto& op : p.ops) {
      if (op.kind == OpKind::maj || op.dst.kind != RowKind::data) continue;
      for (const auto& b : p.input_bindings)
        if (b.row == op.dst.index)
          throw validation_error("program '" + key + "' overwrites its input row r" + std::to_string(b.row));
    }
    const VerifyResult r = verify_program(p, reference, verify);
    if (!r.ok) throw validation_error("program '" + key + "' rejected: verification failed on output " + r.failing_output);
    entries_.emplace(key, ProgramEntry{key, std::move(operands), std::move(results), p});
  }

  /// Registers a compiled operation under its own key.
  void register_program(const oplib::CompiledOp& c, const VerifyOptions& verify = {}) {
    register_program(c.key, c.program, c.graph, c.operands, c.results, verify);
  }

  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  const ProgramEntry& at(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw validation_error("unknown operation key '" + key + "'");
    return it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

  std::vector<std::string> keys() const {
    std::vector<std::string> k;
    for (const auto& [key, _] : entries_) k.push_back(key);
    return k;
  }

 private:
  static void check_signature(const std::string& key, const MicroProgram& p, const std::vector<oplib::Operand>& ops,
                              const std::vector<oplib::Operand>& results) {
    std::size_t in_bits = 0;
    for (const auto& o : ops) in_bits += o.width;
    std::size_t out_bits = 0;
    for (const auto& r : results) out_bits += r.width;
    if (in_bits != p.input_bindings.size() || out_bits != p.output_bindings.size())
      throw validation_error("program '" + key + "' does not match its operand signature");
  }

  std::map<std::string, ProgramEntry> entries_;
};

}  // namespace simdram::exec

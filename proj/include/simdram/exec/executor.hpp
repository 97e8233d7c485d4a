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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/error.hpp"
#include "simdram/exec/bbop.hpp"
#include "simdram/exec/program_table.hpp"
#include "simdram/layout/buffer_io.hpp"
#include "simdram/layout/element_layout.hpp"
#include "simdram/layout/transpose.hpp"
#include "simdram/subarray/subarray.hpp"

namespace simdram::exec {

struct InstructionReport {
  std::string text;
  RunStats stats;
};

struct ExecutionReport {
  std::vector<InstructionReport> instructions;
  RunStats aggregate;
};

/// Control unit: interprets a bbop instruction stream against one subarray,
/// looking operations up in a program table. Layout ids are handles to rows
/// the executor allocates; every layout occupies lanes [0, elements).
class Executor {
 public:
  Executor(SubarrayState& state, const ProgramTable& table, std::filesystem::path base_dir = {})
      : state_(state), table_(table), base_dir_(std::move(base_dir)), owned_(state.space().data_rows, 0) {}

  void set_buffer(const std::string& name, std::vector<std::uint64_t> elements) {
    buffers_[name] = std::move(elements);
  }
  bool has_buffer(const std::string& name) const { return buffers_.count(name) != 0; }
  const std::vector<std::uint64_t>& buffer(const std::string& name) const {
    const auto it = buffers_.find(name);
    if (it == buffers_.end()) throw validation_error("unknown buffer '" + name + "'");
    return it->second;
  }
  bool has_layout(const std::string& name) const { return layouts_.count(name) != 0; }
  const layout::ElementLayout& layout(const std::string& name) const {
    const auto it = layouts_.find(name);
    if (it == layouts_.end()) throw validation_error("unknown layout '" + name + "'");
    return it->second;
  }

  ExecutionReport execute(std::span<const BbopInstruction> program) {
    ExecutionReport report;
    for (const auto& ins : program) {
      InstructionReport r{to_text(ins), std::visit([&](const auto& i) { return apply(i); }, ins)};
      report.aggregate += r.stats;
      report.instructions.push_back(std::move(r));
    }
    return report;
  }

  /// As execute(), prefixing any error with the instruction's source line.
  ExecutionReport execute(const std::vector<SourceInstruction>& program) {
    ExecutionReport report;
    for (const auto& s : program) {
      try {
        InstructionReport r{to_text(s.instruction), std::visit([&](const auto& i) { return apply(i); }, s.instruction)};
        report.aggregate += r.stats;
        report.instructions.push_back(std::move(r));
      } catch (const parse_error& e) {
        throw parse_error(prefixed(s.line, e), 0, 0);
      } catch (const validation_error& e) {
        throw validation_error(prefixed(s.line, e));
      } catch (const execution_error& e) {
        throw execution_error(prefixed(s.line, e));
      } catch (const allocation_error& e) {
        throw allocation_error(prefixed(s.line, e), e.required(), e.available());
      } catch (const error& e) {
        throw error(prefixed(s.line, e));
      }
    }
    return report;
  }

 private:
  static std::string prefixed(std::size_t line, const std::exception& e) {
    return "line " + std::to_string(line) + ": " + e.what();
  }

  std::string resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return (p.is_absolute() || base_dir_.empty() ? p : base_dir_ / p).string();
  }

  layout::ElementLayout& define_layout(const std::string& name, std::uint32_t width, std::size_t lanes) {
    if (lanes > state_.lanes())
      throw validation_error("layout '" + name + "' needs " + std::to_string(lanes) + " lanes, subarray has " +
                             std::to_string(state_.lanes()));
    if (auto it = layouts_.find(name); it != layouts_.end()) {
      if (it->second.width_bits != width || it->second.lane_count != lanes)
        throw validation_error("layout '" + name + "' redefined with a different shape");
      return it->second;
    }
    layout::ElementLayout l{width, {}, 0, lanes};
    for (std::uint32_t r = 0; r < owned_.size() && l.rows.size() < width; ++r)
      if (!owned_[r]) l.rows.push_back(Row::data(r));
    if (l.rows.size() < width) throw allocation_error("out of data rows for layout '" + name + "'", width, l.rows.size());
    for (const Row r : l.rows) owned_[r.index] = 1;
    return layouts_.emplace(name, std::move(l)).first->second;
  }

  RunStats apply(const Transpose& t) {
    if (t.direction == Direction::h2v) {
      const auto& elems = buffer(t.src);
      if (elems.size() != t.elements)
        throw validation_error("buffer '" + t.src + "' holds " + std::to_string(elems.size()) + " elements, expected " +
                               std::to_string(t.elements));
      const layout::VerticalTile tile = layout::transpose(layout::HorizontalBuffer{t.width, elems});
      layout::load_tile(state_, tile, define_layout(t.dst, t.width, t.elements));
    } else {
      const auto& l = layout(t.src);
      if (l.width_bits != t.width || l.lane_count != t.elements)
        throw validation_error("layout '" + t.src + "' does not have shape w" + std::to_string(t.width) + " n" +
                               std::to_string(t.elements));
      buffers_[t.dst] = layout::untranspose(layout::store_tile(state_, l)).elements;
    }
    return {};
  }

  RunStats apply(const Load& l) {
    buffers_[l.buffer] = layout::read_elements(resolve(l.path));
    return {};
  }

  RunStats apply(const Store& s) {
    layout::write_elements(resolve(s.path), buffer(s.buffer));
    return {};
  }

  RunStats apply(const Operate& o) {
    const ProgramEntry& entry = table_.at(o.key);
    if (o.srcs.size() != entry.operands.size())
      throw validation_error("operation " + o.key + " takes " + std::to_string(entry.operands.size()) +
                             " source operand(s), got " + std::to_string(o.srcs.size()));
    std::vector<const layout::ElementLayout*> srcs;
    for (std::size_t i = 0; i < o.srcs.size(); ++i) {
      if (o.srcs[i] == o.dst) throw validation_error("destination '" + o.dst + "' overlaps source operand");
      const auto& l = layout(o.srcs[i]);
      if (l.width_bits != entry.operands[i].width)
        throw validation_error("width mismatch: operand " + entry.operands[i].name + " of " + o.key + " is " +
                               std::to_string(entry.operands[i].width) + " bits, layout '" + o.srcs[i] + "' is " +
                               std::to_string(l.width_bits));
      if (!srcs.empty() && l.lane_count != srcs.front()->lane_count)
        throw validation_error("source layouts of " + o.key + " have different element counts");
      srcs.push_back(&l);
    }
    const std::size_t lanes = srcs.front()->lane_count;
    const layout::ElementLayout& dst = define_layout(o.dst, entry.result_width(), lanes);
    for (const auto* s : srcs)
      if (dst.overlaps(*s)) throw validation_error("destination '" + o.dst + "' overlaps a source layout");

    const MicroProgram& p = entry.program;
    std::vector<std::int64_t> map(p.rows_used, -1);
    std::size_t bit = 0;
    for (const auto* s : srcs)
      for (const Row r : s->rows) map[p.input_bindings[bit++].row] = r.index;
    for (std::size_t k = 0; k < p.output_bindings.size(); ++k) map[p.output_bindings[k].row] = dst.rows[k].index;
    std::uint32_t next_free = 0;
    for (auto& m : map) {
      if (m >= 0) continue;
      while (next_free < owned_.size() && owned_[next_free]) ++next_free;
      if (next_free >= owned_.size())
        throw allocation_error("out of scratch rows for " + o.key, p.rows_used, owned_.size());
      m = next_free++;
    }
    std::vector<MicroOp> ops = p.ops;
    auto relocate = [&](Row& r) {
      if (r.kind == RowKind::data) r.index = static_cast<std::uint32_t>(map.at(r.index));
    };
    for (auto& op : ops) {
      if (op.kind == OpKind::maj) continue;
      relocate(op.src);
      relocate(op.dst);
    }
    RunStats stats = run(state_, std::span<const MicroOp>(ops));
    stats.elements = ops.empty() ? 0 : lanes;
    return stats;
  }

  SubarrayState& state_;
  const ProgramTable& table_;
  std::filesystem::path base_dir_;
  std::vector<char> owned_;
  std::map<std::string, std::vector<std::uint64_t>> buffers_;
  std::map<std::string, layout::ElementLayout> layouts_;
};

}  // namespace simdram::exec

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

#include <vector>

#include "simdram/logic/maj_graph.hpp"
#include "simdram/logic/netlist.hpp"

namespace simdram::logic {

/// Gate-by-gate translation: AND(a,b) -> MAJ(a,b,0), OR(a,b) -> MAJ(a,b,1),
/// NOT -> edge complement. No simplification is performed.
inline MajGraph aoi_to_mig(const LogicNetlist& net) {
  MajGraph g(net.input_names());
  std::vector<Signal> gate_signal(net.gate_count());
  auto map = [&](Ref r) { return r.is_input() ? g.input(r.index) : gate_signal[r.index]; };
  for (std::size_t i = 0; i < net.gate_count(); ++i) {
    const Gate& gate = net.gates()[i];
    switch (gate.kind) {
      case GateKind::and2:
        gate_signal[i] = g.add_node(map(gate.operands[0]), map(gate.operands[1]), MajGraph::constant(false));
        break;
      case GateKind::or2:
        gate_signal[i] = g.add_node(map(gate.operands[0]), map(gate.operands[1]), MajGraph::constant(true));
        break;
      case GateKind::not1:
        gate_signal[i] = !map(gate.operands[0]);
        break;
      case GateKind::const0:
        gate_signal[i] = MajGraph::constant(false);
        break;
      case GateKind::const1:
        gate_signal[i] = MajGraph::constant(true);
        break;
    }
  }
  for (const auto& o : net.outputs()) g.add_output(o.name, map(o.ref));
  return g;
}

}  // namespace simdram::logic

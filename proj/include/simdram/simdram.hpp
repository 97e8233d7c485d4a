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

#include "simdram/alloc/allocate.hpp"
#include "simdram/alloc/micro_program.hpp"
#include "simdram/alloc/row_space.hpp"
#include "simdram/alloc/verify.hpp"
#include "simdram/error.hpp"
#include "simdram/exec/bbop.hpp"
#include "simdram/exec/executor.hpp"
#include "simdram/exec/program_table.hpp"
#include "simdram/kernels.hpp"
#include "simdram/layout/buffer_io.hpp"
#include "simdram/layout/element_layout.hpp"
#include "simdram/layout/transpose.hpp"
#include "simdram/logic/convert.hpp"
#include "simdram/logic/maj_graph.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/logic/optimize.hpp"
#include "simdram/logic/truth_table.hpp"
#include "simdram/oplib/compile.hpp"
#include "simdram/oplib/descriptor.hpp"
#include "simdram/oplib/generators.hpp"
#include "simdram/oplib/oracles.hpp"
#include "simdram/subarray/config.hpp"
#include "simdram/subarray/cost_model.hpp"
#include "simdram/subarray/subarray.hpp"

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
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simdram/error.hpp"
#include "simdram/exec/bbop.hpp"
#include "simdram/exec/executor.hpp"
#include "simdram/exec/program_table.hpp"
#include "simdram/oplib/compile.hpp"
#include "simdram/oplib/descriptor.hpp"
#include "simdram/oplib/oracles.hpp"
#include "simdram/subarray/config.hpp"
#include "simdram/subarray/subarray.hpp"

namespace simdram::kernels {

enum class Kernel : std::uint8_t { brightness, bitcount_hist, scan_gt, relu_layer, vecadd };

inline constexpr Kernel all_kernels[] = {Kernel::brightness, Kernel::bitcount_hist, Kernel::scan_gt,
                                         Kernel::relu_layer, Kernel::vecadd};

inline std::string_view to_string(Kernel k) noexcept {
  switch (k) {
    case Kernel::brightness: return "brightness";
    case Kernel::bitcount_hist: return "bitcount_hist";
    case Kernel::scan_gt: return "scan_gt";
    case Kernel::relu_layer: return "relu_layer";
    case Kernel::vecadd: return "vecadd";
  }
  return "?";
}

inline Kernel parse_kernel(std::string_view s) {
  for (Kernel k : all_kernels)
    if (to_string(k) == s) return k;
  throw parse_error("unknown kernel '" + std::string(s) + "'", 0, 0);
}

/// Where a kernel runs: on the simulated subarray with programs compiled for
/// one basis, or on the host (correctness baseline only, no timing model).
enum class Backend : std::uint8_t { maj, ambit, scalar };

inline std::string_view to_string(Backend b) noexcept {
  return b == Backend::maj ? "maj" : b == Backend::ambit ? "ambit" : "scalar";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "maj") return Backend::maj;
  if (s == "ambit") return Backend::ambit;
  if (s == "scalar") return Backend::scalar;
  throw parse_error("unknown basis '" + std::string(s) + "' (expected maj, ambit or scalar)", 0, 0);
}

struct KernelOptions {
  std::size_t size = 65536;
  std::uint32_t width = 8;
  std::uint64_t seed = 1;
  std::uint64_t delta = 40;  // brightness increment
  SimConfig config{};
};

/// Host-side input buffers of one kernel instance, in the order the kernel
/// consumes them.
struct KernelInputs {
  std::vector<std::string> names;
  std::vector<std::vector<std::uint64_t>> buffers;

  const std::vector<std::uint64_t>& at(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return buffers[i];
    throw validation_error("kernel has no input '" + std::string(name) + "'");
  }
};

/// Deterministic inputs: a function of (kernel, options) only.
inline KernelInputs make_inputs(Kernel k, const KernelOptions& o) {
  if (o.size == 0) throw validation_error("kernel size must be at least 1");
  if (o.width < 1 || o.width > 64) throw validation_error("kernel width must be in 1..64");
  std::mt19937_64 rng(o.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(k) + 1);
  const std::uint64_t m = oplib::mask_of(o.width);
  auto random_buffer = [&] {
    std::vector<std::uint64_t> v(o.size);
    for (auto& x : v) x = rng() & m;
    return v;
  };
  auto fill = [&](std::uint64_t value) { return std::vector<std::uint64_t>(o.size, value & m); };
  KernelInputs in;
  auto add = [&](std::string name, std::vector<std::uint64_t> v) {
    in.names.push_back(std::move(name));
    in.buffers.push_back(std::move(v));
  };
  switch (k) {
    case Kernel::brightness:
      add("image", random_buffer());
      add("delta", fill(o.delta));
      add("max", fill(m));
      break;
    case Kernel::bitcount_hist:
      add("x", random_buffer());
      break;
    case Kernel::scan_gt:
      add("x", random_buffer());
      add("threshold", fill(rng() & m));
      break;
    case Kernel::relu_layer:
      add("x", random_buffer());
      add("bias", fill(rng() & m));
      break;
    case Kernel::vecadd:
      add("a", random_buffer());
      add("b", random_buffer());
      break;
  }
  return in;
}

/// Operations a kernel needs, in execution order.
inline std::vector<oplib::OpDescriptor> kernel_ops(Kernel k, std::uint32_t width) {
  using oplib::Operation;
  auto d = [width](Operation op) { return oplib::OpDescriptor{op, width}; };
  switch (k) {
    case Kernel::brightness: return {d(Operation::add), d(Operation::gt), d(Operation::select)};
    case Kernel::bitcount_hist: return {d(Operation::bitcount)};
    case Kernel::scan_gt: return {d(Operation::gt)};
    case Kernel::relu_layer: return {d(Operation::add), d(Operation::relu)};
    case Kernel::vecadd: return {d(Operation::add)};
  }
  return {};
}

/// The bbop program for a kernel. Buffers named as in make_inputs; the result
/// lands in buffer "out".
inline std::vector<exec::BbopInstruction> kernel_program(Kernel k, std::uint32_t width, std::size_t n) {
  using namespace exec;
  const auto ops = kernel_ops(k, width);
  std::vector<BbopInstruction> p;
  auto h2v = [&](const std::string& buf) {
    p.push_back(Transpose{Direction::h2v, buf, "v_" + buf, width, n});
  };
  auto v2h = [&](const std::string& layout, std::uint32_t w) {
    p.push_back(Transpose{Direction::v2h, layout, "out", w, n});
  };
  switch (k) {
    case Kernel::brightness:
      h2v("image"), h2v("delta"), h2v("max");
      p.push_back(Operate{ops[0].key(), "sum", {"v_image", "v_delta"}});
      p.push_back(Operate{ops[1].key(), "ovf", {"v_image", "sum"}});
      p.push_back(Operate{ops[2].key(), "y", {"v_max", "sum", "ovf"}});
      v2h("y", width);
      break;
    case Kernel::bitcount_hist:
      h2v("x");
      p.push_back(Operate{ops[0].key(), "y", {"v_x"}});
      v2h("y", ops[0].result().width);
      break;
    case Kernel::scan_gt:
      h2v("x"), h2v("threshold");
      p.push_back(Operate{ops[0].key(), "y", {"v_x", "v_threshold"}});
      v2h("y", 1);
      break;
    case Kernel::relu_layer:
      h2v("x"), h2v("bias");
      p.push_back(Operate{ops[0].key(), "z", {"v_x", "v_bias"}});
      p.push_back(Operate{ops[1].key(), "y", {"z"}});
      v2h("y", width);
      break;
    case Kernel::vecadd:
      h2v("a"), h2v("b");
      p.push_back(Operate{ops[0].key(), "y", {"v_a", "v_b"}});
      v2h("y", width);
      break;
  }
  return p;
}

/// Per-element kernel output computed on the host by composing the scalar
/// operation oracles, mirroring kernel_program step for step.
inline std::vector<std::uint64_t> scalar_output(Kernel k, std::uint32_t width, const KernelInputs& in) {
  const auto ops = kernel_ops(k, width);
  const std::size_t n = in.buffers.front().size();
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto apply = [&](std::size_t op, std::vector<std::uint64_t> args) { return oplib::oracle(ops[op], args); };
    switch (k) {
      case Kernel::brightness: {
        const std::uint64_t x = in.buffers[0][i];
        const std::uint64_t sum = apply(0, {x, in.buffers[1][i]});
        out[i] = apply(2, {in.buffers[2][i], sum, apply(1, {x, sum})});
        break;
      }
      case Kernel::relu_layer: out[i] = apply(1, {apply(0, {in.buffers[0][i], in.buffers[1][i]})}); break;
      case Kernel::bitcount_hist: out[i] = apply(0, {in.buffers[0][i]}); break;
      default: out[i] = apply(0, {in.buffers[0][i], in.buffers[1][i]}); break;
    }
  }
  return out;
}

/// Counts of each value 0..width among bitcount results.
inline std::vector<std::uint64_t> histogram(const std::vector<std::uint64_t>& counts, std::uint32_t width) {
  std::vector<std::uint64_t> h(width + 1, 0);
  for (auto c : counts) {
    if (c > width) throw execution_error("bitcount result " + std::to_string(c) + " exceeds the width");
    ++h[c];
  }
  return h;
}

struct BenchRow {
  Kernel kernel = Kernel::vecadd;
  Backend backend = Backend::maj;
  std::uint32_t width = 8;
  std::size_t elements = 0;
  std::size_t lanes = 0;
  RunStats stats;
  bool verified = false;

  /// Elements per simulated second; 0 without a timing model.
  double throughput() const noexcept {
    return stats.simulated_latency_ns <= 0.0 ? 0.0 : static_cast<double>(elements) * 1e9 / stats.simulated_latency_ns;
  }
};

struct KernelRun {
  BenchRow row;
  std::vector<std::uint64_t> output;
  std::vector<std::uint64_t> histogram;  // bitcount_hist only
};

inline constexpr std::string_view bench_csv_header =
    "kernel,basis,width,elements,lanes,activations,latency_ns,energy_pj,throughput,elements_per_activation,verified";

inline void write_bench_csv_row(std::ostream& os, const BenchRow& r) {
  os << to_string(r.kernel) << ',' << to_string(r.backend) << ',' << r.width << ',' << r.elements << ',' << r.lanes
     << ',' << r.stats.total_activations << ',' << format_fixed(r.stats.simulated_latency_ns) << ','
     << format_fixed(r.stats.simulated_energy_pj) << ',' << format_fixed(r.throughput()) << ','
     << format_fixed(r.stats.elements_per_activation(), 6) << ',' << (r.verified ? "true" : "false") << '\n';
}

/// Compiled programs per basis, compiled on first use and shared between runs.
class KernelLibrary {
 public:
  explicit KernelLibrary(oplib::CompileOptions base = {}) : base_(std::move(base)) {}

  const exec::ProgramTable& table_for(Kernel k, std::uint32_t width, oplib::Basis basis) {
    auto& t = tables_[basis];
    for (const auto& d : kernel_ops(k, width)) {
      if (t.contains(d.key())) continue;
      oplib::CompileOptions opt = base_;
      opt.basis = basis;
      t.register_program(oplib::compile_op(d, opt), opt.verify);
    }
    return t;
  }

 private:
  oplib::CompileOptions base_;
  std::map<oplib::Basis, exec::ProgramTable> tables_;
};

/// Runs one kernel on one backend and checks every element against the
/// scalar composition. Throws execution_error naming the first bad lane.
inline KernelRun run_kernel(Kernel k, Backend backend, const KernelOptions& o, KernelLibrary& lib) {
  const KernelInputs in = make_inputs(k, o);
  const std::vector<std::uint64_t> expected = scalar_output(k, o.width, in);
  KernelRun run;
  run.row = BenchRow{k, backend, o.width, o.size, 0, {}, false};
  if (backend == Backend::scalar) {
    run.output = expected;
  } else {
    if (o.size > o.config.lanes)
      throw validation_error("kernel size " + std::to_string(o.size) + " exceeds the subarray's " +
                             std::to_string(o.config.lanes) + " lanes");
    const auto basis = backend == Backend::maj ? oplib::Basis::maj : oplib::Basis::ambit;
    const exec::ProgramTable& table = lib.table_for(k, o.width, basis);
    SubarrayState state(o.config.space(), o.config.lanes, o.config.model);
    exec::Executor ex(state, table);
    for (std::size_t i = 0; i < in.names.size(); ++i) ex.set_buffer(in.names[i], in.buffers[i]);
    const auto program = kernel_program(k, o.width, o.size);
    run.row.stats = ex.execute(std::span<const exec::BbopInstruction>(program)).aggregate;
    run.row.stats.elements = o.size;  // one result per element, however many ops produced it
    run.row.lanes = o.config.lanes;
    run.output = ex.buffer("out");
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (run.output.at(i) != expected[i])
        throw execution_error(std::string(to_string(k)) + " on " + std::string(to_string(backend)) +
                              ": mismatch at lane " + std::to_string(i) + " (got " + std::to_string(run.output[i]) +
                              ", expected " + std::to_string(expected[i]) + ")");
  }
  if (k == Kernel::bitcount_hist) run.histogram = histogram(run.output, o.width);
  run.row.verified = true;
  return run;
}

inline KernelRun run_kernel(Kernel k, Backend backend, const KernelOptions& o) {
  KernelLibrary lib;
  return run_kernel(k, backend, o, lib);
}

/// Runs every (kernel, backend) pair in order; writes the CSV when `os` is set.
inline std::vector<BenchRow> run_bench(const std::vector<Kernel>& ks, const std::vector<Backend>& backends,
                                       const KernelOptions& o, KernelLibrary& lib, std::ostream* os = nullptr) {
  std::vector<BenchRow> rows;
  if (os) *os << bench_csv_header << '\n';
  for (Kernel k : ks)
    for (Backend b : backends) {
      rows.push_back(run_kernel(k, b, o, lib).row);
      if (os) write_bench_csv_row(*os, rows.back());
    }
  return rows;
}

}  // namespace simdram::kernels

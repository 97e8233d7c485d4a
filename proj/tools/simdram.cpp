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

// simdram: compile, run, benchmark and verify in-DRAM bit-serial programs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simdram/simdram.hpp"

namespace {

namespace fs = std::filesystem;
using namespace simdram;

constexpr int exit_failure = 1;
constexpr int exit_parse_error = 2;

struct Globals {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string csv_path;

  SimConfig config() const { return config_path.empty() ? SimConfig{} : load_config(config_path); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw error("cannot write '" + path + "'");
}

/// Writes to --csv when given, otherwise to stdout.
template <class Fn>
void emit_csv(const Globals& g, Fn&& fn) {
  if (g.csv_path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(g.csv_path, std::ios::binary);
  if (!out) throw error("cannot write '" + g.csv_path + "'");
  fn(out);
}

std::string file_key(std::string key) {
  for (char& c : key)
    if (c == ':') c = '_';
  return key;
}

std::string format_valuation(const std::vector<std::string>& names, const std::vector<bool>& bits) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? " " : "") + names[i] + "=" + (bits[i] ? "1" : "0");
  return s;
}

// compile ------------------------------------------------------------------

struct CompileArgs {
  std::string input;
  std::string basis = "maj";
  std::string output;
  bool dump = false;
};

int cmd_compile(const Globals& g, const CompileArgs& a) {
  oplib::CompileOptions opt;
  opt.basis = oplib::parse_basis(a.basis);
  const SimConfig cfg = g.config();
  opt.space = cfg.space();
  opt.allocate.model = cfg.model;
  opt.verify.seed = g.seed;

  oplib::CompiledOp c;
  if (fs::is_regular_file(a.input)) {
    const auto net = logic::parse_netlist(read_file(a.input));
    c = oplib::compile_netlist(net, fs::path(a.input).stem().string(), opt);
  } else {
    c = oplib::compile_op(oplib::parse_descriptor(a.input), opt);
  }

  const std::string out = a.output.empty() ? file_key(c.key) + "." + std::string(to_string(c.basis)) + ".prog" : a.output;
  write_file(out, to_text(c.program));
  if (a.dump) std::cout << to_text(c.program);
  std::cout << c.key << " basis=" << to_string(c.basis) << " nodes=" << c.graph.node_count() << " depth=" << c.graph.depth()
            << " ops=" << c.program.ops.size() << " rows=" << c.program.rows_used
            << " activation_cost=" << c.program.activation_cost << " verified=" << c.verification.cases_checked
            << " program=" << out << '\n';
  return 0;
}

// run ----------------------------------------------------------------------

struct RunArgs {
  std::string program;
  std::string basis = "maj";
  std::vector<std::string> print;
};

int cmd_run(const Globals& g, const RunArgs& a) {
  const auto program = exec::parse_bbop(read_file(a.program));
  const SimConfig cfg = g.config();

  oplib::CompileOptions opt;
  opt.basis = oplib::parse_basis(a.basis);
  opt.space = cfg.space();
  opt.allocate.model = cfg.model;
  opt.verify.seed = g.seed;
  exec::ProgramTable table;
  for (const auto& s : program) {
    const auto* op = std::get_if<exec::Operate>(&s.instruction);
    if (!op || table.contains(op->key)) continue;
    auto c = oplib::compile_op(oplib::parse_descriptor(op->key), opt);
    if (c.key != op->key)
      throw validation_error("line " + std::to_string(s.line) + ": write operation key '" + op->key +
                             "' in canonical form '" + c.key + "'");
    table.register_program(c, opt.verify);
  }

  SubarrayState state(cfg.space(), cfg.lanes, cfg.model);
  exec::Executor ex(state, table, fs::path(a.program).parent_path());
  const auto report = ex.execute(program);

  for (const auto& r : report.instructions)
    std::cout << r.text << "  activations=" << r.stats.total_activations
              << " latency_ns=" << format_fixed(r.stats.simulated_latency_ns) << '\n';
  std::cout << "total activations=" << report.aggregate.total_activations
            << " latency_ns=" << format_fixed(report.aggregate.simulated_latency_ns)
            << " energy_pj=" << format_fixed(report.aggregate.simulated_energy_pj) << '\n';
  for (const auto& name : a.print) {
    std::cout << name << ':';
    for (auto v : ex.buffer(name)) std::cout << ' ' << v;
    std::cout << '\n';
  }
  if (!g.csv_path.empty())
    emit_csv(g, [&](std::ostream& os) {
      os << stats_csv_header << '\n';
      for (const auto& r : report.instructions) write_stats_csv_row(os, r.text, cfg.lanes, r.stats);
      write_stats_csv_row(os, "total", cfg.lanes, report.aggregate);
    });
  return 0;
}

// bench --------------------------------------------------------------------

struct BenchArgs {
  std::string kernel = "all";
  std::size_t size = 65536;
  std::uint32_t width = 8;
  std::string bases = "maj,ambit,scalar";
  std::uint64_t delta = 40;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
  std::vector<kernels::Kernel> ks;
  if (a.kernel == "all")
    ks.assign(std::begin(kernels::all_kernels), std::end(kernels::all_kernels));
  else
    ks.push_back(kernels::parse_kernel(a.kernel));
  std::vector<kernels::Backend> backends;
  std::stringstream ss(a.bases);
  for (std::string b; std::getline(ss, b, ',');)
    if (!b.empty()) backends.push_back(kernels::parse_backend(b));
  if (backends.empty()) throw validation_error("--bases names no basis");

  kernels::KernelOptions o;
  o.size = a.size;
  o.width = a.width;
  o.seed = g.seed;
  o.delta = a.delta;
  o.config = g.config();
  oplib::CompileOptions copt;
  copt.space = o.config.space();
  copt.allocate.model = o.config.model;
  copt.verify.seed = g.seed;
  kernels::KernelLibrary lib(copt);
  // Results are computed before any output so a failed verification leaves no partial CSV.
  const auto rows = kernels::run_bench(ks, backends, o, lib);
  emit_csv(g, [&](std::ostream& os) {
    os << kernels::bench_csv_header << '\n';
    for (const auto& r : rows) kernels::write_bench_csv_row(os, r);
  });
  return 0;
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string target;
  std::string netlist;
  std::string basis = "maj";
  bool exhaustive = false;
  std::size_t trials = 10000;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  VerifyOptions vopt{a.trials, g.seed};
  MicroProgram program;
  logic::MajGraph reference;
  std::string key;

  if (fs::is_regular_file(a.target)) {
    program = parse_micro_program(read_file(a.target));
    key = program.label.empty() ? a.target : program.label;
    if (!a.netlist.empty()) {
      reference = logic::aoi_to_mig(logic::parse_netlist(read_file(a.netlist)));
    } else if (!program.label.empty()) {
      reference = logic::aoi_to_mig(oplib::generate(oplib::parse_descriptor(program.label)));
    } else {
      throw validation_error("program has no 'op' line; pass --netlist with the reference netlist");
    }
  } else {
    oplib::CompileOptions opt;
    opt.basis = oplib::parse_basis(a.basis);
    const auto d = oplib::parse_descriptor(a.target);
    d.validate();
    reference = logic::aoi_to_mig(oplib::generate(d));
    program = allocate(opt.basis == oplib::Basis::maj ? logic::optimize_mig(reference) : reference, opt.space,
                       opt.allocate);
    key = d.key();
  }

  if (a.exhaustive && reference.input_count() > logic::max_truth_table_inputs)
    throw validation_error(key + " has " + std::to_string(reference.input_count()) + " input bits; --exhaustive supports at most " +
                           std::to_string(logic::max_truth_table_inputs));
  const VerifyResult r = verify_program(program, reference, vopt);
  const bool exhaustive = reference.input_count() <= logic::max_truth_table_inputs;
  if (r.ok) {
    std::cout << "PASS " << key << " cases=" << r.cases_checked << (exhaustive ? " (exhaustive)" : " (random)") << '\n';
    return 0;
  }
  std::cout << "FAIL " << key << " output=" << r.failing_output
            << " counterexample: " << format_valuation(reference.input_names(), *r.counterexample) << '\n';
  return exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIMDRAM toolchain: compile, run, benchmark and verify in-DRAM bit-serial operations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Subarray configuration file (key = value)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for all randomness");
  app.add_option("--csv", g.csv_path, "Write CSV statistics to this path");

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a netlist file or operation descriptor to a micro-program");
  compile->add_option("input", ca.input, "Netlist file or descriptor such as add:w8")->required();
  compile->add_option("--basis", ca.basis, "maj or ambit")->check(CLI::IsMember({"maj", "ambit"}));
  compile->add_option("-o,--output", ca.output, "Program file (default <key>.<basis>.prog)");
  compile->add_flag("--dump", ca.dump, "Print the program text");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Execute a bbop program on the simulated subarray");
  run->add_option("program", ra.program, "bbop program file")->required()->check(CLI::ExistingFile);
  run->add_option("--basis", ra.basis, "maj or ambit")->check(CLI::IsMember({"maj", "ambit"}));
  run->add_option("--print", ra.print, "Print a host buffer after execution (repeatable)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run benchmark kernels and emit CSV");
  bench->add_option("kernel", ba.kernel, "brightness, bitcount_hist, scan_gt, relu_layer, vecadd or all");
  bench->add_option("--size", ba.size, "Elements per kernel")->check(CLI::PositiveNumber);
  bench->add_option("--width", ba.width, "Element width in bits")->check(CLI::Range(1, 64));
  bench->add_option("--bases", ba.bases, "Comma-separated subset of maj,ambit,scalar");
  bench->add_option("--delta", ba.delta, "Brightness increment");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a program or operation against its reference");
  verify->add_option("target", va.target, "Descriptor or program file")->required();
  verify->add_option("--netlist", va.netlist, "Reference netlist for a program file")->check(CLI::ExistingFile);
  verify->add_option("--basis", va.basis, "maj or ambit")->check(CLI::IsMember({"maj", "ambit"}));
  auto* ex = verify->add_flag("--exhaustive", va.exhaustive, "Require exhaustive checking");
  verify->add_option("--trials", va.trials, "Random valuations when inputs exceed 16 bits")->excludes(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*compile) return cmd_compile(g, ca);
    if (*run) return cmd_run(g, ra);
    if (*bench) return cmd_bench(g, ba);
    if (*verify) return cmd_verify(g, va);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_parse_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_failure;
}

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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "simdram/alloc/micro_program.hpp"
#include "simdram/exec/bbop.hpp"
#include "simdram/exec/executor.hpp"
#include "simdram/exec/program_table.hpp"
#include "simdram/layout/buffer_io.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/oplib/compile.hpp"

namespace {

using namespace simdram;
using namespace simdram::exec;

ProgramTable table_with(std::initializer_list<const char*> keys) {
  ProgramTable t;
  for (const char* k : keys) t.register_program(oplib::compile_op(oplib::parse_descriptor(k)));
  return t;
}

SubarrayState small_state(std::size_t lanes = 256) { return SubarrayState(RowSpace::with_total_rows(256), lanes); }

std::string contents_of(const std::string& msg) { return msg; }

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return contents_of(e.what());
  }
  return "";
}

TEST(ProgramTable, RegistersAndLooksUp) {
  const auto t = table_with({"add:w8", "gt:w8"});
  EXPECT_EQ(t.size(), 2u);
  EXPECT_TRUE(t.contains("add:w8"));
  EXPECT_EQ(t.at("gt:w8").result_width(), 1u);
  EXPECT_EQ(t.keys(), (std::vector<std::string>{"add:w8", "gt:w8"}));
  EXPECT_THROW(t.at("mul:w8"), validation_error);
}

TEST(ProgramTable, RejectsDuplicates) {
  auto t = table_with({"add:w4"});
  EXPECT_THROW(t.register_program(oplib::compile_op(oplib::parse_descriptor("add:w4"))), validation_error);
}

TEST(ProgramTable, RejectsSignatureMismatch) {
  ProgramTable t;
  const auto c = oplib::compile_op(oplib::parse_descriptor("add:w4"));
  EXPECT_THROW(t.register_program("add:w4", c.program, c.graph, {{"a", 4}}, c.results), validation_error);
  EXPECT_THROW(t.register_program("add:w4", c.program, c.graph, c.operands, {{"y", 5}}), validation_error);
  EXPECT_EQ(t.size(), 0u);
}

TEST(ProgramTable, RejectsCorruptedProgram) {
  const auto c = oplib::compile_op(oplib::parse_descriptor("add:w4"));
  std::size_t rejected = 0, tried = 0;
  for (std::size_t i = 0; i < c.program.ops.size(); ++i) {
    if (c.program.ops[i].kind != OpKind::copy || c.program.ops[i].src.kind != RowKind::data) continue;
    MicroProgram bad = c.program;
    bad.ops[i].src = Row::ones();
    ++tried;
    ProgramTable t;
    try {
      t.register_program(c.key, bad, c.graph, c.operands, c.results);
    } catch (const validation_error&) {
      ++rejected;
    }
  }
  EXPECT_GT(tried, 0u);
  EXPECT_EQ(rejected, tried);
}

TEST(ProgramTable, RejectsProgramWritingItsInputs) {
  const auto c = oplib::compile_op(oplib::parse_descriptor("and:w1:n2"));
  MicroProgram bad = c.program;
  bad.ops.push_back(MicroOp::copy(Row::data(c.program.output_bindings[0].row), Row::data(0)));
  ProgramTable t;
  EXPECT_NE(error_of([&] { t.register_program(c.key, bad, c.graph, c.operands, c.results); }).find("input row"),
            std::string::npos);
}

TEST(Bbop, ParsesAndPrints) {
  const auto p = parse_bbop(
      "load a in.csv\n"
      "trsp h2v a va w8 n3   # comment\n"
      "op add:w8 vy va vb\n"
      "trsp v2h vy y w8 n3\n"
      "store y out.bin\n");
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p[1].line, 2u);
  const auto& t = std::get<Transpose>(p[1].instruction);
  EXPECT_EQ(t.direction, Direction::h2v);
  EXPECT_EQ(t.width, 8u);
  EXPECT_EQ(t.elements, 3u);
  EXPECT_EQ(std::get<Operate>(p[2].instruction).srcs, (std::vector<std::string>{"va", "vb"}));
  EXPECT_EQ(to_text(p[1].instruction), "trsp h2v a va w8 n3");
  EXPECT_EQ(to_text(p[2].instruction), "op add:w8 vy va vb");
  EXPECT_EQ(to_text(p[4].instruction), "store y out.bin");
  for (const auto& s : p) EXPECT_EQ(to_text(parse_bbop(to_text(s.instruction)).at(0).instruction), to_text(s.instruction));
}

TEST(Bbop, ParseErrorsCarryLine) {
  for (const char* bad : {"trsp x a b w8 n3", "trsp h2v a b 8 n3", "trsp h2v a b w8", "op add:w8 y", "load a",
                          "store a b c", "jump here"}) {
    EXPECT_THROW(parse_bbop(bad), parse_error) << bad;
  }
  try {
    parse_bbop("load a x.csv\n\nfrob\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Executor, AddsThreeElements) {
  const auto t = table_with({"add:w8"});
  auto s = small_state();
  Executor ex(s, t);
  ex.set_buffer("a", {1, 2, 3});
  ex.set_buffer("b", {10, 20, 30});
  const auto r = ex.execute(parse_bbop(
      "trsp h2v a va w8 n3\ntrsp h2v b vb w8 n3\nop add:w8 vy va vb\ntrsp v2h vy y w8 n3\n"));
  EXPECT_EQ(ex.buffer("y"), (std::vector<std::uint64_t>{11, 22, 33}));
  ASSERT_EQ(r.instructions.size(), 4u);
  EXPECT_EQ(r.instructions[0].stats, RunStats{});
  EXPECT_EQ(r.instructions[2].stats.total_activations, t.at("add:w8").program.activation_cost);
  EXPECT_EQ(r.instructions[2].stats.elements, 3u);
  EXPECT_EQ(r.instructions[2].text, "op add:w8 vy va vb");
  EXPECT_EQ(r.aggregate, r.instructions[2].stats);
  EXPECT_EQ(ex.layout("vy").width_bits, 8u);
  EXPECT_FALSE(ex.layout("vy").overlaps(ex.layout("va")));
}

TEST(Executor, LoadsAndStoresFiles) {
  const auto dir = std::filesystem::temp_directory_path() / ("simdram_exec_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  layout::write_elements((dir / "a.csv").string(), {1, 2, 3});
  layout::write_elements((dir / "b.bin").string(), {10, 20, 30});
  const auto t = table_with({"add:w8"});
  auto s = small_state();
  Executor ex(s, t, dir);
  ex.execute(parse_bbop("load a a.csv\nload b b.bin\ntrsp h2v a va w8 n3\ntrsp h2v b vb w8 n3\n"
                        "op add:w8 vy va vb\ntrsp v2h vy y w8 n3\nstore y y.bin\nstore y y.csv\n"));
  EXPECT_EQ(layout::read_elements((dir / "y.bin").string()), (std::vector<std::uint64_t>{11, 22, 33}));
  EXPECT_EQ(layout::read_elements((dir / "y.csv").string()), (std::vector<std::uint64_t>{11, 22, 33}));
  EXPECT_EQ(std::filesystem::file_size(dir / "y.bin"), 24u);
  std::filesystem::remove_all(dir);
}

TEST(Executor, EmptyStreamHasZeroStats) {
  const ProgramTable t;
  auto s = small_state();
  Executor ex(s, t);
  const auto r = ex.execute(std::vector<SourceInstruction>{});
  EXPECT_TRUE(r.instructions.empty());
  EXPECT_EQ(r.aggregate, RunStats{});
}

TEST(Executor, StatsAreAdditiveAndDeterministic) {
  const auto t = table_with({"add:w8", "max:w8", "relu:w8"});
  const auto prog = parse_bbop(
      "trsp h2v a va w8 n100\ntrsp h2v b vb w8 n100\nop add:w8 s va vb\nop max:w8 m s va\nop relu:w8 r m\n"
      "trsp v2h r y w8 n100\n");
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> a(100), b(100);
  for (std::size_t i = 0; i < 100; ++i) a[i] = rng() & 255, b[i] = rng() & 255;
  auto run_once = [&] {
    auto s = small_state();
    Executor ex(s, t);
    ex.set_buffer("a", a);
    ex.set_buffer("b", b);
    auto r = ex.execute(prog);
    return std::make_pair(r, ex.buffer("y"));
  };
  const auto [r1, y1] = run_once();
  const auto [r2, y2] = run_once();
  EXPECT_EQ(y1, y2);
  EXPECT_EQ(r1.aggregate, r2.aggregate);
  RunStats sum;
  for (const auto& i : r1.instructions) sum += i.stats;
  EXPECT_EQ(sum, r1.aggregate);
  std::uint64_t expected = 0;
  for (const char* k : {"add:w8", "max:w8", "relu:w8"}) expected += t.at(k).program.activation_cost;
  EXPECT_EQ(r1.aggregate.total_activations, expected);
  EXPECT_EQ(r1.aggregate.simulated_latency_ns, 50.0 * static_cast<double>(expected));
  for (std::size_t i = 0; i < 100; ++i) {
    const std::uint64_t sm = (a[i] + b[i]) & 255;
    const std::uint64_t m = std::max(sm, a[i]);
    EXPECT_EQ(y1[i], (m & 0x80) ? 0u : m) << i;
  }
}

TEST(Executor, RejectsOverlapWidthAndUnknownKeys) {
  const auto t = table_with({"add:w8", "add:w4"});
  auto s = small_state();
  Executor ex(s, t);
  ex.set_buffer("a", {1, 2});
  ex.set_buffer("c", {1, 2, 3});
  ex.execute(parse_bbop("trsp h2v a va w8 n2\ntrsp h2v a vb w8 n2\ntrsp h2v c vc w8 n3\n"));
  EXPECT_NE(error_of([&] { ex.execute(parse_bbop("op add:w8 va va vb")); }).find("overlaps"), std::string::npos);
  EXPECT_NE(error_of([&] { ex.execute(parse_bbop("op add:w4 y va vb")); }).find("width mismatch"), std::string::npos);
  EXPECT_NE(error_of([&] { ex.execute(parse_bbop("op sub:w8 y va vb")); }).find("unknown operation key"),
            std::string::npos);
  EXPECT_NE(error_of([&] { ex.execute(parse_bbop("op add:w8 y va")); }).find("takes 2"), std::string::npos);
  EXPECT_THROW(ex.execute(parse_bbop("op add:w8 y va vc")), validation_error);
  EXPECT_THROW(ex.execute(parse_bbop("op add:w8 y va nothing")), std::exception);
  EXPECT_THROW(ex.execute(parse_bbop("trsp h2v c vd w8 n2")), validation_error);
  EXPECT_THROW(ex.buffer("nothing"), std::exception);
  const auto msg = error_of([&] { ex.execute(parse_bbop("trsp h2v a va w8 n2\nop add:w8 va va vb")); });
  EXPECT_EQ(msg.rfind("line 2: ", 0), 0u) << msg;
}

TEST(Executor, RunsUserNetlist) {
  const auto net = logic::parse_netlist(
      "in a_0; in a_1; in b_0; in b_1;\n"
      "x0 = OR a_0 b_0; x1 = OR a_1 b_1; n0 = NOT x0; n1 = NOT x1;\n"
      "out y_0 = n0; out y_1 = n1");
  const auto c = oplib::compile_netlist(net, "nor2x2");
  ProgramTable t;
  t.register_program(c);
  EXPECT_EQ(t.at("nor2x2").operands, (std::vector<oplib::Operand>{{"a", 2}, {"b", 2}}));
  auto s = small_state(64);
  Executor ex(s, t);
  ex.set_buffer("a", {0, 1, 2, 3});
  ex.set_buffer("b", {0, 0, 1, 3});
  ex.execute(parse_bbop("trsp h2v a va w2 n4\ntrsp h2v b vb w2 n4\nop nor2x2 vy va vb\ntrsp v2h vy y w2 n4"));
  std::vector<std::uint64_t> expected;
  for (std::uint64_t i = 0; i < 4; ++i) expected.push_back(~(ex.buffer("a")[i] | ex.buffer("b")[i]) & 3);
  EXPECT_EQ(ex.buffer("y"), expected);
}

TEST(Executor, SelectUsesConditionLayout) {
  const auto t = table_with({"select:w8"});
  auto s = small_state();
  Executor ex(s, t);
  ex.set_buffer("a", {1, 2, 3, 4});
  ex.set_buffer("b", {9, 8, 7, 6});
  ex.set_buffer("c", {1, 0, 0, 1});
  ex.execute(parse_bbop("trsp h2v a va w8 n4\ntrsp h2v b vb w8 n4\ntrsp h2v c vc w1 n4\n"
                        "op select:w8 vy va vb vc\ntrsp v2h vy y w8 n4"));
  EXPECT_EQ(ex.buffer("y"), (std::vector<std::uint64_t>{1, 8, 7, 4}));
}

}  // namespace

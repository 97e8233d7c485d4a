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

#include <random>
#include <vector>

#include "harness.hpp"
#include "simdram/logic/netlist.hpp"
#include "simdram/logic/truth_table.hpp"
#include "simdram/oplib/compile.hpp"
#include "simdram/oplib/descriptor.hpp"
#include "simdram/oplib/generators.hpp"
#include "simdram/oplib/oracles.hpp"

namespace {

using namespace simdram;
using namespace simdram::oplib;

// Evaluates a generated netlist on one set of operand values.
std::uint64_t eval(const OpDescriptor& d, const std::vector<std::uint64_t>& operands) {
  const auto net = generate(d);
  std::vector<bool> bits;
  const auto ops = d.operands();
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (std::uint32_t i = 0; i < ops[k].width; ++i) bits.push_back((operands[k] >> i) & 1);
  const auto out = logic::eval_netlist(net, bits);
  std::uint64_t y = 0;
  for (std::size_t i = 0; i < out.size(); ++i) y |= std::uint64_t{out[i]} << i;
  return y;
}

OpDescriptor desc(const char* text) { return parse_descriptor(text); }

TEST(Descriptor, ParseAndKey) {
  const auto d = desc("gt:w16:signed");
  EXPECT_EQ(d.op, Operation::gt);
  EXPECT_EQ(d.width, 16u);
  EXPECT_EQ(d.signedness, Signedness::twos_complement);
  EXPECT_EQ(d.key(), "gt:w16:signed");
  EXPECT_EQ(desc("and:w8").key(), "and:w8:n2");
  EXPECT_EQ(desc("xor:w1:n4").n, 4u);
  EXPECT_EQ(desc("shl:w8:s3").key(), "shl:w8:s3");
  EXPECT_EQ(desc("shr:w8").key(), "shr:w8:s1");
  EXPECT_EQ(desc("relu:w8").signedness, Signedness::twos_complement);
  EXPECT_EQ(desc("relu:w8").key(), "relu:w8");
  EXPECT_EQ(desc("gt:w8:unsigned").key(), "gt:w8");
  for (const auto& i : operation_table) {
    const auto k = std::string(i.name) + ":w8";
    EXPECT_EQ(parse_descriptor(parse_descriptor(k).key()), parse_descriptor(k)) << k;
  }
}

TEST(Descriptor, Errors) {
  for (const char* bad : {"", "add", "foo:w8", "add:w0", "add:w65", "add:w8:n3", "add:w8:signed", "shl:w4:s5",
                          "and:w8:n1", "add:wx", "add:w8:q", "gt:w8:s2"})
    EXPECT_THROW(parse_descriptor(bad), parse_error) << bad;
}

TEST(Descriptor, OperandsAndResults) {
  EXPECT_EQ(desc("and:w4:n3").operands(), (std::vector<Operand>{{"x0", 4}, {"x1", 4}, {"x2", 4}}));
  EXPECT_EQ(desc("select:w8").operands(), (std::vector<Operand>{{"a", 8}, {"b", 8}, {"c", 1}}));
  EXPECT_EQ(desc("relu:w8").operands(), (std::vector<Operand>{{"a", 8}}));
  EXPECT_EQ(desc("eq:w8").result(), (Operand{"y", 1}));
  EXPECT_EQ(desc("bitcount:w8").result(), (Operand{"y", 4}));
  EXPECT_EQ(desc("bitcount:w7").result(), (Operand{"y", 3}));
  EXPECT_EQ(desc("bitcount:w1").result(), (Operand{"y", 1}));
  EXPECT_EQ(desc("max:w8").result(), (Operand{"y", 8}));
  const auto net = generate(desc("add:w4"));
  EXPECT_EQ(net.input_names().front(), "a_0");
  EXPECT_EQ(net.input_names().back(), "b_3");
  EXPECT_EQ(infer_operands(net.input_names()), desc("add:w4").operands());
  EXPECT_EQ(infer_operands({"a", "b_0", "b_1", "cin"}), (std::vector<Operand>{{"a", 1}, {"b", 2}, {"cin", 1}}));
}

TEST(Generators, LogicExamples) {
  EXPECT_EQ(eval(desc("and:w1:n3"), {1, 1, 1}), 1u);
  EXPECT_EQ(eval(desc("and:w1:n3"), {1, 0, 1}), 0u);
  EXPECT_EQ(eval(desc("xor:w1:n3"), {1, 1, 0}), 0u);
  EXPECT_EQ(eval(desc("xor:w1:n3"), {1, 1, 1}), 1u);
  std::mt19937_64 rng(1);
  const auto d = desc("or:w8:n4");
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint64_t> x{rng() & 255, rng() & 255, rng() & 255, rng() & 255};
    EXPECT_EQ(eval(d, x), x[0] | x[1] | x[2] | x[3]);
  }
}

TEST(Generators, RelationalExamples) {
  EXPECT_EQ(eval(desc("eq:w8"), {7, 7}), 1u);
  EXPECT_EQ(eval(desc("neq:w8"), {7, 7}), 0u);
  EXPECT_EQ(eval(desc("gt:w8"), {5, 3}), 1u);
  EXPECT_EQ(eval(desc("gt:w8"), {3, 5}), 0u);
  EXPECT_EQ(eval(desc("gt:w8"), {200, 3}), 1u);
  EXPECT_EQ(eval(desc("gt:w8:signed"), {200, 3}), 0u);  // -56 > 3 is false
  EXPECT_EQ(eval(desc("max:w8:signed"), {0xFF, 1}), 1u);
  EXPECT_EQ(eval(desc("min:w8:signed"), {0xFF, 1}), 0xFFu);
}

TEST(Generators, ArithmeticExamples) {
  EXPECT_EQ(eval(desc("add:w8"), {3, 5}), 8u);
  EXPECT_EQ(eval(desc("sub:w8"), {0, 1}), 255u);
  EXPECT_EQ(eval(desc("mul:w8"), {7, 6}), 42u);
  EXPECT_EQ(eval(desc("div:w8"), {42, 6}), 7u);
  EXPECT_EQ(eval(desc("div:w8"), {42, 0}), 255u);
  EXPECT_EQ(eval(desc("mul:w8"), {16, 17}), (16u * 17u) & 255u);
}

TEST(Generators, OtherExamples) {
  EXPECT_EQ(eval(desc("select:w8"), {9, 4, 1}), 9u);
  EXPECT_EQ(eval(desc("select:w8"), {9, 4, 0}), 4u);
  EXPECT_EQ(eval(desc("bitcount:w8"), {0}), 0u);
  for (std::uint32_t k = 0; k <= 8; ++k) EXPECT_EQ(eval(desc("bitcount:w8"), {(1u << k) - 1}), k);
  EXPECT_EQ(eval(desc("relu:w8"), {5}), 5u);
  EXPECT_EQ(eval(desc("relu:w8"), {256 - 3}), 0u);
  EXPECT_EQ(eval(desc("shl:w8:s3"), {0x31}), 0x88u);
  EXPECT_EQ(eval(desc("shr:w8:s3"), {0x31}), 0x06u);
  EXPECT_EQ(eval(desc("shl:w8:s8"), {0xFF}), 0u);
}

// The library oracle must agree with the test-side reference everywhere it
// is used as ground truth.
TEST(Oracles, AgreeWithIndependentReference) {
  std::mt19937_64 rng(2);
  for (std::uint32_t w : {1u, 4u, 8u, 16u, 32u, 64u}) {
    for (const auto& d : harness::roster(w)) {
      if ((d.op == Operation::shl || d.op == Operation::shr) && d.shift > w) continue;
      for (int t = 0; t < 300; ++t) {
        const auto ops = d.operands();
        std::vector<std::uint64_t> x;
        for (const auto& o : ops) x.push_back(rng() & harness::mask(o.width));
        if (t % 7 == 0 && x.size() > 1) x[1] = t % 2 ? x[0] : 0;
        ASSERT_EQ(oracle(d, x), harness::reference(d, x)) << d.key();
      }
    }
  }
  EXPECT_EQ(sign_extend(0x80, 8), -128);
  EXPECT_EQ(mask_of(64), ~std::uint64_t{0});
}

TEST(CompileOp, AddWidthFourExhaustive) {
  const auto c = compile_op(desc("add:w4"));
  EXPECT_TRUE(c.verification.ok);
  EXPECT_EQ(c.verification.cases_checked, 256u);
  const auto d = desc("add:w4");
  const auto x = harness::exhaustive_operands(d);
  EXPECT_EQ(harness::first_mismatch(d, x, harness::run_lanes(c.program, d, x)), -1);
  EXPECT_EQ(c.program.label, "add:w4");
  EXPECT_EQ(c.results, (std::vector<Operand>{{"y", 4}}));
}

TEST(CompileOp, BasisComparison) {
  CompileOptions ambit;
  ambit.basis = Basis::ambit;
  for (const char* k : {"eq:w8", "add:w8", "gt:w8", "and:w8:n2"}) {
    const auto m = compile_op(desc(k));
    const auto a = compile_op(desc(k), ambit);
    EXPECT_LE(m.program.activation_cost, a.program.activation_cost) << k;
    EXPECT_EQ(a.graph, logic::aoi_to_mig(generate(desc(k)))) << k;
  }
  EXPECT_EQ(parse_basis("ambit"), Basis::ambit);
  EXPECT_EQ(to_string(Basis::maj), "maj");
  EXPECT_THROW(parse_basis("aig"), parse_error);
}

TEST(CompileOp, TwoInputAndIsPlainAnd) {
  const auto c = compile_op(desc("and:w1:n2"));
  EXPECT_EQ(c.graph.node_count(), 1u);
  EXPECT_EQ(c.program.activation_cost, 9u);
  EXPECT_EQ(logic::truth_table(c.graph).to_string(), "1000");
}

TEST(CompileOp, CustomNetlist) {
  const auto net = logic::parse_netlist("in p; in q; in r; t = AND p q; u = OR t r; out y = u");
  const auto c = compile_netlist(net, "custom");
  EXPECT_TRUE(c.verification.ok);
  EXPECT_EQ(c.operands, (std::vector<Operand>{{"p", 1}, {"q", 1}, {"r", 1}}));
  EXPECT_EQ(c.key, "custom");
}

TEST(CompileOp, ExhaustiveAtWidthFour) {
  for (const auto& d : harness::roster(4)) {
    const auto c = compile_op(d);
    const auto x = harness::exhaustive_operands(d);
    EXPECT_EQ(harness::first_mismatch(d, x, harness::run_lanes(c.program, d, x)), -1) << d.key();
  }
}

TEST(CompileOp, RandomLanesAtWidthsEightAndSixteen) {
  std::mt19937_64 rng(3);
  for (std::uint32_t w : {8u, 16u}) {
    for (const auto& d : harness::roster(w)) {
      if (d.op == Operation::div && w == 16) continue;  // covered by the acceptance suite
      const auto c = compile_op(d);
      const auto x = harness::random_operands(d, 4096, rng);
      EXPECT_EQ(harness::first_mismatch(d, x, harness::run_lanes(c.program, d, x)), -1) << d.key();
    }
  }
}

TEST(CompileOp, AlgebraicProperties) {
  std::mt19937_64 rng(4);
  const std::size_t lanes = 2048;
  auto run = [&](const char* k, const std::vector<std::vector<std::uint64_t>>& x) {
    const auto d = desc(k);
    return harness::run_lanes(compile_op(d).program, d, x);
  };
  std::vector<std::uint64_t> a(lanes), b(lanes), c(lanes), ones(lanes, 1);
  for (std::size_t i = 0; i < lanes; ++i) a[i] = rng() & 255, b[i] = rng() & 255, c[i] = rng() & 1;

  EXPECT_EQ(run("add:w8", {a, b}), run("add:w8", {b, a}));
  EXPECT_EQ(run("sub:w8", {a, a}), std::vector<std::uint64_t>(lanes, 0));
  EXPECT_EQ(run("select:w8", {a, b, ones}), a);
  const auto r = run("relu:w8", {a});
  EXPECT_EQ(run("relu:w8", {r}), r);
  for (const char* k : {"max:w8", "max:w8:signed"}) {
    const auto m = run(k, {a, b});
    const bool s = std::string(k).find("signed") != std::string::npos;
    for (std::size_t i = 0; i < lanes; ++i) {
      const auto v = [&](std::uint64_t x) { return s ? harness::as_signed(x, 8) : static_cast<std::int64_t>(x); };
      EXPECT_GE(v(m[i]), v(a[i]));
      EXPECT_GE(v(m[i]), v(b[i]));
    }
  }
}

TEST(CompileOp, WideOperandsVerifyRandomly) {
  CompileOptions o;
  o.verify.trials = 5000;
  const auto c = compile_op(desc("mul:w16"), o);
  EXPECT_TRUE(c.verification.ok);
  EXPECT_EQ(c.verification.cases_checked, 5000u);
}

}  // namespace

// Copyright 2026 The ZigZag Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zz/transform.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "program_gen.h"
#include "zz/common.h"
#include "zz/interp.h"
#include "zz/lang.h"

namespace zz {
namespace {

constexpr int64_t kFuel = 20000;
constexpr int64_t kFuelMultiplier = 4;

Ast LoadFixture() {
  std::ifstream in(std::string(ZZ_TEST_DATA_DIR) + "/fig2_like.mini");
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

int CountFor(const Ast& ast) {
  int n = 0;
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::kFor) ++n;
    });
  }
  return n;
}

void ExpectSameOutputs(const Ast& a, const Ast& b, const std::vector<int64_t>& in) {
  ExecResult ra = Interpret(a, "main", in, kFuel);
  ExecResult rb = Interpret(b, "main", in, kFuel * kFuelMultiplier);
  if (ra.status == ExecStatus::kFuelExhausted ||
      rb.status == ExecStatus::kFuelExhausted) {
    return;
  }
  EXPECT_TRUE(SameBehavior(ra, rb)) << PrettyPrint(b);
}

TEST(TransformTest, RndArgsKeepsResult) {
  Ast ast = Parse("func f(a, b) { return a - b; }\nfunc main() { output(f(5, 3)); }");
  for (uint64_t seed = 0; seed < 8; ++seed) {
    TransformResult r = ApplyTransform(ast, TransformKind::kRndArgs, seed);
    ExecResult out = Interpret(r.ast, "main", {}, 100);
    ASSERT_EQ(1u, out.outputs.size());
    EXPECT_EQ(OutputValue{int64_t{2}}, out.outputs[0]);
    EXPECT_EQ(3u, r.ast.Find("f")->params.size());
  }
}

TEST(TransformTest, SplitTopRemovesForLoops) {
  Ast ast = LoadFixture();
  ASSERT_EQ(1, CountFor(ast));
  TransformResult r = ApplyTransform(ast, TransformKind::kSplitTop, 7);
  EXPECT_EQ(0, CountFor(r.ast));
  int derived = 0;
  for (const auto& fn : r.ast.functions) {
    if (IsGeneratedName(fn.name)) ++derived;
  }
  EXPECT_GE(derived, 2);
}

TEST(TransformTest, EncodeStringsWithoutStringsIsInapplicable) {
  Ast ast = Parse("func main() { output(1); }");
  EXPECT_FALSE(IsApplicable(ast, TransformKind::kEncodeStrings));
  try {
    ApplyTransform(ast, TransformKind::kEncodeStrings, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kInapplicable, e.code());
  }
}

TEST(TransformTest, EncodeStringsBuildsLiteral) {
  Ast ast = Parse("func main() { output(\"hi\"); output(\"hi\"); output(\"\"); }");
  TransformResult r = ApplyTransform(ast, TransformKind::kEncodeStrings, 1);
  EXPECT_EQ(2u, r.ast.functions.size());
  ExpectSameOutputs(ast, r.ast, {});
}

TEST(TransformTest, FlattenRemovesStructuredLoops) {
  Ast ast = LoadFixture();
  TransformResult r = ApplyTransform(ast, TransformKind::kFlatten, 3);
  const FunctionDef* fn = r.ast.Find("dwt_init");
  int loops = 0;
  ForEachStmt(fn->body, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::kWhile || s.kind == Stmt::Kind::kFor) ++loops;
  });
  EXPECT_EQ(1, loops);  // the dispatch loop only
  for (int64_t levels : {0, 3, 8, 9}) ExpectSameOutputs(ast, r.ast, {levels, 17});
}

TEST(TransformTest, MergeSimpleNeedsTwoFunctions) {
  Ast ast = LoadFixture();
  EXPECT_FALSE(IsApplicable(ast, TransformKind::kMergeSimple));
  Ast two = Parse(
      "func f(a) { var x = a + 1; return x; }\n"
      "func g(x, y) { var z[3]; z[0] = x; return z[0] * y; }\n"
      "func main() { output(f(2)); output(g(3, 4)); }");
  TransformResult r = ApplyTransform(two, TransformKind::kMergeSimple, 5);
  EXPECT_EQ(2u, r.ast.functions.size());
  ExpectSameOutputs(two, r.ast, {});
}

TEST(TransformTest, PipelineSingletonEqualsApply) {
  Ast ast = LoadFixture();
  TransformResult a = ApplyTransform(ast, TransformKind::kRndArgs, 11);
  TransformResult b = ApplyPipeline(ast, {TransformKind::kRndArgs}, 11);
  // Stage seeds are derived, so compare shape and behavior.
  EXPECT_EQ(PrettyPrint(ApplyTransform(ast, TransformKind::kRndArgs, DeriveSeed(11, 0)).ast),
            PrettyPrint(b.ast));
  EXPECT_EQ(a.line_map, b.line_map);
}

TEST(TransformTest, PipelineSplitTopThenFlatten) {
  Ast ast = LoadFixture();
  TransformResult r = ApplyPipeline(
      ast, {TransformKind::kSplitTop, TransformKind::kFlatten}, 42);
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    ExpectSameOutputs(ast, r.ast, {rng.Range(-2, 12), rng.Range(-5, 50)});
  }
}

TEST(TransformTest, EmptyPipelineIsPrecondition) {
  try {
    ApplyPipeline(LoadFixture(), {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kPrecondition, e.code());
  }
}

TEST(TransformTest, PipelineSkipsInapplicableStages) {
  Ast ast = LoadFixture();
  TransformResult r = ApplyPipeline(
      ast, {TransformKind::kMergeSimple, TransformKind::kRndArgs}, 3);
  EXPECT_EQ(4u, r.ast.Find("dwt_init")->params.size());
  EXPECT_THROW(ApplyPipeline(ast, {TransformKind::kMergeSimple}, 3), Error);
}

TEST(TransformTest, RejectsUnnumberedInput) {
  Ast ast = LoadFixture();
  ast.functions[0].body[0].line = kNoLine;
  try {
    ApplyTransform(ast, TransformKind::kRndArgs, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kPrecondition, e.code());
  }
}

TEST(TransformTest, ComposeLineMapsIsRelational) {
  LineMap first{{1, {1, 2}}, {2, {3}}};
  LineMap second{{1, {5}}, {2, {6, 7}}, {3, {8}}};
  LineMap expected{{1, {5, 6, 7}}, {2, {8}}};
  EXPECT_EQ(expected, ComposeLineMaps(first, second));
}

TEST(TransformSetTest, NamedInstances) {
  using K = TransformKind;
  EXPECT_TRUE(TransformSet::Named(0).empty());
  EXPECT_EQ(TransformSet({K::kRndArgs, K::kSplitBlock, K::kSplitRecursive}),
            TransformSet::Named(1));
  EXPECT_EQ(8u, TransformSet::Named(5).size());
  EXPECT_EQ(TransformSet::Named(1), TransformSet::Parse("ct2,ct7,ct8"));
  EXPECT_EQ(TransformSet::All(), TransformSet::Parse("all"));
  EXPECT_EQ(TransformSet::Named(3), TransformSet::Parse("md3"));
  EXPECT_EQ("ct2,ct7,ct8", TransformSet::Parse("CT-8,ct7,CT-2").ToString());
  EXPECT_THROW(TransformSet::Parse("ct9"), Error);
  EXPECT_THROW(TransformSet::Parse("ct2,ct2"), Error);
}

// Property checks over generated programs.

class TransformPropertyTest : public ::testing::TestWithParam<TransformKind> {};

TEST_P(TransformPropertyTest, PreservesBehaviorAndTraps) {
  const TransformKind kind = GetParam();
  int applied = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Ast ast = testing::ProgramGen(seed).Generate();
    if (!IsApplicable(ast, kind)) continue;
    ++applied;
    TransformResult r = ApplyTransform(ast, kind, seed * 31 + 1);
    // Determinism and printability.
    TransformResult again = ApplyTransform(ast, kind, seed * 31 + 1);
    ASSERT_EQ(PrettyPrint(r.ast), PrettyPrint(again.ast));
    ASSERT_TRUE(StructurallyEqual(r.ast, Parse(PrettyPrint(r.ast))));
    for (const auto& fn : r.ast.functions) {
      if (!ast.Find(fn.name)) EXPECT_TRUE(IsGeneratedName(fn.name)) << fn.name;
    }
    Rng rng(seed);
    for (int v = 0; v < 10; ++v) {
      auto in = testing::RandomInputs(rng);
      ExecResult before = Interpret(ast, "main", in, kFuel);
      ExecResult after = Interpret(r.ast, "main", in, kFuel * kFuelMultiplier);
      if (before.status == ExecStatus::kFuelExhausted ||
          after.status == ExecStatus::kFuelExhausted) {
        continue;
      }
      ASSERT_TRUE(SameBehavior(before, after))
          << "seed " << seed << "\n" << PrettyPrint(ast) << "\n---\n"
          << PrettyPrint(r.ast);
      if (before.status == ExecStatus::kRuntimeError) {
        const auto& image = r.line_map.at(before.trap_line);
        ASSERT_TRUE(image.count(after.trap_line))
            << "seed " << seed << " trap " << before.trap_line << " -> "
            << after.trap_line << "\n" << PrettyPrint(r.ast);
      }
    }
  }
  EXPECT_GT(applied, 10);
}

INSTANTIATE_TEST_SUITE_P(
    AllKinds, TransformPropertyTest, ::testing::ValuesIn(kAllTransforms),
    [](const ::testing::TestParamInfo<TransformKind>& info) {
      return std::string(TransformName(info.param));
    });

}  // namespace
}  // namespace zz

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

#include "zz/fragment.h"

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "zz/common.h"
#include "zz/lang.h"

namespace zz {
namespace {

std::string Join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

Program FromSource(const std::string& id, const std::string& source) {
  Program p;
  p.id = id;
  p.ast = Parse(source);
  p.labels = FlagLabels(p.ast);
  return p;
}

Program Fixture() {
  std::ifstream in(std::string(ZZ_TEST_DATA_DIR) + "/fig2_like.mini");
  std::stringstream ss;
  ss << in.rdbuf();
  return FromSource("fx", ss.str());
}

// Straight-line oracle: each read of a name depends on the closest
// preceding definition; index stores and array-passing calls add to the
// previous definitions instead of replacing them.
std::set<LineId> StraightLineSlice(const FunctionDef& fn, LineId criterion) {
  std::map<LineId, const Stmt*> stmts;
  for (const auto& s : fn.body) stmts[s.line] = &s;
  std::set<LineId> slice{criterion};
  std::vector<LineId> work{criterion};
  while (!work.empty()) {
    const Stmt& s = *stmts.at(work.back());
    work.pop_back();
    std::set<std::string> reads;
    for (const auto& e : s.exprs) CollectVarNames(e, reads);
    if (s.kind == Stmt::Kind::kIndexAssign) reads.insert(s.name);
    for (const auto& name : reads) {
      for (LineId l = s.line - 1; l >= 1; --l) {
        const Stmt& d = *stmts.at(l);
        const bool strong = d.name == name && (d.kind == Stmt::Kind::kVarDecl ||
                                               d.kind == Stmt::Kind::kAssign ||
                                               d.kind == Stmt::Kind::kArrayDecl);
        const bool weak = d.name == name && d.kind == Stmt::Kind::kIndexAssign;
        if ((strong || weak) && slice.insert(l).second) work.push_back(l);
        if (strong) break;
      }
    }
  }
  return slice;
}

TEST(FunctionFragmentTest, OnePerFunction) {
  Program p = FromSource("p", "func a() { return 1; }\nfunc b(x) { return x; }\n"
                              "func main() { output(a() + b(2)); }");
  auto frags = ExtractFunctions(p);
  ASSERT_EQ(3u, frags.size());
  EXPECT_EQ("p/a", frags[0].id);
  for (const auto& f : frags) {
    EXPECT_EQ(0, f.label);
    EXPECT_EQ(Population::kX, f.population);
  }
}

TEST(FunctionFragmentTest, FixtureTokensAndLabels) {
  auto frags = ExtractFunctions(Fixture());
  ASSERT_EQ(2u, frags.size());
  EXPECT_EQ(1, frags[0].label);
  EXPECT_EQ(0, frags[1].label);
  EXPECT_EQ(
      "func dwt_init ( levels , width , height ) { var sizes [ 8 ] ; var i = 0 ; "
      "var band = width ; for ( i = 0 ; i < levels ; i = i + 1 ) { sizes [ i ] = "
      "band ; band = ( band + 1 ) / 2 ; } output ( \"levels done\" ) ; output ( band "
      "+ height ) ; return sizes [ 0 ] ; }",
      Join(frags[0].tokens));
  EXPECT_EQ(80u, frags[0].tokens.size());
  EXPECT_EQ(
      "func main ( ) { var levels = input ( ) ; var width = input ( ) ; var first = "
      "dwt_init ( levels , width , 0 ) ; output ( first ) ; }",
      Join(frags[1].tokens));
}

TEST(SliceTest, ArrayWriteWithTwoAssignments) {
  Program p = FromSource(
      "p", "func f(t, a) { var i = a + 1; var v = 2; var w = 5; t[i] = v; return w; }\n"
           "func main() { var b[8]; output(f(b, 1)); }");
  const FunctionDef& f = p.ast.functions[0];
  EXPECT_EQ((std::set<LineId>{1, 2, 4}), BackwardSlice(f, 4));
  EXPECT_EQ(StraightLineSlice(f, 4), BackwardSlice(f, 4));
  auto slices = ExtractSlices(p);
  ASSERT_EQ(1u, slices.size());
  EXPECT_EQ("var i = a + 1 ; var v = 2 ; t [ i ] = v ;", Join(slices[0].tokens));
}

TEST(SliceTest, NoCriteriaNoSlices) {
  Program p = FromSource("p", "func main() { var x = input(); output(x + 1); }");
  EXPECT_TRUE(ExtractSlices(p).empty());
}

TEST(SliceTest, FlagOutsideEverySlice) {
  Program p = FromSource(
      "p", "func g(t) { var x = 1; output(x); //@vuln\n t[0] = 2; }\n"
           "func main() { var b[4]; g(b); }");
  auto slices = ExtractSlices(p);
  ASSERT_EQ(1u, slices.size());
  EXPECT_EQ(0, slices[0].label);
  EXPECT_EQ(1, ExtractFunctions(p)[0].label);
}

TEST(SliceTest, LoopCarriedDefinitions) {
  Program p = FromSource(
      "p", "func f(t, n) { var s = 0; var i = 0; while (i < n) { s = s + 1; i = i + 1; }"
           " t[s] = 1; }\nfunc main() { var b[4]; f(b, 2); }");
  EXPECT_EQ((std::set<LineId>{1, 4, 6}), BackwardSlice(p.ast.functions[0], 6));
}

TEST(SliceTest, DeadCodeAfterReturn) {
  Program p = FromSource(
      "p", "func f(t) { var k = 1; return 0; t[k] = 2; }\nfunc main() { var b[4]; f(b); }");
  EXPECT_EQ((std::set<LineId>{3}), BackwardSlice(p.ast.functions[0], 3));
}

TEST(SliceTest, CallsWeaklyDefineArrays) {
  Program p = FromSource(
      "p", "func w(t) { t[0] = 1; }\n"
           "func main() { var b[4]; var k = 0; w(b); output(b[k]); }");
  EXPECT_EQ((std::set<LineId>{2, 3, 4, 5}), BackwardSlice(p.ast.functions[1], 5));
}

TEST(SliceTest, MatchesStraightLineOracle) {
  Rng rng(5);
  const std::vector<std::string> scalars = {"a", "b", "c"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string body = "var a = input(); var b = 1; var c = 2; var t[6];";
    const int n = static_cast<int>(rng.Range(3, 10));
    for (int k = 0; k < n; ++k) {
      const std::string& x = scalars[rng.Below(3)];
      const std::string& y = scalars[rng.Below(3)];
      switch (rng.Below(3)) {
        case 0:
          body += " " + x + " = " + y + " + " + scalars[rng.Below(3)] + ";";
          break;
        case 1:
          body += " t[" + x + " % 6] = " + y + ";";
          break;
        default:
          body += " " + x + " = t[" + y + " % 6];";
      }
    }
    Program p = FromSource("r", "func main() { " + body + " }");
    const FunctionDef& fn = p.ast.functions[0];
    for (const auto& s : fn.body) {
      ASSERT_EQ(StraightLineSlice(fn, s.line), BackwardSlice(fn, s.line))
          << PrettyPrint(p.ast) << " criterion " << s.line;
    }
  }
}

TEST(FragmentPropertyTest, SlicesAreSyntacticallySound) {
  SyntheticSpec spec;
  spec.count = 30;
  Corpus c = GenerateSynthetic(spec);
  Corpus plus = AugmentTrain(Corpus{c.Select(Split::kTrain)}, TransformSet::All(), 1);
  int slices = 0;
  for (const auto& p : plus.programs) {
    for (const auto& f : ExtractSlices(p)) {
      ++slices;
      ASSERT_FALSE(f.tokens.empty());
      const FunctionDef& fn = *p.ast.Find(f.function);
      std::set<std::string> defined(fn.params.begin(), fn.params.end());
      std::set<std::string> read;
      ForEachStmt(fn.body, [&](const Stmt& s) {
        if (!f.origin_lines.count(s.line)) return;
        if (s.kind == Stmt::Kind::kVarDecl || s.kind == Stmt::Kind::kAssign ||
            s.kind == Stmt::Kind::kArrayDecl) {
          defined.insert(s.name);
        }
        for (const auto& e : s.exprs) CollectVarNames(e, read);
      });
      for (const auto& name : read) {
        EXPECT_TRUE(defined.count(name)) << f.id << " reads " << name;
      }
      EXPECT_EQ(f.population == Population::kX, p.provenance.original());
    }
  }
  EXPECT_GT(slices, 500);
}

TEST(FragmentPropertyTest, StableOrdering) {
  SyntheticSpec spec;
  spec.count = 12;
  Corpus c = GenerateSynthetic(spec);
  auto a = ExtractFragments(c, Granularity::kFunction);
  auto b = ExtractFragments(c, Granularity::kFunction);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    if (i > 0 && a[i - 1].program_id == a[i].program_id) {
      EXPECT_LT(*a[i - 1].origin_lines.begin(), *a[i].origin_lines.begin());
    }
  }
}

}  // namespace
}  // namespace zz

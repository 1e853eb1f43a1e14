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

#include "zz/corpus.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "zz/common.h"
#include "zz/interp.h"
#include "zz/lang.h"

namespace zz {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

Program MakeProgram(const std::string& id, const std::string& source,
                    std::vector<Witness> witnesses = {}) {
  Program p;
  p.id = id;
  p.split = Split::kTrain;
  p.ast = Parse(source);
  p.labels = FlagLabels(p.ast);
  p.witnesses = std::move(witnesses);
  return p;
}

// Three hand-written programs with known transform sites.
Corpus FixtureCorpus() {
  Corpus c;
  c.programs.push_back(MakeProgram("fx1", ReadFile(std::string(ZZ_TEST_DATA_DIR) + "/fig2_like.mini"),
                                   {{7, {9, 5}}}));
  c.programs.push_back(MakeProgram(
      "fx2", "func main() { var a = input(); while (a > 0) { a = a - 1; } output(a); }"));
  c.programs.push_back(MakeProgram(
      "fx3",
      "func f(x) { return x + 1; }\nfunc g(y) { return y * 2; }\n"
      "func main() { output(f(1)); output(g(2)); }"));
  return c;
}

Corpus TrainSubset(const Corpus& c, size_t n) {
  Corpus out;
  for (const auto& p : c.programs) {
    if (p.split == Split::kTrain && out.programs.size() < n) out.programs.push_back(p);
  }
  return out;
}

// Labels implied by re-running each witness: the function holding the trap
// line is vulnerable.
std::vector<std::pair<std::string, bool>> WitnessLabels(const Program& p) {
  std::set<LineId> traps;
  for (const auto& w : p.witnesses) {
    ExecResult r = Interpret(p.ast, "main", w.inputs, kCorpusFuel * kTransformFuelMultiplier);
    EXPECT_EQ(ExecStatus::kRuntimeError, r.status) << p.id;
    traps.insert(r.trap_line);
  }
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& fn : p.ast.functions) {
    bool hit = false;
    for (LineId l : FunctionLines(fn)) hit = hit || traps.count(l);
    out.emplace_back(fn.name, hit);
  }
  return out;
}

TEST(GenerateTest, TenProgramsHalfVulnerable) {
  SyntheticSpec spec;
  spec.count = 10;
  spec.vuln_fraction = 0.5;
  spec.seed = 7;
  Corpus c = GenerateSynthetic(spec);
  ASSERT_EQ(10u, c.programs.size());
  int vulnerable = 0;
  for (const auto& p : c.programs) {
    if (!p.vulnerable()) {
      EXPECT_TRUE(p.witnesses.empty());
      continue;
    }
    ++vulnerable;
    ASSERT_FALSE(p.witnesses.empty());
    const auto flagged = FlaggedLines(p.ast);
    EXPECT_EQ(flagged.size(), p.witnesses.size());
    for (const auto& w : p.witnesses) {
      ExecResult r = Interpret(p.ast, "main", w.inputs, kCorpusFuel);
      EXPECT_EQ(ExecStatus::kRuntimeError, r.status);
      EXPECT_EQ(RuntimeErrorKind::kOutOfBounds, r.error);
      EXPECT_EQ(w.line, r.trap_line);
      EXPECT_TRUE(flagged.count(r.trap_line));
    }
  }
  EXPECT_EQ(5, vulnerable);
}

TEST(GenerateTest, RejectsBadSpec) {
  SyntheticSpec spec;
  spec.vuln_fraction = 0.0;
  EXPECT_THROW(GenerateSynthetic(spec), Error);
  spec.vuln_fraction = 0.5;
  spec.count = 1;
  EXPECT_THROW(GenerateSynthetic(spec), Error);
}

TEST(GenerateTest, ByteIdenticalFiles) {
  SyntheticSpec spec;
  spec.count = 30;
  spec.seed = 3;
  SaveCorpus(GenerateSynthetic(spec), TempPath("a.corpus"));
  SaveCorpus(GenerateSynthetic(spec), TempPath("b.corpus"));
  const std::string a = ReadFile(TempPath("a.corpus"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, ReadFile(TempPath("b.corpus")));
}

TEST(GenerateTest, AtMostOneFlagPerFunctionAndEightyTwentySplit) {
  SyntheticSpec spec;
  spec.count = 200;
  spec.seed = 11;
  Corpus c = GenerateSynthetic(spec);
  for (const auto& p : c.programs) {
    EXPECT_EQ(p.split, SplitForId(p.id));
    for (const auto& fn : p.ast.functions) {
      int flags = 0;
      ForEachStmt(fn.body, [&](const Stmt& s) { flags += s.vuln; });
      EXPECT_LE(flags, 1);
    }
  }
  const size_t test = c.Select(Split::kTest).size();
  EXPECT_GT(test, 25u);
  EXPECT_LT(test, 60u);
}

TEST(AugmentTest, TwentyProgramsThreeKinds) {
  SyntheticSpec spec;
  spec.count = 40;
  Corpus p = TrainSubset(GenerateSynthetic(spec), 20);
  ASSERT_EQ(20u, p.programs.size());
  Corpus plus = AugmentTrain(p, TransformSet::Named(1), 5);
  EXPECT_EQ(80u, plus.programs.size());
  for (const auto& q : p.programs) EXPECT_NE(nullptr, plus.Find(q.id));
}

TEST(AugmentTest, EmptySetIsIdentity) {
  SyntheticSpec spec;
  spec.count = 20;
  Corpus p = TrainSubset(GenerateSynthetic(spec), 20);
  EXPECT_EQ(p, AugmentTrain(p, TransformSet::Named(0), 5));
}

TEST(AugmentTest, FixtureApplicabilityCounts) {
  AugmentStats stats;
  Corpus plus = AugmentTrain(FixtureCorpus(), TransformSet::All(), 9, &stats);
  using K = TransformKind;
  const std::map<K, int> expected = {
      {K::kEncodeStrings, 1}, {K::kRndArgs, 2},      {K::kFlatten, 2},
      {K::kMergeSimple, 1},   {K::kMergeFlatten, 1}, {K::kSplitTop, 3},
      {K::kSplitBlock, 2},    {K::kSplitRecursive, 2}};
  for (const auto& [kind, n] : expected) {
    EXPECT_EQ(n, stats.applied[kind]) << TransformLabel(kind);
    EXPECT_EQ(3 - n, stats.skipped[kind]) << TransformLabel(kind);
  }
  EXPECT_EQ(3u + 14u, plus.programs.size());
}

TEST(AugmentTest, WrongSplitIsPrecondition) {
  Corpus c = FixtureCorpus();
  c.programs[1].split = Split::kTest;
  try {
    AugmentTrain(c, TransformSet::Named(1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kPrecondition, e.code());
  }
}

TEST(BuildTargetsTest, MirrorsAugment) {
  SyntheticSpec spec;
  spec.count = 40;
  Corpus q{GenerateSynthetic(spec).Select(Split::kTest)};
  ASSERT_FALSE(q.programs.empty());
  Corpus targets = BuildTargets(q);
  EXPECT_EQ(9 * q.programs.size(), targets.programs.size());
  for (const auto& p : targets.programs) EXPECT_EQ(Split::kTest, p.split);
  EXPECT_EQ(q, BuildTargets(q, TransformSet::Named(0)));
  Corpus fixture = FixtureCorpus();
  for (auto& p : fixture.programs) p.split = Split::kTest;
  AugmentStats stats;
  BuildTargets(fixture, TransformSet::All(), 9, &stats);
  EXPECT_EQ(3, stats.applied[TransformKind::kSplitTop]);
  EXPECT_EQ(1, stats.applied[TransformKind::kEncodeStrings]);
  EXPECT_THROW(BuildTargets(FixtureCorpus()), Error);
}

TEST(CorpusPropertyTest, LabelTransportMatchesWitnesses) {
  SyntheticSpec spec;
  spec.count = 60;
  spec.seed = 21;
  Corpus c = GenerateSynthetic(spec);
  Corpus plus = AugmentTrain(Corpus{c.Select(Split::kTrain)}, TransformSet::All(), 4);
  int checked = 0;
  for (const auto& p : plus.programs) {
    EXPECT_EQ(WitnessLabels(p), p.labels) << p.id;
    EXPECT_EQ(FlagLabels(p.ast), p.labels) << p.id;
    if (!p.provenance.original()) {
      const Program* parent = plus.Find(p.provenance.parent);
      ASSERT_NE(nullptr, parent);
      EXPECT_EQ(parent->vulnerable(), p.vulnerable());
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(PersistTest, RoundTrip) {
  SyntheticSpec spec;
  spec.count = 25;
  Corpus c = GenerateSynthetic(spec);
  Corpus plus = AugmentTrain(Corpus{c.Select(Split::kTrain)}, TransformSet::All(), 2);
  SaveCorpus(plus, TempPath("rt.corpus"));
  EXPECT_EQ(plus, LoadCorpus(TempPath("rt.corpus")));
}

TEST(PersistTest, TruncatedFileIsMalformed) {
  SyntheticSpec spec;
  spec.count = 5;
  SaveCorpus(GenerateSynthetic(spec), TempPath("t.corpus"));
  std::string text = ReadFile(TempPath("t.corpus"));
  text.resize(text.size() - 40);
  std::ofstream(TempPath("t.corpus"), std::ios::binary) << text;
  try {
    LoadCorpus(TempPath("t.corpus"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kMalformedRecord, e.code());
    EXPECT_NE(std::string::npos, std::string(e.what()).find("line 5"));
  }
}

TEST(PersistTest, BumpedVersionIsRejected) {
  SyntheticSpec spec;
  spec.count = 3;
  SaveCorpus(GenerateSynthetic(spec), TempPath("v.corpus"));
  std::string text = ReadFile(TempPath("v.corpus"));
  ASSERT_EQ("[1,", text.substr(0, 3));
  text.replace(0, 3, "[2,");
  std::ofstream(TempPath("v.corpus"), std::ios::binary) << text;
  try {
    LoadCorpus(TempPath("v.corpus"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kVersionMismatch, e.code());
  }
}

}  // namespace
}  // namespace zz

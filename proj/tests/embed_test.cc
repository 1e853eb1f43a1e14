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

#include "zz/embed.h"

#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "program_gen.h"
#include "zz/common.h"
#include "zz/lang.h"

namespace zz {
namespace {

using Tokens = std::vector<std::string>;

Fragment MakeFragment(Tokens tokens, Split split = Split::kTrain) {
  Fragment f;
  f.id = "f";
  f.split = split;
  f.tokens = std::move(tokens);
  return f;
}

Program FixtureProgram() {
  std::ifstream in(std::string(ZZ_TEST_DATA_DIR) + "/fig2_like.mini");
  std::stringstream ss;
  ss << in.rdbuf();
  Program p;
  p.id = "fx";
  p.ast = Parse(ss.str());
  p.labels = FlagLabels(p.ast);
  return p;
}

TEST(NormalizeTest, Basics) {
  EXPECT_EQ((Tokens{"VAR_1", "=", "VAR_2"}), Normalize({"a", "=", "b"}));
  EXPECT_EQ((Tokens{"while"}), Normalize({"while"}));
  EXPECT_EQ((Tokens{"FUN_1", "(", "VAR_1", ")", "+", "output", "(", "STR", ")", "7"}),
            Normalize({"g", "(", "g", ")", "+", "output", "(", "\"x\"", ")", "7"}));
}

// Renames every user identifier in the printed program through a fixed
// bijection and checks the normalized function tokens do not change.
TEST(NormalizeTest, AlphaEquivalentFragmentsMatch) {
  const std::regex ident(R"("(?:[^"\\]|\\.)*"|\b([a-z][a-z0-9_]*)\b)");
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Ast ast = testing::ProgramGen(seed).Generate();
    const std::string source = PrettyPrint(ast);
    std::string renamed;
    auto begin = std::sregex_iterator(source.begin(), source.end(), ident);
    size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      const std::string word = it->str();
      renamed += source.substr(last, static_cast<size_t>(it->position()) - last);
      const bool keep = word[0] == '"' || IsKeyword(word) || IsBuiltin(word) || word == "main" ||
                        (it->position() > 0 && source[static_cast<size_t>(it->position()) - 1] == '@');
      renamed += keep ? word : "zq_" + word + "_r";
      last = static_cast<size_t>(it->position() + it->length());
    }
    renamed += source.substr(last);
    Ast other = Parse(renamed);
    ASSERT_EQ(ast.functions.size(), other.functions.size());
    for (size_t i = 0; i < ast.functions.size(); ++i) {
      Tokens a, b;
      for (const auto& t : Tokenize(ast.functions[i])) a.push_back(t.text);
      for (const auto& t : Tokenize(other.functions[i])) b.push_back(t.text);
      ASSERT_NE(a, b);
      EXPECT_EQ(Normalize(a), Normalize(b));
    }
  }
}

TEST(VocabTest, FiveDistinctTokens) {
  Vocab v = BuildVocab({MakeFragment({"a", "=", "1", ";"}), MakeFragment({"b", "=", "2", ";"})}, 10);
  EXPECT_EQ(7, v.size());
  EXPECT_EQ(kUnknownId, v.Id("while"));
  EXPECT_EQ(kUnknownId, v.Id("<pad>"));
}

TEST(VocabTest, FixtureGolden) {
  Vocab v = BuildVocab(ExtractFunctions(FixtureProgram()), 16);
  EXPECT_EQ((Tokens{"<pad>", "<unk>", ";", "(", ")", "=", "VAR_5", "var", "VAR_6", ",", "0",
                    "VAR_1", "VAR_2", "VAR_3", "+", "VAR_4"}),
            v.tokens());
  EXPECT_EQ(33, BuildVocab(ExtractFunctions(FixtureProgram()), 100).size());
}

TEST(VocabTest, Guards) {
  EXPECT_THROW(BuildVocab({MakeFragment({"a"})}, 2), Error);
  try {
    BuildVocab({MakeFragment({"a"}), MakeFragment({"b"}, Split::kTest)}, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorCode::kPrecondition, e.code());
    EXPECT_NE(std::string::npos, std::string(e.what()).find("leakage"));
  }
}

TEST(EncodeTest, PadAndTruncate) {
  Vocab v({"<pad>", "<unk>", "VAR_1", "=", "1", ";", "+"});
  EncodedExample e = Encode(MakeFragment({"a", "=", "1"}), v, 5);
  EXPECT_EQ((std::vector<int>{2, 3, 4, 0, 0}), e.ids);
  e = Encode(MakeFragment({"a", "=", "a", "+", "1", ";", "x"}), v, 5);
  EXPECT_EQ((std::vector<int>{2, 3, 2, 6, 4}), e.ids);
  e = Encode(MakeFragment({"while", "x"}), v, 3);
  EXPECT_EQ((std::vector<int>{kUnknownId, 2, 0}), e.ids);
}

TEST(EncodeTest, TransformedFragmentsArePrime) {
  Program p = FixtureProgram();
  Program variant = DeriveVariant(p, TransformKind::kSplitTop, 4);
  Vocab v = BuildVocab(ExtractFunctions(p), 50);
  for (const auto& f : ExtractFunctions(variant)) {
    EncodedExample e = Encode(f, v, kFunctionLength);
    EXPECT_EQ(Population::kXPrime, e.population);
    EXPECT_EQ(static_cast<size_t>(kFunctionLength), e.ids.size());
    for (int id : e.ids) EXPECT_LT(id, v.size());
  }
  EXPECT_EQ(Population::kX, Encode(ExtractFunctions(p)[0], v, 8).population);
}

TEST(DatasetTest, RoundTrip) {
  Program p = FixtureProgram();
  auto frags = ExtractFunctions(p);
  Vocab v = BuildVocab(frags, 40);
  auto examples = EncodeAll(frags, v, kSliceLength);
  const std::string path = ::testing::TempDir() + "/ds.jsonl";
  SaveDataset(examples, path);
  EXPECT_EQ(examples, LoadDataset(path));
  std::ofstream(path) << "[9,\"a\",\"X\",0,[1]]\n";
  EXPECT_THROW(LoadDataset(path), Error);
}

}  // namespace
}  // namespace zz

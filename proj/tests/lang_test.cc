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

#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "program_gen.h"
#include "zz/common.h"
#include "zz/lang.h"

namespace zz {
namespace {

constexpr size_t kFixtureTokenCount = 117;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Fixture(const std::string& name) {
  return ReadFile(std::string(ZZ_TEST_DATA_DIR) + "/" + name);
}

TEST(ParseTest, MinimalProgram) {
  Ast ast = Parse("func main(){ output(1); }");
  ASSERT_EQ(1u, ast.functions.size());
  ASSERT_EQ(1u, ast.functions[0].body.size());
  EXPECT_EQ(Stmt::Kind::kCall, ast.functions[0].body[0].kind);
  EXPECT_EQ(1, ast.functions[0].body[0].line);
}

TEST(ParseTest, DanglingOperatorIsSyntaxError) {
  try {
    Parse("func f(a){ return a+; }");
    FAIL() << "expected syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(ErrorCode::kSyntax, e.code());
    EXPECT_EQ(1, e.line());
    EXPECT_EQ(21, e.column());
  }
}

TEST(ParseTest, UndeclaredVariable) {
  try {
    Parse("func main(){ x = 1; }");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(ErrorCode::kUndeclared, e.code());
  }
}

TEST(ParseTest, UndeclaredFunction) {
  try {
    Parse("func main(){ g(1); }");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(ErrorCode::kUndeclared, e.code());
  }
}

TEST(ParseTest, BlockScopingIsLexical) {
  EXPECT_THROW(Parse("func main(){ if (1) { var x = 1; } output(x); }"),
               SyntaxError);
  EXPECT_NO_THROW(Parse("func main(){ var x = 1; if (1) { x = 2; } output(x); }"));
}

TEST(ParseTest, RejectsOutOfGrammarFeatures) {
  EXPECT_THROW(Parse("func main(){ var a[3]; if (1) { var b[2]; } }"),
               SyntaxError);
  EXPECT_THROW(Parse("func main(){ var x = 1; var x = 2; }"), SyntaxError);
  EXPECT_THROW(Parse("func main(){ output(1, 2); }"), SyntaxError);
  EXPECT_THROW(Parse("func main(){ var y = 1.5; }"), SyntaxError);
  EXPECT_THROW(Parse("func output(a){ }"), SyntaxError);
}

TEST(ParseTest, FixtureMatchesGolden) {
  Ast ast = Parse(Fixture("fig2_like.mini"));
  EXPECT_EQ(Fixture("fig2_like.golden"), DumpAst(ast));
  std::set<LineId> flagged = FlaggedLines(ast);
  ASSERT_EQ(1u, flagged.size());
}

TEST(PrettyPrintTest, MinimalRoundTrip) {
  Ast ast = Parse("func main(){ output(1); }");
  EXPECT_EQ("func main() {\n  output(1);\n}\n", PrettyPrint(ast));
  EXPECT_TRUE(StructurallyEqual(ast, Parse(PrettyPrint(ast))));
}

TEST(PrettyPrintTest, VulnMarkerRoundTrip) {
  Ast ast = Parse(
      "func main(){ var a[2]; var i = input();\n a[i] = 1; //@vuln\n }");
  ASSERT_TRUE(ast.functions[0].body[2].vuln);
  std::string text = PrettyPrint(ast);
  EXPECT_NE(std::string::npos, text.find("a[i] = 1; //@vuln"));
  Ast again = Parse(text);
  EXPECT_TRUE(again.functions[0].body[2].vuln);
  EXPECT_FALSE(again.functions[0].body[1].vuln);
}

TEST(PrettyPrintTest, ParenthesizesByPrecedence) {
  Ast ast = Parse("func main(){ output((1 + 2) * 3 - (4 - 5)); }");
  EXPECT_EQ("func main() {\n  output((1 + 2) * 3 - (4 - 5));\n}\n",
            PrettyPrint(ast));
}

TEST(PrettyPrintTest, RandomProgramsRoundTrip) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    testing::ProgramGen gen(seed);
    Ast ast = gen.Generate();
    std::string text = PrettyPrint(ast);
    Ast parsed = Parse(text);
    ASSERT_TRUE(StructurallyEqual(ast, parsed)) << text;
    EXPECT_EQ(text, PrettyPrint(parsed));
  }
}

TEST(TokenizeTest, AssignmentTokens) {
  auto tokens = Tokenize("a = b + 1;");
  ASSERT_EQ(6u, tokens.size());
  EXPECT_EQ(Token::Kind::kIdentifier, tokens[0].kind);
  EXPECT_EQ("a", tokens[0].text);
  EXPECT_EQ(Token::Kind::kOperator, tokens[1].kind);
  EXPECT_EQ(Token::Kind::kIdentifier, tokens[2].kind);
  EXPECT_EQ(Token::Kind::kOperator, tokens[3].kind);
  EXPECT_EQ(Token::Kind::kIntLiteral, tokens[4].kind);
  EXPECT_STREQ("literal", TokenKindName(tokens[4].kind));
  EXPECT_EQ(Token::Kind::kPunct, tokens[5].kind);
}

TEST(TokenizeTest, WhileIsKeyword) {
  auto tokens = Tokenize("while");
  ASSERT_EQ(1u, tokens.size());
  EXPECT_EQ(Token::Kind::kKeyword, tokens[0].kind);
}

TEST(TokenizeTest, MarkerProducesNoToken) {
  EXPECT_EQ(4u, Tokenize("x = 1; //@vuln").size());
}

TEST(TokenizeTest, FixtureTokenCount) {
  EXPECT_EQ(kFixtureTokenCount, Tokenize(Fixture("fig2_like.mini")).size());
}

TEST(TokenizeTest, JoinedTokensReparse) {
  for (uint64_t seed = 200; seed < 230; ++seed) {
    testing::ProgramGen gen(seed);
    Ast ast = gen.Generate();
    Ast reparsed = Parse(JoinTokens(Tokenize(ast)));
    // Joined tokens lose the vuln markers and nothing else.
    EXPECT_EQ(PrettyPrint(ast), PrettyPrint(reparsed));
  }
}

TEST(DesugarTest, ForBecomesInitAndWhile) {
  Ast ast = Parse(
      "func main(){ var s = 0; for (var i = 0; i < 3; i = i + 1) { s = s + i; } "
      "output(s); }");
  auto body = DesugarFor(ast.functions[0].body);
  ASSERT_EQ(4u, body.size());
  EXPECT_EQ(Stmt::Kind::kVarDecl, body[1].kind);
  EXPECT_EQ(Stmt::Kind::kWhile, body[2].kind);
  EXPECT_EQ(Stmt::Kind::kAssign, body[2].body.back().kind);
}

}  // namespace
}  // namespace zz

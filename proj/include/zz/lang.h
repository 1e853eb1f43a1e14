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

#ifndef ZZ_LANG_H_
#define ZZ_LANG_H_

#include <string>
#include <string_view>
#include <vector>

#include "zz/ast.h"

namespace zz {

struct Token {
  enum class Kind {
    kKeyword,
    kIdentifier,
    kIntLiteral,
    kStrLiteral,
    kOperator,
    kPunct,
  };

  Kind kind;
  // Source spelling; string literals keep their quotes and escapes.
  std::string text;
  int line = 0;
  int column = 0;

  bool IsLiteral() const {
    return kind == Kind::kIntLiteral || kind == Kind::kStrLiteral;
  }
};

const char* TokenKindName(Token::Kind kind);
bool IsKeyword(std::string_view word);

// Lexes mini-language source. Comments are dropped; `//@vuln` markers do
// not produce tokens.
std::vector<Token> Tokenize(std::string_view source);
std::vector<Token> Tokenize(const Ast& ast);
std::vector<Token> Tokenize(const FunctionDef& fn);

// Joins token texts with single spaces; the result parses back to the
// same program.
std::string JoinTokens(const std::vector<Token>& tokens);

// Parses and validates a program. Throws SyntaxError with code kSyntax for
// grammar violations and kUndeclared for unknown variables or functions.
// LineIds are assigned 1, 2, ... in source order.
Ast Parse(std::string_view source);

// Canonical source form. Flagged statements end their first line with
// `//@vuln`.
std::string PrettyPrint(const Ast& ast);
std::string PrettyPrint(const FunctionDef& fn);
std::string PrintExpr(const Expr& expr);
// Single-line rendering of a statement header (no body, no marker).
std::string PrintStmtHeader(const Stmt& stmt);

// Debug listing, one statement per line: `[LineId] kind flag header`.
std::string DumpAst(const Ast& ast);

// Assigns fresh LineIds in source order starting at 1. Returns the map from
// each previous nonzero LineId to its new ids.
LineMap Renumber(Ast& ast);

// Re-validates scoping and call arity on a constructed Ast by printing and
// parsing it. Throws like Parse().
void Validate(const Ast& ast);

}  // namespace zz

#endif  // ZZ_LANG_H_

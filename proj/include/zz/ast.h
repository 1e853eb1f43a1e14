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

#ifndef ZZ_AST_H_
#define ZZ_AST_H_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zz {

// Statement identity. Assigned in source order by the parser and by
// Renumber(); 0 marks a statement synthesized by a transform that has not
// been numbered yet.
using LineId = int64_t;
constexpr LineId kNoLine = 0;

// Relation from original LineIds to the LineIds of their images.
using LineMap = std::map<LineId, std::set<LineId>>;

enum class BinOp {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kAnd,
  kOr,
};

enum class UnOp { kNeg, kNot };

const char* BinOpText(BinOp op);
const char* UnOpText(UnOp op);

struct Expr {
  enum class Kind { kInt, kStr, kVar, kUnary, kBinary, kIndex, kCall };

  Kind kind = Kind::kInt;
  int64_t int_value = 0;
  // String literal contents, variable name, indexed array name or callee.
  std::string text;
  BinOp bin_op = BinOp::kAdd;
  UnOp un_op = UnOp::kNeg;
  // Unary: [operand]. Binary: [lhs, rhs]. Index: [index]. Call: arguments.
  std::vector<Expr> args;

  static Expr Int(int64_t value);
  static Expr Str(std::string value);
  static Expr Var(std::string name);
  static Expr Unary(UnOp op, Expr operand);
  static Expr Binary(BinOp op, Expr lhs, Expr rhs);
  static Expr Index(std::string array, Expr index);
  static Expr Call(std::string callee, std::vector<Expr> args);
};

struct Stmt {
  enum class Kind {
    kVarDecl,     // var name = exprs[0];
    kArrayDecl,   // var name[array_size];
    kAssign,      // name = exprs[0];
    kIndexAssign, // name[exprs[0]] = exprs[1];
    kIf,          // if (exprs[0]) body else else_body
    kWhile,       // while (exprs[0]) body
    kFor,         // for (header[0]; exprs[0]; header[1]) body
    kCall,        // exprs[0] is a call expression
    kReturn,      // return; or return exprs[0];
  };

  Kind kind = Kind::kCall;
  LineId line = kNoLine;
  bool vuln = false;
  std::string name;
  int64_t array_size = 0;
  std::vector<Expr> exprs;
  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  std::vector<Stmt> header;

  static Stmt VarDecl(std::string name, Expr init);
  static Stmt ArrayDecl(std::string name, int64_t size);
  static Stmt Assign(std::string name, Expr value);
  static Stmt IndexAssign(std::string name, Expr index, Expr value);
  static Stmt If(Expr cond, std::vector<Stmt> then_body,
                 std::vector<Stmt> else_body = {});
  static Stmt While(Expr cond, std::vector<Stmt> body);
  static Stmt CallStmt(Expr call);
  static Stmt Return();
  static Stmt Return(Expr value);

  bool IsSimple() const;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
};

struct Ast {
  std::vector<FunctionDef> functions;

  const FunctionDef* Find(const std::string& name) const;
  FunctionDef* Find(const std::string& name);
};

// Builtins callable without a definition. output() prints its argument,
// input() consumes the next input value, chr(n) yields a one-character
// string.
bool IsBuiltin(const std::string& name);
int BuiltinArity(const std::string& name);

// Prefix reserved for every name a transform introduces.
constexpr const char* kGeneratedPrefix = "__zz_";
bool IsGeneratedName(const std::string& name);

// Equality that ignores LineIds but compares vuln flags.
bool StructurallyEqual(const Expr& a, const Expr& b);
bool StructurallyEqual(const Stmt& a, const Stmt& b);
bool StructurallyEqual(const Ast& a, const Ast& b);

// Pre-order walks. The statement visitor sees for-loop header statements
// before the loop body.
void ForEachStmt(const std::vector<Stmt>& stmts,
                 const std::function<void(const Stmt&)>& fn);
void ForEachStmt(std::vector<Stmt>& stmts,
                 const std::function<void(Stmt&)>& fn);
void ForEachExpr(const Expr& expr, const std::function<void(const Expr&)>& fn);
// Visits the expressions owned directly by a statement (not its children).
void ForEachOwnExpr(const Stmt& stmt,
                    const std::function<void(const Expr&)>& fn);
void ForEachOwnExpr(Stmt& stmt, const std::function<void(Expr&)>& fn);

// Variable names read or written (not callee names).
void CollectVarNames(const Expr& expr, std::set<std::string>& out);
void CollectVarNames(const Stmt& stmt, std::set<std::string>& out);
std::set<std::string> CollectVarNames(const std::vector<Stmt>& stmts);
// Every variable and function name appearing in the program.
std::set<std::string> CollectAllNames(const Ast& ast);

std::set<LineId> FlaggedLines(const Ast& ast);
std::set<LineId> FunctionLines(const FunctionDef& fn);

// Desugars every for-loop into `init; while (cond) { body; step; }`.
std::vector<Stmt> DesugarFor(std::vector<Stmt> stmts);

}  // namespace zz

#endif  // ZZ_AST_H_

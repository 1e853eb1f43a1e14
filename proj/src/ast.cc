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

#include "zz/ast.h"

#include <utility>

namespace zz {

const char* BinOpText(BinOp op) {
  switch (op) {
    case BinOp::kAdd:
      return "+";
    case BinOp::kSub:
      return "-";
    case BinOp::kMul:
      return "*";
    case BinOp::kDiv:
      return "/";
    case BinOp::kMod:
      return "%";
    case BinOp::kLt:
      return "<";
    case BinOp::kLe:
      return "<=";
    case BinOp::kGt:
      return ">";
    case BinOp::kGe:
      return ">=";
    case BinOp::kEq:
      return "==";
    case BinOp::kNe:
      return "!=";
    case BinOp::kAnd:
      return "&&";
    case BinOp::kOr:
      return "||";
  }
  return "?";
}

const char* UnOpText(UnOp op) { return op == UnOp::kNeg ? "-" : "!"; }

Expr Expr::Int(int64_t value) {
  Expr e;
  e.kind = Kind::kInt;
  e.int_value = value;
  return e;
}

Expr Expr::Str(std::string value) {
  Expr e;
  e.kind = Kind::kStr;
  e.text = std::move(value);
  return e;
}

Expr Expr::Var(std::string name) {
  Expr e;
  e.kind = Kind::kVar;
  e.text = std::move(name);
  return e;
}

Expr Expr::Unary(UnOp op, Expr operand) {
  Expr e;
  e.kind = Kind::kUnary;
  e.un_op = op;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::Binary(BinOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kBinary;
  e.bin_op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::Index(std::string array, Expr index) {
  Expr e;
  e.kind = Kind::kIndex;
  e.text = std::move(array);
  e.args.push_back(std::move(index));
  return e;
}

Expr Expr::Call(std::string callee, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::kCall;
  e.text = std::move(callee);
  e.args = std::move(args);
  return e;
}

Stmt Stmt::VarDecl(std::string name, Expr init) {
  Stmt s;
  s.kind = Kind::kVarDecl;
  s.name = std::move(name);
  s.exprs.push_back(std::move(init));
  return s;
}

Stmt Stmt::ArrayDecl(std::string name, int64_t size) {
  Stmt s;
  s.kind = Kind::kArrayDecl;
  s.name = std::move(name);
  s.array_size = size;
  return s;
}

Stmt Stmt::Assign(std::string name, Expr value) {
  Stmt s;
  s.kind = Kind::kAssign;
  s.name = std::move(name);
  s.exprs.push_back(std::move(value));
  return s;
}

Stmt Stmt::IndexAssign(std::string name, Expr index, Expr value) {
  Stmt s;
  s.kind = Kind::kIndexAssign;
  s.name = std::move(name);
  s.exprs.push_back(std::move(index));
  s.exprs.push_back(std::move(value));
  return s;
}

Stmt Stmt::If(Expr cond, std::vector<Stmt> then_body,
              std::vector<Stmt> else_body) {
  Stmt s;
  s.kind = Kind::kIf;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(then_body);
  s.else_body = std::move(else_body);
  return s;
}

Stmt Stmt::While(Expr cond, std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::kWhile;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(body);
  return s;
}

Stmt Stmt::CallStmt(Expr call) {
  Stmt s;
  s.kind = Kind::kCall;
  s.exprs.push_back(std::move(call));
  return s;
}

Stmt Stmt::Return() {
  Stmt s;
  s.kind = Kind::kReturn;
  return s;
}

Stmt Stmt::Return(Expr value) {
  Stmt s = Return();
  s.exprs.push_back(std::move(value));
  return s;
}

bool Stmt::IsSimple() const {
  switch (kind) {
    case Kind::kVarDecl:
    case Kind::kArrayDecl:
    case Kind::kAssign:
    case Kind::kIndexAssign:
    case Kind::kCall:
      return true;
    default:
      return false;
  }
}

const FunctionDef* Ast::Find(const std::string& name) const {
  for (const auto& fn : functions) {
    if (fn.name == name) return &fn;
  }
  return nullptr;
}

FunctionDef* Ast::Find(const std::string& name) {
  for (auto& fn : functions) {
    if (fn.name == name) return &fn;
  }
  return nullptr;
}

bool IsBuiltin(const std::string& name) { return BuiltinArity(name) >= 0; }

int BuiltinArity(const std::string& name) {
  if (name == "input") return 0;
  if (name == "output" || name == "chr") return 1;
  return -1;
}

bool IsGeneratedName(const std::string& name) {
  return name.rfind(kGeneratedPrefix, 0) == 0;
}

namespace {

template <typename T, typename Eq>
bool ListsEqual(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool StructurallyEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kInt:
      return a.int_value == b.int_value;
    case Expr::Kind::kStr:
    case Expr::Kind::kVar:
      return a.text == b.text;
    case Expr::Kind::kUnary:
      if (a.un_op != b.un_op) return false;
      break;
    case Expr::Kind::kBinary:
      if (a.bin_op != b.bin_op) return false;
      break;
    case Expr::Kind::kIndex:
    case Expr::Kind::kCall:
      if (a.text != b.text) return false;
      break;
  }
  return ListsEqual(a.args, b.args, [](const Expr& x, const Expr& y) {
    return StructurallyEqual(x, y);
  });
}

bool StructurallyEqual(const Stmt& a, const Stmt& b) {
  auto stmt_eq = [](const Stmt& x, const Stmt& y) {
    return StructurallyEqual(x, y);
  };
  auto expr_eq = [](const Expr& x, const Expr& y) {
    return StructurallyEqual(x, y);
  };
  return a.kind == b.kind && a.vuln == b.vuln && a.name == b.name &&
         a.array_size == b.array_size && ListsEqual(a.exprs, b.exprs, expr_eq) &&
         ListsEqual(a.body, b.body, stmt_eq) &&
         ListsEqual(a.else_body, b.else_body, stmt_eq) &&
         ListsEqual(a.header, b.header, stmt_eq);
}

bool StructurallyEqual(const Ast& a, const Ast& b) {
  return ListsEqual(a.functions, b.functions,
                    [](const FunctionDef& x, const FunctionDef& y) {
                      return x.name == y.name && x.params == y.params &&
                             ListsEqual(x.body, y.body,
                                        [](const Stmt& s, const Stmt& t) {
                                          return StructurallyEqual(s, t);
                                        });
                    });
}

void ForEachStmt(const std::vector<Stmt>& stmts,
                 const std::function<void(const Stmt&)>& fn) {
  for (const auto& s : stmts) {
    fn(s);
    ForEachStmt(s.header, fn);
    ForEachStmt(s.body, fn);
    ForEachStmt(s.else_body, fn);
  }
}

void ForEachStmt(std::vector<Stmt>& stmts,
                 const std::function<void(Stmt&)>& fn) {
  for (auto& s : stmts) {
    fn(s);
    ForEachStmt(s.header, fn);
    ForEachStmt(s.body, fn);
    ForEachStmt(s.else_body, fn);
  }
}

void ForEachExpr(const Expr& expr, const std::function<void(const Expr&)>& fn) {
  fn(expr);
  for (const auto& arg : expr.args) ForEachExpr(arg, fn);
}

void ForEachOwnExpr(const Stmt& stmt,
                    const std::function<void(const Expr&)>& fn) {
  for (const auto& e : stmt.exprs) fn(e);
}

void ForEachOwnExpr(Stmt& stmt, const std::function<void(Expr&)>& fn) {
  for (auto& e : stmt.exprs) fn(e);
}

void CollectVarNames(const Expr& expr, std::set<std::string>& out) {
  ForEachExpr(expr, [&](const Expr& e) {
    if (e.kind == Expr::Kind::kVar || e.kind == Expr::Kind::kIndex) {
      out.insert(e.text);
    }
  });
}

void CollectVarNames(const Stmt& stmt, std::set<std::string>& out) {
  ForEachStmt(std::vector<Stmt>{stmt}, [&](const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
      case Stmt::Kind::kArrayDecl:
      case Stmt::Kind::kAssign:
      case Stmt::Kind::kIndexAssign:
        out.insert(s.name);
        break;
      default:
        break;
    }
    for (const auto& e : s.exprs) CollectVarNames(e, out);
  });
}

std::set<std::string> CollectVarNames(const std::vector<Stmt>& stmts) {
  std::set<std::string> out;
  for (const auto& s : stmts) CollectVarNames(s, out);
  return out;
}

std::set<std::string> CollectAllNames(const Ast& ast) {
  std::set<std::string> out;
  for (const auto& fn : ast.functions) {
    out.insert(fn.name);
    out.insert(fn.params.begin(), fn.params.end());
    for (const auto& s : fn.body) CollectVarNames(s, out);
    ForEachStmt(fn.body, [&](const Stmt& s) {
      for (const auto& e : s.exprs) {
        ForEachExpr(e, [&](const Expr& x) {
          if (x.kind == Expr::Kind::kCall) out.insert(x.text);
        });
      }
    });
  }
  return out;
}

std::set<LineId> FlaggedLines(const Ast& ast) {
  std::set<LineId> out;
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      if (s.vuln) out.insert(s.line);
    });
  }
  return out;
}

std::set<LineId> FunctionLines(const FunctionDef& fn) {
  std::set<LineId> out;
  ForEachStmt(fn.body, [&](const Stmt& s) { out.insert(s.line); });
  return out;
}

std::vector<Stmt> DesugarFor(std::vector<Stmt> stmts) {
  std::vector<Stmt> out;
  out.reserve(stmts.size());
  for (auto& s : stmts) {
    s.body = DesugarFor(std::move(s.body));
    s.else_body = DesugarFor(std::move(s.else_body));
    if (s.kind != Stmt::Kind::kFor) {
      out.push_back(std::move(s));
      continue;
    }
    Stmt init = std::move(s.header[0]);
    Stmt step = std::move(s.header[1]);
    Stmt loop = Stmt::While(std::move(s.exprs[0]), std::move(s.body));
    loop.line = s.line;
    loop.vuln = s.vuln;
    loop.body.push_back(std::move(step));
    out.push_back(std::move(init));
    out.push_back(std::move(loop));
  }
  return out;
}

}  // namespace zz

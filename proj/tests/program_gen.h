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

// Random well-formed mini-language programs for property tests. Programs
// terminate (loops are counter-bounded, calls only go to earlier helpers)
// but may trap: indices and divisors are drawn without guarding.

#ifndef ZZ_TESTS_PROGRAM_GEN_H_
#define ZZ_TESTS_PROGRAM_GEN_H_

#include <string>
#include <vector>

#include "zz/ast.h"
#include "zz/common.h"
#include "zz/lang.h"

namespace zz::testing {

class ProgramGen {
 public:
  explicit ProgramGen(uint64_t seed) : rng_(seed) {}

  Ast Generate() {
    Ast ast;
    sigs_.clear();
    const int helpers = static_cast<int>(rng_.Range(1, 4));
    for (int h = 0; h < helpers; ++h) {
      ast.functions.push_back(MakeFunction("h" + std::to_string(h), false));
    }
    ast.functions.push_back(MakeFunction("main", true));
    Renumber(ast);
    return ast;
  }

 private:
  struct Sig {
    std::string name;
    std::vector<bool> array_params;
  };

  struct Scope {
    std::vector<std::string> ints;
    std::vector<std::string> arrays;
    std::vector<std::string> strings;
  };

  FunctionDef MakeFunction(const std::string& name, bool is_main) {
    FunctionDef fn;
    fn.name = name;
    next_var_ = 0;
    Sig sig{name, {}};
    scopes_.assign(1, {});
    if (!is_main) {
      const int params = static_cast<int>(rng_.Range(0, 3));
      for (int p = 0; p < params; ++p) {
        const bool is_array = rng_.Bernoulli(0.3);
        std::string pname = "p" + std::to_string(p);
        fn.params.push_back(pname);
        sig.array_params.push_back(is_array);
        (is_array ? scopes_.back().arrays : scopes_.back().ints).push_back(pname);
      }
    }
    // Top-level arrays first so later statements can use them.
    const int arrays = static_cast<int>(rng_.Range(0, 2));
    for (int a = 0; a < arrays; ++a) {
      std::string aname = Fresh("arr");
      fn.body.push_back(Stmt::ArrayDecl(aname, rng_.Range(3, 8)));
      scopes_.back().arrays.push_back(aname);
    }
    fn.body.push_back(Stmt::VarDecl(Fresh("v"), IntExpr(1)));
    scopes_.back().ints.push_back(fn.body.back().name);
    const int count = static_cast<int>(rng_.Range(2, 7));
    for (int i = 0; i < count; ++i) fn.body.push_back(MakeStmt(0));
    if (!is_main && rng_.Bernoulli(0.7)) {
      fn.body.push_back(Stmt::Return(IntExpr(2)));
    }
    if (!is_main) sigs_.push_back(sig);
    return fn;
  }

  std::string Fresh(const std::string& stem) {
    return stem + std::to_string(next_var_++);
  }

  std::vector<std::string> All(bool arrays) const {
    std::vector<std::string> out;
    for (const auto& s : scopes_) {
      const auto& v = arrays ? s.arrays : s.ints;
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  std::vector<std::string> AllStrings() const {
    std::vector<std::string> out;
    for (const auto& s : scopes_) {
      out.insert(out.end(), s.strings.begin(), s.strings.end());
    }
    return out;
  }

  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(rng_.Below(v.size()))];
  }

  std::string RandomString() {
    static const char* kWords[] = {"ok", "len", "bad input", "x=", "done",
                                   "a\"b", "tab\tsep"};
    return kWords[rng_.Below(7)];
  }

  Expr IntExpr(int depth) {
    const auto ints = All(false);
    const auto arrays = All(true);
    const uint64_t choice = rng_.Below(depth > 2 ? 3 : 9);
    switch (choice) {
      case 0:
        return Expr::Int(rng_.Range(0, 12));
      case 1:
      case 2:
        if (!ints.empty()) return Expr::Var(Pick(ints));
        return Expr::Int(rng_.Range(0, 5));
      case 3:
      case 4: {
        static const BinOp kOps[] = {BinOp::kAdd, BinOp::kSub, BinOp::kMul,
                                     BinOp::kLt,  BinOp::kEq,  BinOp::kAnd,
                                     BinOp::kOr,  BinOp::kGe,  BinOp::kAdd};
        return Expr::Binary(kOps[rng_.Below(9)], IntExpr(depth + 1),
                            IntExpr(depth + 1));
      }
      case 5:
        return Expr::Binary(rng_.Bernoulli(0.5) ? BinOp::kDiv : BinOp::kMod,
                            IntExpr(depth + 1), IntExpr(depth + 1));
      case 6:
        if (!arrays.empty()) {
          return Expr::Index(Pick(arrays), IntExpr(depth + 1));
        }
        return Expr::Call("input", {});
      case 7:
        return Expr::Call("input", {});
      case 8:
        if (!sigs_.empty()) return CallExpr(depth + 1);
        return Expr::Unary(UnOp::kNeg, IntExpr(depth + 1));
    }
    return Expr::Int(0);
  }

  Expr CallExpr(int depth) {
    const Sig& sig = Pick(sigs_);
    const auto arrays = All(true);
    std::vector<Expr> args;
    for (bool is_array : sig.array_params) {
      if (is_array && !arrays.empty()) {
        args.push_back(Expr::Var(Pick(arrays)));
      } else {
        args.push_back(IntExpr(depth + 1));
      }
    }
    return Expr::Call(sig.name, std::move(args));
  }

  std::vector<Stmt> MakeBlock(int depth) {
    scopes_.emplace_back();
    std::vector<Stmt> out;
    const int count = static_cast<int>(rng_.Range(1, 4));
    for (int i = 0; i < count; ++i) out.push_back(MakeStmt(depth + 1));
    scopes_.pop_back();
    return out;
  }

  Stmt MakeStmt(int depth) {
    const auto ints = All(false);
    const auto arrays = All(true);
    const uint64_t choice = rng_.Below(depth >= 2 ? 7 : 12);
    switch (choice) {
      case 0: {
        Stmt s = Stmt::VarDecl(Fresh("v"), IntExpr(0));
        scopes_.back().ints.push_back(s.name);
        return s;
      }
      case 1:
        if (!ints.empty()) return Stmt::Assign(Pick(ints), IntExpr(0));
        return Stmt::CallStmt(Expr::Call("output", {IntExpr(0)}));
      case 2:
        if (!arrays.empty()) {
          return Stmt::IndexAssign(Pick(arrays), IntExpr(1), IntExpr(0));
        }
        return Stmt::CallStmt(Expr::Call("output", {IntExpr(0)}));
      case 3:
        return Stmt::CallStmt(Expr::Call("output", {IntExpr(0)}));
      case 4: {
        if (rng_.Bernoulli(0.5)) {
          Stmt s = Stmt::VarDecl(Fresh("s"), Expr::Str(RandomString()));
          scopes_.back().strings.push_back(s.name);
          return s;
        }
        const auto strings = AllStrings();
        Expr arg = Expr::Str(RandomString());
        if (!strings.empty() && rng_.Bernoulli(0.5)) {
          arg = Expr::Binary(BinOp::kAdd, Expr::Var(Pick(strings)), std::move(arg));
        }
        return Stmt::CallStmt(Expr::Call("output", {std::move(arg)}));
      }
      case 5:
        if (!sigs_.empty()) return Stmt::CallStmt(CallExpr(0));
        return Stmt::CallStmt(Expr::Call("output", {IntExpr(0)}));
      case 6:
        if (!ints.empty() && rng_.Bernoulli(0.3)) {
          return Stmt::Return(Expr::Var(Pick(ints)));
        }
        return Stmt::CallStmt(Expr::Call("output", {IntExpr(1)}));
      case 7:
      case 8: {
        Expr cond = IntExpr(1);
        auto then_body = MakeBlock(depth);
        std::vector<Stmt> else_body;
        if (rng_.Bernoulli(0.5)) else_body = MakeBlock(depth);
        return Stmt::If(std::move(cond), std::move(then_body),
                        std::move(else_body));
      }
      case 9: {
        // Counter-bounded while loop, emitted as a two-statement group by
        // wrapping in an always-true if.
        std::string counter = Fresh("c");
        std::vector<Stmt> group;
        group.push_back(Stmt::VarDecl(counter, Expr::Int(0)));
        scopes_.emplace_back();
        scopes_.back().ints.push_back(counter);
        auto body = MakeBlock(depth);
        body.push_back(Stmt::Assign(
            counter, Expr::Binary(BinOp::kAdd, Expr::Var(counter), Expr::Int(1))));
        scopes_.pop_back();
        Expr cond = Expr::Binary(BinOp::kLt, Expr::Var(counter),
                                 Expr::Int(rng_.Range(0, 5)));
        if (rng_.Bernoulli(0.3)) {
          cond = Expr::Binary(BinOp::kAnd, std::move(cond), IntExpr(2));
        }
        group.push_back(Stmt::While(std::move(cond), std::move(body)));
        return Stmt::If(Expr::Int(1), std::move(group));
      }
      default: {
        std::string idx = Fresh("i");
        Stmt s;
        s.kind = Stmt::Kind::kFor;
        scopes_.emplace_back();
        s.header.push_back(Stmt::VarDecl(idx, Expr::Int(0)));
        scopes_.back().ints.push_back(idx);
        s.exprs.push_back(Expr::Binary(BinOp::kLt, Expr::Var(idx),
                                       Expr::Int(rng_.Range(1, 5))));
        s.header.push_back(Stmt::Assign(
            idx, Expr::Binary(BinOp::kAdd, Expr::Var(idx), Expr::Int(1))));
        s.body = MakeBlock(depth);
        scopes_.pop_back();
        return s;
      }
    }
  }

  Rng rng_;
  std::vector<Sig> sigs_;
  std::vector<Scope> scopes_;
  int next_var_ = 0;
};

inline std::vector<int64_t> RandomInputs(Rng& rng, size_t n = 12) {
  std::vector<int64_t> out(n);
  for (auto& v : out) v = rng.Range(-3, 12);
  return out;
}

}  // namespace zz::testing

#endif  // ZZ_TESTS_PROGRAM_GEN_H_

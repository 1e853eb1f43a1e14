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

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "zz/common.h"
#include "zz/lang.h"

namespace zz {

namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void Inapplicable(TransformKind kind, const std::string& why) {
  throw Error(ErrorCode::kInapplicable,
              "inapplicable(" + TransformLabel(kind) + "): " + why);
}

class NameSupply {
 public:
  explicit NameSupply(const Ast& ast) : used_(CollectAllNames(ast)) {}

  std::string Fresh(const std::string& stem) {
    std::string base = kGeneratedPrefix + stem;
    if (used_.insert(base).second) return base;
    for (int n = 2;; ++n) {
      std::string candidate = base + "_" + std::to_string(n);
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::set<std::string> used_;
};

void ForEachExprMut(Expr& e, const std::function<void(Expr&)>& fn) {
  for (auto& a : e.args) ForEachExprMut(a, fn);
  fn(e);
}

// Post-order rewrite of every expression in the program.
void RewriteExprs(Ast& ast, const std::function<void(Expr&)>& fn) {
  for (auto& f : ast.functions) {
    ForEachStmt(f.body, [&](Stmt& s) {
      for (auto& e : s.exprs) ForEachExprMut(e, fn);
    });
  }
}

// Names a statement itself reads or writes, excluding nested statements.
std::set<std::string> OwnNames(const Stmt& s) {
  std::set<std::string> out;
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
  return out;
}

// Scalar names a simple statement (re)binds.
std::set<std::string> WrittenNames(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::kVarDecl:
    case Stmt::Kind::kArrayDecl:
    case Stmt::Kind::kAssign:
      return {s.name};
    default:
      return {};
  }
}

bool HasControlFlow(const FunctionDef& fn) {
  bool found = false;
  ForEachStmt(fn.body, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::kIf || s.kind == Stmt::Kind::kWhile ||
        s.kind == Stmt::Kind::kFor) {
      found = true;
    }
  });
  return found;
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<size_t>(rng.Below(items.size()))];
}

// ---------------------------------------------------------------------------
// CT-1 EncodeStrings

bool HasStringSite(const Ast& ast) {
  bool found = false;
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      for (const auto& e : s.exprs) {
        ForEachExpr(e, [&](const Expr& x) {
          if (x.kind == Expr::Kind::kStr && !x.text.empty()) found = true;
        });
      }
    });
  }
  return found;
}

void EncodeStrings(Ast& ast) {
  NameSupply names(ast);
  std::map<std::string, std::string> builders;
  std::vector<FunctionDef> added;
  RewriteExprs(ast, [&](Expr& e) {
    if (e.kind != Expr::Kind::kStr || e.text.empty()) return;
    auto it = builders.find(e.text);
    if (it == builders.end()) {
      FunctionDef fn;
      fn.name = names.Fresh("str");
      std::optional<Expr> value;
      for (unsigned char c : e.text) {
        Expr piece = Expr::Call("chr", {Expr::Int(c)});
        value = value ? Expr::Binary(BinOp::kAdd, std::move(*value), std::move(piece))
                      : std::move(piece);
      }
      fn.body.push_back(Stmt::Return(std::move(*value)));
      it = builders.emplace(e.text, fn.name).first;
      added.push_back(std::move(fn));
    }
    e = Expr::Call(it->second, {});
  });
  for (auto& fn : added) ast.functions.push_back(std::move(fn));
}

// ---------------------------------------------------------------------------
// CT-2 RndArgs

bool IsPure(const Expr& e) {
  bool pure = true;
  ForEachExpr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::kCall || x.kind == Expr::Kind::kIndex) pure = false;
    if (x.kind == Expr::Kind::kBinary &&
        (x.bin_op == BinOp::kDiv || x.bin_op == BinOp::kMod)) {
      pure = false;
    }
  });
  return pure;
}

std::vector<const FunctionDef*> NonEntryFunctions(const Ast& ast) {
  std::vector<const FunctionDef*> out;
  for (const auto& fn : ast.functions) {
    if (fn.name != kEntryFunction) out.push_back(&fn);
  }
  return out;
}

void RndArgs(Ast& ast, Rng& rng) {
  NameSupply names(ast);
  // Reordering arguments reorders their evaluation, so only functions whose
  // call sites pass pure arguments get permuted.
  std::map<std::string, bool> pure_sites;
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      for (const auto& e : s.exprs) {
        ForEachExpr(e, [&](const Expr& x) {
          if (x.kind != Expr::Kind::kCall || IsBuiltin(x.text)) return;
          bool& pure = pure_sites.try_emplace(x.text, true).first->second;
          for (const auto& a : x.args) pure = pure && IsPure(a);
        });
      }
    });
  }
  struct Plan {
    std::vector<size_t> order;
    int64_t bogus;
  };
  std::map<std::string, Plan> plans;
  for (auto& fn : ast.functions) {
    if (fn.name == kEntryFunction) continue;
    Plan plan;
    plan.order.resize(fn.params.size());
    for (size_t i = 0; i < plan.order.size(); ++i) plan.order[i] = i;
    auto it = pure_sites.find(fn.name);
    if (it == pure_sites.end() || it->second) rng.Shuffle(plan.order);
    plan.bogus = rng.Range(0, 99);
    std::vector<std::string> params;
    for (size_t i : plan.order) params.push_back(fn.params[i]);
    params.push_back(names.Fresh("bogus"));
    fn.params = std::move(params);
    plans.emplace(fn.name, std::move(plan));
  }
  RewriteExprs(ast, [&](Expr& e) {
    if (e.kind != Expr::Kind::kCall) return;
    auto it = plans.find(e.text);
    if (it == plans.end()) return;
    std::vector<Expr> args;
    for (size_t i : it->second.order) args.push_back(std::move(e.args[i]));
    args.push_back(Expr::Int(it->second.bogus));
    e.args = std::move(args);
  });
}

// ---------------------------------------------------------------------------
// CT-3 Flatten

class Flattener {
 public:
  Flattener(std::string pc) : pc_(std::move(pc)) {}

  // Returns blocks indexed by label - 1; label 0 is the exit.
  std::vector<std::vector<Stmt>> Run(const std::vector<Stmt>& body) {
    current_ = NewBlock();
    Compile(body);
    Goto(0);
    return std::move(blocks_);
  }

 private:
  int NewBlock() {
    blocks_.emplace_back();
    return static_cast<int>(blocks_.size());
  }

  Stmt GotoStmt(int label) const { return Stmt::Assign(pc_, Expr::Int(label)); }

  void Emit(Stmt s) { blocks_[static_cast<size_t>(current_ - 1)].push_back(std::move(s)); }

  void Goto(int label) { Emit(GotoStmt(label)); }

  // Two-way branch that keeps the original statement's identity.
  void Branch(const Stmt& origin, int if_true, int if_false) {
    Stmt s = Stmt::If(origin.exprs[0], {GotoStmt(if_true)}, {GotoStmt(if_false)});
    s.line = origin.line;
    s.vuln = origin.vuln;
    Emit(std::move(s));
  }

  void Compile(const std::vector<Stmt>& stmts) {
    for (const auto& s : stmts) {
      switch (s.kind) {
        case Stmt::Kind::kReturn:
          Emit(s);
          current_ = NewBlock();
          break;
        case Stmt::Kind::kIf: {
          const int then_block = NewBlock();
          const int else_block = s.else_body.empty() ? 0 : NewBlock();
          const int join = NewBlock();
          Branch(s, then_block, else_block ? else_block : join);
          current_ = then_block;
          Compile(s.body);
          Goto(join);
          if (else_block) {
            current_ = else_block;
            Compile(s.else_body);
            Goto(join);
          }
          current_ = join;
          break;
        }
        case Stmt::Kind::kWhile: {
          const int cond = NewBlock();
          const int body = NewBlock();
          const int exit = NewBlock();
          Goto(cond);
          current_ = cond;
          Branch(s, body, exit);
          current_ = body;
          Compile(s.body);
          Goto(cond);
          current_ = exit;
          break;
        }
        case Stmt::Kind::kFor:
          // Callers desugar first.
          throw std::logic_error("Flattener: unexpected for-loop");
        default:
          Emit(s);
      }
    }
  }

  std::string pc_;
  std::vector<std::vector<Stmt>> blocks_;
  int current_ = 0;
};

// Turns declarations into assignments and collects the hoisted prologue.
void HoistDecls(std::vector<Stmt>& stmts, std::vector<Stmt>& prologue) {
  std::vector<Stmt> kept;
  for (auto& s : stmts) {
    if (s.kind == Stmt::Kind::kArrayDecl) {
      prologue.push_back(std::move(s));
      continue;
    }
    if (s.kind == Stmt::Kind::kVarDecl) {
      prologue.push_back(Stmt::VarDecl(s.name, Expr::Int(0)));
      Stmt assign = Stmt::Assign(s.name, std::move(s.exprs[0]));
      assign.line = s.line;
      assign.vuln = s.vuln;
      kept.push_back(std::move(assign));
      continue;
    }
    HoistDecls(s.body, prologue);
    HoistDecls(s.else_body, prologue);
    kept.push_back(std::move(s));
  }
  stmts = std::move(kept);
}

void FlattenFunction(FunctionDef& fn, NameSupply& names, Rng& rng) {
  std::vector<Stmt> body = DesugarFor(std::move(fn.body));
  std::vector<Stmt> prologue;
  HoistDecls(body, prologue);
  const std::string pc = names.Fresh("pc");
  auto blocks = Flattener(pc).Run(body);

  std::vector<int> order(blocks.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
  rng.Shuffle(order);

  std::vector<Stmt> dispatch;
  for (int label : order) {
    dispatch.push_back(Stmt::If(
        Expr::Binary(BinOp::kEq, Expr::Var(pc), Expr::Int(label)),
        std::move(blocks[static_cast<size_t>(label - 1)])));
  }
  fn.body = std::move(prologue);
  fn.body.push_back(Stmt::VarDecl(pc, Expr::Int(1)));
  fn.body.push_back(Stmt::While(
      Expr::Binary(BinOp::kNe, Expr::Var(pc), Expr::Int(0)), std::move(dispatch)));
}

void Flatten(Ast& ast, Rng& rng) {
  NameSupply names(ast);
  for (auto& fn : ast.functions) {
    if (HasControlFlow(fn)) FlattenFunction(fn, names, rng);
  }
}

// ---------------------------------------------------------------------------
// CT-4 MergeSimple / CT-5 MergeFlatten

void RenameVars(FunctionDef& fn, const std::map<std::string, std::string>& to) {
  auto rename = [&](std::string& name) {
    auto it = to.find(name);
    if (it != to.end()) name = it->second;
  };
  for (auto& p : fn.params) rename(p);
  ForEachStmt(fn.body, [&](Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
      case Stmt::Kind::kArrayDecl:
      case Stmt::Kind::kAssign:
      case Stmt::Kind::kIndexAssign:
        rename(s.name);
        break;
      default:
        break;
    }
    for (auto& e : s.exprs) {
      ForEachExprMut(e, [&](Expr& x) {
        if (x.kind == Expr::Kind::kVar || x.kind == Expr::Kind::kIndex) {
          rename(x.text);
        }
      });
    }
  });
}

std::set<std::string> LocalNames(const FunctionDef& fn) {
  std::set<std::string> out(fn.params.begin(), fn.params.end());
  for (const auto& s : fn.body) CollectVarNames(s, out);
  return out;
}

std::vector<Stmt> TakeTopLevelArrays(std::vector<Stmt>& body) {
  std::vector<Stmt> arrays;
  std::vector<Stmt> rest;
  for (auto& s : body) {
    (s.kind == Stmt::Kind::kArrayDecl ? arrays : rest).push_back(std::move(s));
  }
  body = std::move(rest);
  return arrays;
}

// Returns the names of the merged functions.
std::vector<std::string> MergeFunctions(Ast& ast, Rng& rng) {
  NameSupply names(ast);
  std::vector<std::string> candidates;
  for (const auto* fn : NonEntryFunctions(ast)) candidates.push_back(fn->name);
  rng.Shuffle(candidates);

  struct Route {
    std::string merged;
    int64_t selector;
    size_t leading;   // dummy arguments before the original ones
    size_t trailing;  // dummy arguments after
  };
  std::map<std::string, Route> routes;
  std::vector<std::string> merged_names;

  for (size_t i = 0; i + 1 < candidates.size(); i += 2) {
    FunctionDef* first = ast.Find(candidates[i]);
    FunctionDef second = *ast.Find(candidates[i + 1]);
    const std::string selector = names.Fresh("sel");
    std::set<std::string> taken = LocalNames(*first);
    taken.insert(selector);
    std::map<std::string, std::string> renames;
    for (const auto& name : LocalNames(second)) {
      if (taken.count(name)) renames[name] = names.Fresh(name);
    }
    RenameVars(second, renames);

    FunctionDef merged;
    merged.name = names.Fresh("merge_" + first->name + "_" + second.name);
    merged.params.push_back(selector);
    merged.params.insert(merged.params.end(), first->params.begin(),
                         first->params.end());
    merged.params.insert(merged.params.end(), second.params.begin(),
                         second.params.end());
    merged.body = TakeTopLevelArrays(first->body);
    auto second_arrays = TakeTopLevelArrays(second.body);
    for (auto& a : second_arrays) merged.body.push_back(std::move(a));
    merged.body.push_back(Stmt::If(
        Expr::Binary(BinOp::kEq, Expr::Var(selector), Expr::Int(0)),
        std::move(first->body), std::move(second.body)));

    routes[candidates[i]] = {merged.name, 0, 0, second.params.size()};
    routes[candidates[i + 1]] = {merged.name, 1, first->params.size(), 0};
    merged_names.push_back(merged.name);

    const std::string second_name = candidates[i + 1];
    *first = std::move(merged);
    ast.functions.erase(std::find_if(
        ast.functions.begin(), ast.functions.end(),
        [&](const FunctionDef& f) { return f.name == second_name; }));
  }

  RewriteExprs(ast, [&](Expr& e) {
    if (e.kind != Expr::Kind::kCall) return;
    auto it = routes.find(e.text);
    if (it == routes.end()) return;
    const Route& r = it->second;
    std::vector<Expr> args;
    args.push_back(Expr::Int(r.selector));
    for (size_t k = 0; k < r.leading; ++k) args.push_back(Expr::Int(0));
    for (auto& a : e.args) args.push_back(std::move(a));
    for (size_t k = 0; k < r.trailing; ++k) args.push_back(Expr::Int(0));
    e = Expr::Call(r.merged, std::move(args));
  });
  return merged_names;
}

// ---------------------------------------------------------------------------
// CT-6 SplitTop

void DesugarAll(Ast& ast) {
  for (auto& fn : ast.functions) fn.body = DesugarFor(std::move(fn.body));
}

std::vector<Expr> VarArgs(const std::vector<std::string>& names) {
  std::vector<Expr> out;
  for (const auto& n : names) out.push_back(Expr::Var(n));
  return out;
}

void SplitTop(Ast& ast, Rng& rng) {
  DesugarAll(ast);
  std::vector<size_t> sites;
  for (size_t i = 0; i < ast.functions.size(); ++i) {
    if (ast.functions[i].body.size() >= 2) sites.push_back(i);
  }
  NameSupply names(ast);
  const size_t index = Pick(rng, sites);
  FunctionDef& fn = ast.functions[index];
  const size_t cut = static_cast<size_t>(rng.Range(1, static_cast<int64_t>(fn.body.size()) - 1));

  std::vector<Stmt> head(std::make_move_iterator(fn.body.begin()),
                         std::make_move_iterator(fn.body.begin() + static_cast<std::ptrdiff_t>(cut)));
  std::vector<Stmt> tail(std::make_move_iterator(fn.body.begin() + static_cast<std::ptrdiff_t>(cut)),
                         std::make_move_iterator(fn.body.end()));

  // Locals the tail mentions that are bound before the split point.
  const std::set<std::string> tail_names = CollectVarNames(tail);
  std::vector<std::string> live;
  for (const auto& p : fn.params) {
    if (tail_names.count(p)) live.push_back(p);
  }
  for (const auto& s : head) {
    if ((s.kind == Stmt::Kind::kVarDecl || s.kind == Stmt::Kind::kArrayDecl) &&
        tail_names.count(s.name)) {
      live.push_back(s.name);
    }
  }

  FunctionDef first;
  first.name = names.Fresh(fn.name + "_split_1");
  first.params = fn.params;
  FunctionDef second;
  second.name = names.Fresh(fn.name + "_split_2");
  second.params = live;
  second.body = std::move(tail);
  first.body = std::move(head);
  first.body.push_back(Stmt::Return(Expr::Call(second.name, VarArgs(live))));
  fn.body.clear();
  fn.body.push_back(Stmt::Return(Expr::Call(first.name, VarArgs(fn.params))));

  const auto pos = ast.functions.begin() + static_cast<std::ptrdiff_t>(index) + 1;
  ast.functions.insert(pos, {std::move(first), std::move(second)});
}

// ---------------------------------------------------------------------------
// CT-7 SplitBlock / CT-8 SplitRecursive

struct BlockSite {
  size_t function;
  std::vector<Stmt>* list;
  size_t start;
  size_t length;
};

void CollectRuns(size_t function, std::vector<Stmt>& list,
                 std::vector<BlockSite>& out) {
  size_t i = 0;
  while (i < list.size()) {
    if (!list[i].IsSimple()) {
      CollectRuns(function, list[i].body, out);
      CollectRuns(function, list[i].else_body, out);
      ++i;
      continue;
    }
    size_t j = i;
    while (j < list.size() && list[j].IsSimple()) ++j;
    if (j - i >= 2) out.push_back({function, &list, i, j - i});
    i = j;
  }
}

std::vector<BlockSite> CollectBlockSites(Ast& ast) {
  std::vector<BlockSite> out;
  for (size_t f = 0; f < ast.functions.size(); ++f) {
    CollectRuns(f, ast.functions[f].body, out);
  }
  return out;
}

class BlockSplitter {
 public:
  BlockSplitter(Ast& ast, NameSupply& names, Rng& rng)
      : ast_(ast), names_(names), rng_(rng) {}

  // Replaces list[start, start + length) by calls to extracted functions.
  // Returns the number of call statements now occupying the run.
  size_t Split(const FunctionDef& owner, std::vector<Stmt>& list, size_t start,
               size_t length) {
    // How many statements of the owner mention each name, plus one for
    // each parameter.
    std::map<std::string, int> mentions;
    for (const auto& p : owner.params) ++mentions[p];
    ForEachStmt(owner.body, [&](const Stmt& s) {
      for (const auto& n : OwnNames(s)) ++mentions[n];
    });

    std::vector<std::pair<size_t, size_t>> segments = Partition(length);
    std::vector<std::pair<size_t, size_t>> refined;
    for (auto [b, e] : segments) {
      if (e - b > 1 && Escaping(list, start + b, start + e, mentions).size() > 1) {
        for (size_t k = b; k < e; ++k) refined.push_back({k, k + 1});
      } else {
        refined.push_back({b, e});
      }
    }

    std::vector<Stmt> replacement;
    for (auto [b, e] : refined) {
      replacement.push_back(
          Extract(owner, list, start + b, start + e, mentions));
    }
    list.erase(list.begin() + static_cast<std::ptrdiff_t>(start),
               list.begin() + static_cast<std::ptrdiff_t>(start + length));
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(start),
                std::make_move_iterator(replacement.begin()),
                std::make_move_iterator(replacement.end()));
    return replacement.size();
  }

  std::vector<FunctionDef> TakeAdded() { return std::move(added_); }

 private:
  // At least two contiguous segments covering [0, length).
  std::vector<std::pair<size_t, size_t>> Partition(size_t length) {
    const size_t max_parts = std::min<size_t>(length, 4);
    const size_t parts = static_cast<size_t>(rng_.Range(2, static_cast<int64_t>(max_parts)));
    std::vector<size_t> cuts;
    for (size_t k = 1; k < length; ++k) cuts.push_back(k);
    rng_.Shuffle(cuts);
    cuts.resize(parts - 1);
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<size_t, size_t>> out;
    size_t prev = 0;
    for (size_t c : cuts) {
      out.push_back({prev, c});
      prev = c;
    }
    out.push_back({prev, length});
    return out;
  }

  static std::set<std::string> Escaping(const std::vector<Stmt>& list,
                                        size_t begin, size_t end,
                                        const std::map<std::string, int>& mentions) {
    std::map<std::string, int> inside;
    std::set<std::string> written;
    for (size_t k = begin; k < end; ++k) {
      for (const auto& n : OwnNames(list[k])) ++inside[n];
      for (const auto& n : WrittenNames(list[k])) written.insert(n);
    }
    std::set<std::string> out;
    for (const auto& n : written) {
      if (mentions.at(n) > inside[n]) out.insert(n);
    }
    return out;
  }

  Stmt Extract(const FunctionDef& owner, std::vector<Stmt>& list, size_t begin,
               size_t end, const std::map<std::string, int>& mentions) {
    const std::set<std::string> escaping = Escaping(list, begin, end, mentions);
    std::set<std::string> declared;
    std::vector<std::string> inputs;
    std::set<std::string> seen;
    for (size_t k = begin; k < end; ++k) {
      const Stmt& s = list[k];
      // Reads in the initializer happen before the declaration binds.
      std::set<std::string> names;
      for (const auto& e : s.exprs) CollectVarNames(e, names);
      if (s.kind == Stmt::Kind::kAssign || s.kind == Stmt::Kind::kIndexAssign) {
        names.insert(s.name);
      }
      for (const auto& n : names) {
        if (!declared.count(n) && seen.insert(n).second) inputs.push_back(n);
      }
      if (s.kind == Stmt::Kind::kVarDecl || s.kind == Stmt::Kind::kArrayDecl) {
        declared.insert(s.name);
      }
    }
    FunctionDef fn;
    fn.name = names_.Fresh(owner.name + "_blk");
    fn.params = inputs;
    for (size_t k = begin; k < end; ++k) fn.body.push_back(std::move(list[k]));
    Expr call = Expr::Call(fn.name, VarArgs(inputs));
    Stmt site;
    if (escaping.empty()) {
      site = Stmt::CallStmt(std::move(call));
    } else {
      const std::string& out = *escaping.begin();
      fn.body.push_back(Stmt::Return(Expr::Var(out)));
      site = declared.count(out) ? Stmt::VarDecl(out, std::move(call))
                                 : Stmt::Assign(out, std::move(call));
    }
    added_.push_back(std::move(fn));
    return site;
  }

  Ast& ast_;
  NameSupply& names_;
  Rng& rng_;
  std::vector<FunctionDef> added_;
};

void SplitBlock(Ast& ast, Rng& rng, bool recursive) {
  NameSupply names(ast);
  auto sites = CollectBlockSites(ast);
  const BlockSite site = Pick(rng, sites);
  BlockSplitter splitter(ast, names, rng);
  const FunctionDef& owner = ast.functions[site.function];
  const size_t calls = splitter.Split(owner, *site.list, site.start, site.length);
  if (recursive && calls >= 2) {
    splitter.Split(owner, *site.list, site.start, calls);
  }
  for (auto& fn : splitter.TakeAdded()) ast.functions.push_back(std::move(fn));
}

void CheckLines(const Ast& ast) {
  std::set<LineId> seen;
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      if (s.line == kNoLine || !seen.insert(s.line).second) {
        throw Error(ErrorCode::kPrecondition,
                    "transform input needs unique nonzero LineIds");
      }
    });
  }
}

}  // namespace

const char* TransformName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kEncodeStrings:
      return "EncodeStrings";
    case TransformKind::kRndArgs:
      return "RndArgs";
    case TransformKind::kFlatten:
      return "Flatten";
    case TransformKind::kMergeSimple:
      return "MergeSimple";
    case TransformKind::kMergeFlatten:
      return "MergeFlatten";
    case TransformKind::kSplitTop:
      return "SplitTop";
    case TransformKind::kSplitBlock:
      return "SplitBlock";
    case TransformKind::kSplitRecursive:
      return "SplitRecursive";
  }
  return "?";
}

std::string TransformLabel(TransformKind kind) {
  return "CT-" + std::to_string(static_cast<int>(kind));
}

std::optional<TransformKind> ParseTransformKind(std::string_view text) {
  const std::string t = Lower(text);
  for (TransformKind k : kAllTransforms) {
    const std::string n = std::to_string(static_cast<int>(k));
    if (t == "ct" + n || t == "ct-" + n || t == Lower(TransformName(k))) return k;
  }
  return std::nullopt;
}

TransformSet::TransformSet(const std::vector<TransformKind>& kinds) {
  for (TransformKind k : kinds) {
    if (Contains(k)) {
      throw Error(ErrorCode::kPrecondition,
                  "duplicate transform " + TransformLabel(k));
    }
    kinds_.push_back(k);
  }
  std::sort(kinds_.begin(), kinds_.end());
}

TransformSet TransformSet::All() {
  return TransformSet({kAllTransforms.begin(), kAllTransforms.end()});
}

TransformSet TransformSet::Named(int index) {
  using K = TransformKind;
  switch (index) {
    case 0:
      return TransformSet();
    case 1:
      return TransformSet({K::kRndArgs, K::kSplitBlock, K::kSplitRecursive});
    case 2:
      return TransformSet({K::kFlatten, K::kMergeSimple, K::kSplitTop});
    case 3:
      return TransformSet(
          {K::kRndArgs, K::kMergeSimple, K::kMergeFlatten, K::kSplitTop});
    case 4:
      return TransformSet({K::kEncodeStrings, K::kRndArgs, K::kFlatten,
                           K::kMergeSimple, K::kSplitTop, K::kSplitBlock});
    case 5:
      return All();
  }
  throw Error(ErrorCode::kUsage, "no defender set md" + std::to_string(index));
}

TransformSet TransformSet::Parse(std::string_view text) {
  const std::string t = Lower(text);
  if (t == "all") return All();
  if (t.empty() || t == "none") return TransformSet();
  if (t.size() == 3 && t.rfind("md", 0) == 0 && std::isdigit(static_cast<unsigned char>(t[2]))) {
    return Named(t[2] - '0');
  }
  std::vector<TransformKind> kinds;
  size_t pos = 0;
  while (pos <= t.size()) {
    size_t comma = t.find(',', pos);
    if (comma == std::string::npos) comma = t.size();
    std::string item = t.substr(pos, comma - pos);
    auto kind = ParseTransformKind(item);
    if (!kind) throw Error(ErrorCode::kUsage, "unknown transform '" + item + "'");
    kinds.push_back(*kind);
    pos = comma + 1;
  }
  try {
    return TransformSet(kinds);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUsage, e.what());
  }
}

bool TransformSet::Contains(TransformKind kind) const {
  return std::find(kinds_.begin(), kinds_.end(), kind) != kinds_.end();
}

std::string TransformSet::ToString() const {
  std::string out;
  for (TransformKind k : kinds_) {
    if (!out.empty()) out += ",";
    out += "ct" + std::to_string(static_cast<int>(k));
  }
  return out;
}

bool IsApplicable(const Ast& ast, TransformKind kind) {
  switch (kind) {
    case TransformKind::kEncodeStrings:
      return HasStringSite(ast);
    case TransformKind::kRndArgs:
      return !NonEntryFunctions(ast).empty();
    case TransformKind::kFlatten:
      return std::any_of(ast.functions.begin(), ast.functions.end(), HasControlFlow);
    case TransformKind::kMergeSimple:
    case TransformKind::kMergeFlatten:
      return NonEntryFunctions(ast).size() >= 2;
    case TransformKind::kSplitTop: {
      Ast copy = ast;
      DesugarAll(copy);
      return std::any_of(copy.functions.begin(), copy.functions.end(),
                         [](const FunctionDef& f) { return f.body.size() >= 2; });
    }
    case TransformKind::kSplitBlock:
    case TransformKind::kSplitRecursive: {
      Ast copy = ast;
      return !CollectBlockSites(copy).empty();
    }
  }
  return false;
}

TransformResult ApplyTransform(const Ast& ast, TransformKind kind,
                               uint64_t seed) {
  CheckLines(ast);
  if (!IsApplicable(ast, kind)) Inapplicable(kind, "no site in program");
  Rng rng(DeriveSeed(seed, TransformName(kind)));
  TransformResult result{ast, {}};
  Ast& out = result.ast;
  switch (kind) {
    case TransformKind::kEncodeStrings:
      EncodeStrings(out);
      break;
    case TransformKind::kRndArgs:
      RndArgs(out, rng);
      break;
    case TransformKind::kFlatten:
      Flatten(out, rng);
      break;
    case TransformKind::kMergeSimple:
      MergeFunctions(out, rng);
      break;
    case TransformKind::kMergeFlatten: {
      const auto merged = MergeFunctions(out, rng);
      NameSupply names(out);
      for (const auto& name : merged) FlattenFunction(*out.Find(name), names, rng);
      break;
    }
    case TransformKind::kSplitTop:
      SplitTop(out, rng);
      break;
    case TransformKind::kSplitBlock:
      SplitBlock(out, rng, /*recursive=*/false);
      break;
    case TransformKind::kSplitRecursive:
      SplitBlock(out, rng, /*recursive=*/true);
      break;
  }
  result.line_map = Renumber(out);
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) {
      if (!result.line_map.count(s.line)) {
        throw std::logic_error(std::string(TransformName(kind)) +
                               " dropped line " + std::to_string(s.line));
      }
    });
  }
  Validate(out);
  return result;
}

TransformResult ApplyPipeline(const Ast& ast,
                              const std::vector<TransformKind>& kinds,
                              uint64_t seed) {
  if (kinds.empty()) {
    throw Error(ErrorCode::kPrecondition, "empty transform pipeline");
  }
  TransformResult acc{ast, {}};
  for (const auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](const Stmt& s) { acc.line_map[s.line] = {s.line}; });
  }
  bool applied = false;
  for (size_t i = 0; i < kinds.size(); ++i) {
    if (!IsApplicable(acc.ast, kinds[i])) continue;
    TransformResult stage = ApplyTransform(acc.ast, kinds[i], DeriveSeed(seed, i));
    acc.line_map = ComposeLineMaps(acc.line_map, stage.line_map);
    acc.ast = std::move(stage.ast);
    applied = true;
  }
  if (!applied) {
    throw Error(ErrorCode::kInapplicable, "inapplicable: no stage of the pipeline applies");
  }
  return acc;
}

LineMap ComposeLineMaps(const LineMap& first, const LineMap& second) {
  LineMap out;
  for (const auto& [origin, mids] : first) {
    auto& images = out[origin];
    for (LineId mid : mids) {
      auto it = second.find(mid);
      if (it != second.end()) images.insert(it->second.begin(), it->second.end());
    }
  }
  return out;
}

}  // namespace zz

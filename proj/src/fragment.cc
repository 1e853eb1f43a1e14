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

#include <algorithm>
#include <map>

#include "zz/lang.h"

namespace zz {

namespace {

using DefSet = std::map<std::string, std::set<LineId>>;

void Merge(DefSet& into, const DefSet& from) {
  for (const auto& [name, lines] : from) into[name].insert(lines.begin(), lines.end());
}

// Names that hold arrays in this function: declared arrays and anything
// indexed or index-assigned.
std::set<std::string> ArrayNames(const FunctionDef& fn) {
  std::set<std::string> out;
  ForEachStmt(fn.body, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::kArrayDecl || s.kind == Stmt::Kind::kIndexAssign) {
      out.insert(s.name);
    }
    ForEachOwnExpr(s, [&](const Expr& e) {
      ForEachExpr(e, [&](const Expr& x) {
        if (x.kind == Expr::Kind::kIndex) out.insert(x.text);
      });
    });
  });
  return out;
}

// Reaching definitions over the structured body. Records, for every
// statement, the definitions reaching the point where it reads.
class ReachingDefs {
 public:
  explicit ReachingDefs(const FunctionDef& fn) : arrays_(ArrayNames(fn)) {
    Flow(fn.body, {});
  }

  const DefSet& At(LineId line) const { return at_.at(line); }
  const std::map<LineId, std::set<std::string>>& uses() const { return uses_; }

 private:
  // Returns the out-state. Code after a return sees no definitions and
  // `dead_` stays set for the enclosing construct.
  DefSet Flow(const std::vector<Stmt>& stmts, DefSet in) {
    for (const auto& s : stmts) in = Step(s, std::move(in));
    return in;
  }

  void Record(const Stmt& s, const DefSet& in) { Merge(at_[s.line], in); }

  DefSet Step(const Stmt& s, DefSet in) {
    const bool was_dead = std::exchange(dead_, false);
    DefSet out = StepLive(s, std::move(in));
    dead_ = dead_ || was_dead;
    return out;
  }

  DefSet StepLive(const Stmt& s, DefSet in) {
    std::set<std::string>& used = uses_[s.line];
    ForEachOwnExpr(s, [&](const Expr& e) { CollectVarNames(e, used); });
    switch (s.kind) {
      case Stmt::Kind::kIf: {
        Record(s, in);
        DefSet then_out = Flow(s.body, in);
        const bool then_dead = std::exchange(dead_, false);
        DefSet else_out = Flow(s.else_body, in);
        const bool else_dead = std::exchange(dead_, false);
        DefSet out;
        if (!then_dead) Merge(out, then_out);
        if (!else_dead) Merge(out, else_out);
        dead_ = then_dead && else_dead;
        return out;
      }
      case Stmt::Kind::kWhile:
        return Loop(s, nullptr, std::move(in));
      case Stmt::Kind::kFor:
        in = Step(s.header[0], std::move(in));
        return Loop(s, &s.header[1], std::move(in));
      case Stmt::Kind::kReturn:
        Record(s, in);
        dead_ = true;
        return {};
      default:
        break;
    }
    Record(s, in);
    const LineId line = s.line;
    if (s.kind == Stmt::Kind::kIndexAssign) {
      used.insert(s.name);
      in[s.name].insert(line);  // weak update
    } else if (s.kind == Stmt::Kind::kVarDecl || s.kind == Stmt::Kind::kAssign ||
               s.kind == Stmt::Kind::kArrayDecl) {
      in[s.name] = {line};
    }
    // A callee may write through an array argument.
    ForEachOwnExpr(s, [&](const Expr& e) {
      ForEachExpr(e, [&](const Expr& x) {
        if (x.kind != Expr::Kind::kCall || IsBuiltin(x.text)) return;
        for (const auto& a : x.args) {
          if (a.kind == Expr::Kind::kVar && arrays_.count(a.text)) in[a.text].insert(line);
        }
      });
    });
    return in;
  }

  DefSet Loop(const Stmt& s, const Stmt* step, DefSet in) {
    DefSet head = in;
    for (;;) {
      Record(s, head);
      DefSet body_out = Flow(s.body, head);
      const bool body_dead = std::exchange(dead_, false);
      if (step && !body_dead) body_out = Step(*step, std::move(body_out));
      DefSet next = in;
      if (!body_dead) Merge(next, body_out);
      if (next == head) break;
      head = std::move(next);
    }
    return head;
  }

  std::set<std::string> arrays_;
  std::map<LineId, DefSet> at_;
  std::map<LineId, std::set<std::string>> uses_;
  bool dead_ = false;
};

std::vector<std::string> TokenTexts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::string SliceText(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::kIf:
    case Stmt::Kind::kWhile:
      return PrintStmtHeader(s);
    case Stmt::Kind::kFor:
      return "for (" + PrintExpr(s.exprs[0]) + ")";
    default:
      return PrintStmtHeader(s) + ";";
  }
}

bool IsCriterion(const Stmt& s, const SliceOptions& options) {
  if (s.kind == Stmt::Kind::kIndexAssign && options.index_writes) return true;
  bool hit = false;
  ForEachOwnExpr(s, [&](const Expr& e) {
    ForEachExpr(e, [&](const Expr& x) {
      if (x.kind == Expr::Kind::kIndex && options.index_reads) hit = true;
      if (x.kind == Expr::Kind::kCall && options.risky_calls.count(x.text)) hit = true;
    });
  });
  return hit;
}

Population PopulationOf(const Program& p) {
  return p.provenance.original() ? Population::kX : Population::kXPrime;
}

}  // namespace

const char* GranularityName(Granularity g) {
  return g == Granularity::kFunction ? "function" : "slice";
}

const char* PopulationName(Population p) { return p == Population::kX ? "X" : "X'"; }

std::set<LineId> BackwardSlice(const FunctionDef& fn, LineId criterion) {
  ReachingDefs rd(fn);
  std::set<LineId> slice{criterion};
  std::vector<LineId> work{criterion};
  while (!work.empty()) {
    const LineId line = work.back();
    work.pop_back();
    const DefSet& reaching = rd.At(line);
    for (const auto& name : rd.uses().at(line)) {
      auto it = reaching.find(name);
      if (it == reaching.end()) continue;
      for (LineId def : it->second) {
        if (slice.insert(def).second) work.push_back(def);
      }
    }
  }
  return slice;
}

std::vector<Fragment> ExtractFunctions(const Program& program) {
  std::vector<Fragment> out;
  for (size_t i = 0; i < program.ast.functions.size(); ++i) {
    const FunctionDef& fn = program.ast.functions[i];
    Fragment f;
    f.id = program.id + "/" + fn.name;
    f.program_id = program.id;
    f.function = fn.name;
    f.granularity = Granularity::kFunction;
    f.split = program.split;
    f.population = PopulationOf(program);
    f.tokens = TokenTexts(Tokenize(fn));
    f.origin_lines = FunctionLines(fn);
    ForEachStmt(fn.body, [&](const Stmt& s) { f.label |= s.vuln ? 1 : 0; });
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Fragment> ExtractSlices(const Program& program, const SliceOptions& options) {
  std::vector<Fragment> out;
  for (const auto& fn : program.ast.functions) {
    std::map<LineId, const Stmt*> by_line;
    std::vector<LineId> criteria;
    ForEachStmt(fn.body, [&](const Stmt& s) {
      by_line[s.line] = &s;
      if (IsCriterion(s, options)) criteria.push_back(s.line);
    });
    for (LineId c : criteria) {
      Fragment f;
      f.id = program.id + "/" + fn.name + "/s" + std::to_string(c);
      f.program_id = program.id;
      f.function = fn.name;
      f.granularity = Granularity::kSlice;
      f.split = program.split;
      f.population = PopulationOf(program);
      f.origin_lines = BackwardSlice(fn, c);
      for (LineId line : f.origin_lines) {
        const Stmt& s = *by_line.at(line);
        f.label |= s.vuln ? 1 : 0;
        for (auto& t : TokenTexts(Tokenize(SliceText(s)))) f.tokens.push_back(std::move(t));
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Fragment> ExtractFragments(const Corpus& corpus, Granularity g,
                                       const SliceOptions& options) {
  std::vector<Fragment> out;
  for (const auto& p : corpus.programs) {
    auto part = g == Granularity::kFunction ? ExtractFunctions(p) : ExtractSlices(p, options);
    for (auto& f : part) out.push_back(std::move(f));
  }
  auto first_line = [](const Fragment& f) {
    return f.origin_lines.empty() ? kNoLine : *f.origin_lines.begin();
  };
  std::stable_sort(out.begin(), out.end(), [&](const Fragment& a, const Fragment& b) {
    if (a.program_id != b.program_id) return a.program_id < b.program_id;
    return first_line(a) < first_line(b);
  });
  return out;
}

}  // namespace zz

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "zz/common.h"
#include "zz/interp.h"
#include "zz/lang.h"

namespace zz {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Program templates. Each helper slot reads one input in main; vulnerable
// variants drop or loosen a bounds check on the flagged statement.

struct Slot {
  std::string source;        // one or more function definitions
  std::string call;          // statement text for main, uses `arg`
  std::vector<int64_t> trap_values;
  bool vuln = false;
};

const std::vector<std::string> kStems = {
    "copy", "move", "load", "scan", "fill", "store", "put", "emit",
    "read", "fetch", "sum", "pack", "band", "level", "row", "cell"};

std::string Num(int64_t v) { return std::to_string(v); }

std::string Flag(bool vuln) { return vuln ? " //@vuln" : ""; }

class TemplateBuilder {
 public:
  TemplateBuilder(Rng& rng, int64_t n) : rng_(rng), n_(n) {}

  Slot Make(int kind, bool vuln, const std::string& arg, const std::string& result) {
    switch (kind) {
      case 0:
        return CopyLoop(vuln, arg, result);
      case 1:
        return CheckedStore(vuln, arg, result);
      case 2:
        return Report(vuln, arg, result);
      case 3:
        return CallChain(vuln, arg, result);
      default:
        return FillLoop(vuln, arg, result);
    }
  }

  static constexpr int kKinds = 5;

 private:
  std::string Name(const std::string& hint) {
    std::string name;
    do {
      name = hint + "_" + kStems[rng_.Below(kStems.size())] + Num(rng_.Range(0, 99));
    } while (!used_.insert(name).second);
    return name;
  }

  Slot CopyLoop(bool vuln, const std::string& arg, const std::string& result) {
    const std::string f = Name("copy");
    const int64_t k = rng_.Range(0, 9);
    std::string clamp;
    std::string cond = "i < n";
    const bool in_cond = rng_.Bernoulli(0.5);
    if (!vuln) {
      if (in_cond) {
        cond = "i < n && i < " + Num(n_);
      } else {
        clamp = "  if (n > " + Num(n_) + ") {\n    n = " + Num(n_) + ";\n  }\n";
      }
    } else if (in_cond) {
      cond = "i < n && i <= " + Num(n_);
    }
    Slot s;
    s.source = "func " + f + "(dst, src, n) {\n  var i = 0;\n" + clamp +
               "  while (" + cond + ") {\n    dst[i] = src[i] + " + Num(k) + ";" +
               Flag(vuln) + "\n    i = i + 1;\n  }\n  return i;\n}\n";
    s.call = "var " + result + " = " + f + "(buf, aux, " + arg + ");";
    s.trap_values = {n_ + 1, n_ + 3, 2 * n_};
    s.vuln = vuln;
    return s;
  }

  Slot CheckedStore(bool vuln, const std::string& arg, const std::string& result) {
    const std::string f = Name("store");
    std::string body;
    const std::string store = "tab[idx] = val;" + Flag(vuln);
    if (rng_.Bernoulli(0.5)) {
      const std::string cond =
          vuln ? "idx >= 0" : "idx >= 0 && idx < " + Num(n_);
      body = "  if (" + cond + ") {\n    " + store + "\n  }\n  return 0;\n";
    } else {
      const std::string upper = vuln ? "idx > " + Num(n_) : "idx >= " + Num(n_);
      body = "  if (idx < 0 || " + upper + ") {\n    return -1;\n  }\n  " + store +
             "\n  return 1;\n";
    }
    Slot s;
    s.source = "func " + f + "(tab, idx, val) {\n" + body + "}\n";
    s.call = "var " + result + " = " + f + "(buf, " + arg + ", " +
             Num(rng_.Range(1, 50)) + ");";
    s.trap_values = {n_, n_ + 2};
    s.vuln = vuln;
    return s;
  }

  Slot Report(bool vuln, const std::string& arg, const std::string& result) {
    const std::string f = Name("report");
    const std::string title = rng_.Bernoulli(0.5) ? "report" : "entry";
    std::string check = "  if (pos < 0) {\n    return 0;\n  }\n";
    if (!vuln) {
      check += "  if (pos >= " + Num(n_) + ") {\n    output(\"overflow\");\n    return 0;\n  }\n";
    } else if (rng_.Bernoulli(0.5)) {
      check += "  if (pos > " + Num(n_) + ") {\n    output(\"overflow\");\n    return 0;\n  }\n";
    }
    Slot s;
    s.source = "func " + f + "(tab, k) {\n  var pos = k + " + Num(rng_.Range(1, 2)) + ";\n  output(\"" + title +
               "\");\n" + check + "  output(tab[pos]);" + Flag(vuln) +
               "\n  return pos;\n}\n";
    s.call = "var " + result + " = " + f + "(aux, " + arg + ");";
    s.trap_values = {n_ - 2, n_ - 1, n_};
    s.vuln = vuln;
    return s;
  }

  Slot CallChain(bool vuln, const std::string& arg, const std::string& result) {
    const std::string get = Name("get");
    const std::string sum = Name("sum");
    const std::string guard =
        vuln ? "j < 0" : "j < 0 || j >= " + Num(n_);
    Slot s;
    s.source = "func " + get + "(tab, j) {\n  if (" + guard +
               ") {\n    return 0;\n  }\n  return tab[j];" + Flag(vuln) + "\n}\n\n" +
               "func " + sum + "(tab, hi) {\n  var s = 0;\n  var j = 0;\n  while (j < hi) {\n"
               "    s = s + " + get + "(tab, j);\n    j = j + 1;\n  }\n  return s;\n}\n";
    s.call = "var " + result + " = " + sum + "(buf, " + arg + ");";
    s.trap_values = {n_ + 1, n_ + 4};
    s.vuln = vuln;
    return s;
  }

  Slot FillLoop(bool vuln, const std::string& arg, const std::string& result) {
    const std::string f = Name("fill");
    const int64_t start = rng_.Range(0, 2);
    std::string clamp;
    if (!vuln) {
      clamp = "  if (end > " + Num(n_) + ") {\n    end = " + Num(n_) + ";\n  }\n";
    } else if (rng_.Bernoulli(0.5)) {
      clamp = "  if (end > " + Num(n_ + 1) + ") {\n    end = " + Num(n_ + 1) + ";\n  }\n";
    }
    Slot s;
    s.source = "func " + f + "(tab, start, count) {\n  var end = start + count;\n" + clamp +
               "  var i = 0;\n  for (i = start; i < end; i = i + 1) {\n    tab[i] = i * " +
               Num(rng_.Range(1, 7)) + ";" + Flag(vuln) + "\n  }\n  return end;\n}\n";
    s.call = "var " + result + " = " + f + "(buf, " + Num(start) + ", " + arg + ");";
    s.trap_values = {n_, n_ + 2};
    s.vuln = vuln;
    return s;
  }

  Rng& rng_;
  int64_t n_;
  std::set<std::string> used_;
};

struct Generated {
  Ast ast;
  std::vector<Slot> slots;
};

Generated GenerateProgram(Rng& rng, int helpers, bool vulnerable) {
  static constexpr int64_t kLengths[] = {8, 10, 16};
  const int64_t n = kLengths[rng.Below(3)];
  TemplateBuilder builder(rng, n);

  std::vector<bool> vuln(static_cast<size_t>(helpers), false);
  if (vulnerable) {
    bool any = false;
    for (size_t i = 0; i < vuln.size(); ++i) any |= (vuln[i] = rng.Bernoulli(0.6));
    if (!any) vuln[rng.Below(vuln.size())] = true;
  }

  Generated g;
  std::string defs;
  std::string main = "func main() {\n  var buf[" + Num(n) + "];\n  var aux[" + Num(n) + "];\n";
  std::string results;
  for (int h = 0; h < helpers; ++h) {
    const std::string arg = "x" + Num(h + 1);
    const std::string result = "r" + Num(h + 1);
    Slot slot = builder.Make(static_cast<int>(rng.Below(TemplateBuilder::kKinds)),
                             vuln[static_cast<size_t>(h)], arg, result);
    defs += slot.source + "\n";
    main += "  var " + arg + " = input();\n  " + slot.call + "\n";
    results += (results.empty() ? "" : " + ") + result;
    g.slots.push_back(std::move(slot));
  }
  if (rng.Bernoulli(0.5)) {
    main += "  var total = " + results + ";\n  output(total);\n";
  } else {
    main += "  output(" + results + ");\n";
  }
  main += "  output(\"done\");\n}\n";
  g.ast = Parse(defs + main);
  return g;
}

std::vector<int64_t> SlotInputs(size_t slots, size_t slot, int64_t value) {
  std::vector<int64_t> in(slots, 1);
  in[slot] = value;
  return in;
}

std::string ProgramId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%04d", index);
  return buf;
}

// Finds, for each vulnerable slot, an input vector trapping at a flagged line.
std::vector<Witness> FindWitnesses(const Generated& g) {
  const std::set<LineId> flagged = FlaggedLines(g.ast);
  const ExecResult benign = Interpret(g.ast, "main", SlotInputs(g.slots.size(), 0, 1), kCorpusFuel);
  if (benign.status != ExecStatus::kCompleted) {
    throw std::logic_error("generator: benign inputs do not complete\n" + PrettyPrint(g.ast));
  }
  std::vector<Witness> out;
  for (size_t i = 0; i < g.slots.size(); ++i) {
    const Slot& slot = g.slots[i];
    bool found = false;
    for (int64_t v : slot.trap_values) {
      auto in = SlotInputs(g.slots.size(), i, v);
      ExecResult r = Interpret(g.ast, "main", in, kCorpusFuel);
      const bool trapped = r.status == ExecStatus::kRuntimeError &&
                           flagged.count(r.trap_line);
      if (slot.vuln && trapped && !found) {
        out.push_back({r.trap_line, std::move(in)});
        found = true;
      }
      if (!slot.vuln && r.status != ExecStatus::kCompleted) {
        throw std::logic_error("generator: safe slot traps\n" + PrettyPrint(g.ast));
      }
    }
    if (slot.vuln && !found) {
      throw std::logic_error("generator: no witness for slot\n" + PrettyPrint(g.ast));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Witness& a, const Witness& b) { return a.line < b.line; });
  return out;
}

[[noreturn]] void Malformed(int line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord,
              "malformed record at line " + std::to_string(line) + ": " + what);
}

}  // namespace

const char* SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

bool Program::vulnerable() const {
  return std::any_of(labels.begin(), labels.end(),
                     [](const auto& l) { return l.second; });
}

bool operator==(const Program& a, const Program& b) {
  return a.id == b.id && a.split == b.split && a.provenance == b.provenance &&
         a.labels == b.labels && a.witnesses == b.witnesses &&
         DumpAst(a.ast) == DumpAst(b.ast);
}

const Program* Corpus::Find(const std::string& id) const {
  for (const auto& p : programs) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::vector<Program> Corpus::Select(Split split) const {
  std::vector<Program> out;
  for (const auto& p : programs) {
    if (p.split == split) out.push_back(p);
  }
  return out;
}

size_t Corpus::CountOriginal() const {
  return static_cast<size_t>(std::count_if(
      programs.begin(), programs.end(),
      [](const Program& p) { return p.provenance.original(); }));
}

bool operator==(const Corpus& a, const Corpus& b) { return a.programs == b.programs; }

Split SplitForId(const std::string& id) {
  return Fnv1a64(id) % 5 == 0 ? Split::kTest : Split::kTrain;
}

std::vector<std::pair<std::string, bool>> FlagLabels(const Ast& ast) {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& fn : ast.functions) {
    bool vuln = false;
    ForEachStmt(fn.body, [&](const Stmt& s) { vuln = vuln || s.vuln; });
    out.emplace_back(fn.name, vuln);
  }
  return out;
}

Corpus GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.count < 2 || !(spec.vuln_fraction > 0.0 && spec.vuln_fraction < 1.0) ||
      spec.min_helpers < 2 || spec.max_helpers < spec.min_helpers) {
    throw Error(ErrorCode::kPrecondition,
                "invalid corpus spec: need count >= 2, 0 < vuln-fraction < 1, "
                "2 <= min-helpers <= max-helpers");
  }
  const int vulnerable =
      static_cast<int>(std::lround(spec.count * spec.vuln_fraction));
  std::vector<bool> is_vuln(static_cast<size_t>(spec.count), false);
  for (int i = 0; i < vulnerable; ++i) is_vuln[static_cast<size_t>(i)] = true;
  Rng order(DeriveSeed(spec.seed, "labels"));
  order.Shuffle(is_vuln);

  Corpus corpus;
  for (int i = 0; i < spec.count; ++i) {
    Rng rng(DeriveSeed(spec.seed, static_cast<uint64_t>(i)));
    const int helpers = static_cast<int>(rng.Range(spec.min_helpers, spec.max_helpers));
    Generated g = GenerateProgram(rng, helpers, is_vuln[static_cast<size_t>(i)]);
    Program p;
    p.id = ProgramId(i + 1);
    p.split = SplitForId(p.id);
    p.witnesses = FindWitnesses(g);
    p.labels = FlagLabels(g.ast);
    p.ast = std::move(g.ast);
    corpus.programs.push_back(std::move(p));
  }
  return corpus;
}

Program DeriveVariant(const Program& parent, TransformKind kind, uint64_t seed) {
  TransformResult r = ApplyTransform(parent.ast, kind, seed);
  Program p;
  p.id = parent.id + "+ct" + std::to_string(static_cast<int>(kind));
  p.split = parent.split;
  p.provenance = {parent.id, kind, seed};

  std::set<LineId> images;
  for (LineId line : FlaggedLines(parent.ast)) {
    const auto& img = r.line_map.at(line);
    images.insert(img.begin(), img.end());
  }
  for (const auto& fn : r.ast.functions) {
    bool vuln = false;
    ForEachStmt(fn.body, [&](const Stmt& s) { vuln = vuln || images.count(s.line); });
    p.labels.emplace_back(fn.name, vuln);
  }
  for (const auto& w : parent.witnesses) {
    ExecResult run = Interpret(r.ast, "main", w.inputs,
                               kCorpusFuel * kTransformFuelMultiplier);
    const auto& img = r.line_map.at(w.line);
    if (run.status != ExecStatus::kRuntimeError || !img.count(run.trap_line)) {
      throw std::logic_error("witness for line " + std::to_string(w.line) + " of " +
                             parent.id + " lost under " + TransformLabel(kind));
    }
    p.witnesses.push_back({run.trap_line, w.inputs});
  }
  p.ast = std::move(r.ast);
  return p;
}

Corpus Augment(const Corpus& corpus, const TransformSet& kinds, uint64_t seed,
               Split split, AugmentStats* stats) {
  Corpus out;
  for (const auto& p : corpus.programs) {
    if (p.split != split) {
      throw Error(ErrorCode::kPrecondition,
                  "program " + p.id + " is not in the " + SplitName(split) + " split");
    }
    out.programs.push_back(p);
  }
  for (const auto& p : corpus.programs) {
    if (!p.provenance.original()) continue;
    for (TransformKind kind : kinds.kinds()) {
      if (!IsApplicable(p.ast, kind)) {
        if (stats) ++stats->skipped[kind];
        continue;
      }
      const std::string tag = p.id + "+" + TransformLabel(kind);
      out.programs.push_back(DeriveVariant(p, kind, DeriveSeed(seed, tag)));
      if (stats) ++stats->applied[kind];
    }
  }
  return out;
}

Corpus AugmentTrain(const Corpus& train, const TransformSet& md, uint64_t seed,
                    AugmentStats* stats) {
  return Augment(train, md, seed, Split::kTrain, stats);
}

Corpus BuildTargets(const Corpus& test, const TransformSet& ma, uint64_t seed,
                    AugmentStats* stats) {
  return Augment(test, ma, seed, Split::kTest, stats);
}

std::string SerializeProgram(const Program& p) {
  json provenance = "original";
  if (!p.provenance.original()) {
    provenance = json::array({TransformLabel(p.provenance.kind), p.provenance.parent,
                              p.provenance.seed});
  }
  json labels = json::array();
  for (const auto& [name, vuln] : p.labels) labels.push_back({name, vuln ? 1 : 0});
  json witnesses = json::array();
  for (const auto& w : p.witnesses) witnesses.push_back({w.line, w.inputs});
  json record = json::array({kCorpusVersion, p.id, SplitName(p.split), provenance,
                             PrettyPrint(p.ast), labels, witnesses});
  return record.dump();
}

Program DeserializeProgram(const std::string& text, int line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::exception& e) {
    Malformed(line, e.what());
  }
  if (!record.is_array() || record.size() != 7) Malformed(line, "expected 7 fields");
  if (!record[0].is_number_integer()) Malformed(line, "version is not an integer");
  if (record[0].get<int>() != kCorpusVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "corpus record at line " + std::to_string(line) + " has version " +
                    record[0].dump() + ", expected " + std::to_string(kCorpusVersion));
  }
  Program p;
  try {
    p.id = record[1].get<std::string>();
    const std::string split = record[2].get<std::string>();
    if (split != "train" && split != "test") Malformed(line, "bad split " + split);
    p.split = split == "train" ? Split::kTrain : Split::kTest;
    const json& prov = record[3];
    if (!(prov.is_string() && prov.get<std::string>() == "original")) {
      if (!prov.is_array() || prov.size() != 3) Malformed(line, "bad provenance");
      auto kind = ParseTransformKind(prov[0].get<std::string>());
      if (!kind) Malformed(line, "bad transform kind");
      p.provenance = {prov[1].get<std::string>(), *kind, prov[2].get<uint64_t>()};
      if (p.provenance.parent.empty()) Malformed(line, "empty parent id");
    }
    p.ast = Parse(record[4].get<std::string>());
    for (const auto& l : record[5]) {
      p.labels.emplace_back(l.at(0).get<std::string>(), l.at(1).get<int>() != 0);
    }
    for (const auto& w : record[6]) {
      p.witnesses.push_back({w.at(0).get<LineId>(), w.at(1).get<std::vector<int64_t>>()});
    }
  } catch (const json::exception& e) {
    Malformed(line, e.what());
  } catch (const SyntaxError& e) {
    Malformed(line, std::string("source does not parse: ") + e.what());
  }
  if (p.labels != FlagLabels(p.ast)) Malformed(line, "labels disagree with source flags");
  return p;
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  for (const auto& p : corpus.programs) out << SerializeProgram(p) << '\n';
  if (!out) throw Error(ErrorCode::kUsage, "write failed for " + path);
}

Corpus LoadCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + path);
  Corpus corpus;
  std::set<std::string> ids;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    Program p = DeserializeProgram(text, line);
    if (!ids.insert(p.id).second) Malformed(line, "duplicate id " + p.id);
    if (!p.provenance.original() && !ids.count(p.provenance.parent)) {
      Malformed(line, "parent " + p.provenance.parent + " not found");
    }
    corpus.programs.push_back(std::move(p));
  }
  return corpus;
}

}  // namespace zz

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

#include "zz/eval.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "zz/common.h"
#include "zz/embed.h"
#include "zz/transform.h"

namespace zz {
namespace {

using nlohmann::ordered_json;

std::optional<double> Ratio(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Percent(const std::optional<double>& v) {
  if (!v) return "undef";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *v * 100.0);
  return buf;
}

ordered_json OptJson(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string Pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

void Confusion::Add(int predicted, int label) {
  if (predicted) {
    ++(label ? tp : fp);
  } else {
    ++(label ? fn : tn);
  }
}

Confusion& Confusion::operator+=(const Confusion& other) {
  tp += other.tp;
  fp += other.fp;
  tn += other.tn;
  fn += other.fn;
  return *this;
}

Metrics ComputeMetrics(const Confusion& c) {
  if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
    throw Error(ErrorCode::kPrecondition, "negative confusion count");
  }
  Metrics m;
  m.fpr = Ratio(c.fp, c.fp + c.tn);
  m.fnr = Ratio(c.fn, c.tp + c.fn);
  m.precision = Ratio(c.tp, c.tp + c.fp);
  if (c.tp == 0 && c.fn > 0) {
    m.f1 = 0.0;
  } else if (m.precision && m.fnr) {
    // Same value as 2P(1-FNR)/(P+1-FNR), without the intermediate rounding.
    m.f1 = static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  return m;
}

const ReportRow* EvalReport::Find(const std::string& key) const {
  for (const auto& r : rows) {
    if (r.key == key) return &r;
  }
  return nullptr;
}

std::string EvalReport::ToText() const {
  std::ostringstream out;
  out << "detector: " << detector << "\ncorpus: " << corpus << "\n";
  out << Pad("row", 12) << Pad("n", 7) << Pad("FPR%", 8) << Pad("FNR%", 8) << Pad("F1%", 8)
      << "\n";
  for (const auto& r : rows) {
    out << Pad(r.key, 12) << Pad(std::to_string(r.confusion.total()), 7)
        << Pad(Percent(r.metrics.fpr), 8) << Pad(Percent(r.metrics.fnr), 8)
        << Pad(Percent(r.metrics.f1), 8) << "\n";
  }
  for (const auto& n : notes) out << "note: " << n << "\n";
  return out.str();
}

std::string EvalReport::ToJsonl() const {
  std::string out;
  out += ordered_json{{"detector", detector}, {"corpus", corpus}}.dump() + "\n";
  for (const auto& r : rows) {
    ordered_json j{{"row", r.key},
                   {"tp", r.confusion.tp},
                   {"fp", r.confusion.fp},
                   {"tn", r.confusion.tn},
                   {"fn", r.confusion.fn},
                   {"fpr", OptJson(r.metrics.fpr)},
                   {"fnr", OptJson(r.metrics.fnr)},
                   {"precision", OptJson(r.metrics.precision)},
                   {"f1", OptJson(r.metrics.f1)}};
    out += j.dump() + "\n";
  }
  for (const auto& n : notes) out += ordered_json{{"note", n}}.dump() + "\n";
  return out;
}

std::string CorpusId(const Corpus& corpus) {
  uint64_t h = Fnv1a64("corpus");
  for (const auto& p : corpus.programs) {
    h = SplitMix64(h ^ Fnv1a64(SerializeProgram(p)));
  }
  return HexDigest(h);
}

EvalReport EvaluateVerdicts(const Corpus& corpus, Granularity granularity,
                            const FragmentVerdict& predict, const std::string& detector) {
  EvalReport report;
  report.detector = detector;
  report.corpus = CorpusId(corpus);

  // Function verdicts, keyed by (program, function).
  std::map<std::pair<std::string, std::string>, int> verdict;
  for (const Fragment& frag : ExtractFragments(corpus, granularity)) {
    int& v = verdict[{frag.program_id, frag.function}];
    v = v || predict(frag);
  }

  std::map<std::string, Confusion> groups;
  Confusion manipulated;
  Confusion total;
  for (const Program& p : corpus.programs) {
    Confusion c;
    for (const auto& [fn, vulnerable] : p.labels) {
      auto it = verdict.find({p.id, fn});
      c.Add(it == verdict.end() ? 0 : it->second, vulnerable ? 1 : 0);
    }
    const std::string key =
        p.provenance.original() ? "n/a" : TransformLabel(p.provenance.kind);
    groups[key] += c;
    if (!p.provenance.original()) manipulated += c;
    total += c;
  }

  std::vector<std::pair<std::string, Confusion>> ordered;
  ordered.push_back({"n/a", groups["n/a"]});
  for (TransformKind k : kAllTransforms) {
    ordered.push_back({TransformLabel(k), groups[TransformLabel(k)]});
  }
  ordered.push_back({"manipulated", manipulated});
  ordered.push_back({"Total", total});
  for (const auto& [key, c] : ordered) {
    if (c.total() == 0) {
      report.notes.push_back("row " + key + " omitted: no examples");
      continue;
    }
    report.rows.push_back({key, c, ComputeMetrics(c)});
  }
  return report;
}

EvalReport Evaluate(const ModelBundle& bundle, const Corpus& corpus, Granularity granularity,
                    const std::string& detector) {
  auto predict = [&](const Fragment& f) {
    return Predict(bundle, Encode(f, bundle.vocab, bundle.length).ids).label;
  };
  return EvaluateVerdicts(corpus, granularity, predict,
                          detector.empty() ? TrainModeName(bundle.mode) : detector);
}

Comparison Compare(const EvalReport& original, const EvalReport& conventional,
                   const EvalReport& zigzag, const std::string& row) {
  if (original.corpus != conventional.corpus || original.corpus != zigzag.corpus) {
    throw Error(ErrorCode::kCorpusMismatch,
                "reports cover different corpora: " + original.corpus + ", " +
                    conventional.corpus + ", " + zigzag.corpus);
  }
  const EvalReport* reports[3] = {&original, &conventional, &zigzag};
  const char* names[3] = {"D", "D'", "D+"};
  double f1[3];
  std::ostringstream table;
  table << "row: " << row << "\n"
        << Pad("detector", 10) << Pad("FPR%", 8) << Pad("FNR%", 8) << Pad("F1%", 8) << "\n";
  for (int i = 0; i < 3; ++i) {
    const ReportRow* r = reports[i]->Find(row);
    if (!r) throw Error(ErrorCode::kPrecondition, "report lacks row " + row);
    if (!r->metrics.f1) throw Error(ErrorCode::kPrecondition, "F1 undefined in row " + row);
    f1[i] = *r->metrics.f1;
    table << Pad(names[i], 10) << Pad(Percent(r->metrics.fpr), 8) << Pad(Percent(r->metrics.fnr), 8)
          << Pad(Percent(r->metrics.f1), 8) << "\n";
  }
  Comparison c;
  c.delta_conventional = f1[1] - f1[0];
  c.delta_zigzag = f1[2] - f1[1];
  c.ordering_holds = f1[2] >= f1[1] && f1[1] >= f1[0];
  table << "F1(D') - F1(D):  " << Percent(c.delta_conventional) << "\n"
        << "F1(D+) - F1(D'): " << Percent(c.delta_zigzag) << "\n"
        << "ordering F1(D+) >= F1(D') >= F1(D): " << (c.ordering_holds ? "satisfied" : "violated")
        << "\n";
  c.table = table.str();
  return c;
}

void SaveReport(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  out << report.ToJsonl();
}

EvalReport LoadReport(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + path);
  EvalReport report;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      const auto j = ordered_json::parse(text);
      if (line == 1) {
        report.detector = j.at("detector").get<std::string>();
        report.corpus = j.at("corpus").get<std::string>();
      } else if (j.contains("note")) {
        report.notes.push_back(j.at("note").get<std::string>());
      } else {
        ReportRow r;
        r.key = j.at("row").get<std::string>();
        r.confusion.tp = j.at("tp").get<int64_t>();
        r.confusion.fp = j.at("fp").get<int64_t>();
        r.confusion.tn = j.at("tn").get<int64_t>();
        r.confusion.fn = j.at("fn").get<int64_t>();
        r.metrics = ComputeMetrics(r.confusion);
        report.rows.push_back(r);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "report line " + std::to_string(line) + ": " + e.what());
    }
  }
  if (line == 0) throw Error(ErrorCode::kMalformedRecord, "empty report " + path);
  return report;
}

}  // namespace zz

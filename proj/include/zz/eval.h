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

#ifndef ZZ_EVAL_H_
#define ZZ_EVAL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zz/corpus.h"
#include "zz/fragment.h"
#include "zz/nn.h"

namespace zz {

struct Confusion {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  void Add(int predicted, int label);
  int64_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& other);
  bool operator==(const Confusion& other) const = default;
};

// Unset fields are undefined (zero denominator).
struct Metrics {
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> precision;
  std::optional<double> f1;
};

// FPR = FP/(FP+TN), FNR = FN/(TP+FN), P = TP/(TP+FP),
// F1 = 2P(1-FNR)/(P+(1-FNR)); F1 is 0 when TP = 0 and FN > 0.
Metrics ComputeMetrics(const Confusion& c);

struct ReportRow {
  std::string key;
  Confusion confusion;
  Metrics metrics;
};

// Row keys: "n/a" (original programs), "CT-1".."CT-8", "manipulated" (all
// transformed programs) and "Total" (every program). Empty groups are
// omitted and listed in `notes`.
struct EvalReport {
  std::string detector;
  std::string corpus;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  const ReportRow* Find(const std::string& key) const;
  std::string ToText() const;
  std::string ToJsonl() const;
};

// Identifies a corpus by its program ids.
std::string CorpusId(const Corpus& corpus);

// Verdict (0 or 1) for one fragment.
using FragmentVerdict = std::function<int(const Fragment&)>;

// Function-level verdicts: function fragments directly, or for slice models
// positive iff any slice of the function is positive. Functions without
// fragments count as negative.
EvalReport EvaluateVerdicts(const Corpus& corpus, Granularity granularity,
                            const FragmentVerdict& verdict, const std::string& detector);
EvalReport Evaluate(const ModelBundle& bundle, const Corpus& corpus, Granularity granularity,
                    const std::string& detector = "");

struct Comparison {
  std::string table;
  double delta_conventional = 0.0;  // F1(D') - F1(D)
  double delta_zigzag = 0.0;        // F1(D+) - F1(D')
  bool ordering_holds = false;      // F1(D+) >= F1(D') >= F1(D)
};

// Compares the "manipulated" rows. Throws Error(kCorpusMismatch) unless all
// three reports share a corpus id.
Comparison Compare(const EvalReport& original, const EvalReport& conventional,
                   const EvalReport& zigzag, const std::string& row = "manipulated");

EvalReport LoadReport(const std::string& path);
void SaveReport(const EvalReport& report, const std::string& path);

}  // namespace zz

#endif  // ZZ_EVAL_H_

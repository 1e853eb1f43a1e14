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

#ifndef ZZ_CORPUS_H_
#define ZZ_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zz/ast.h"
#include "zz/transform.h"

namespace zz {

enum class Split { kTrain, kTest };

const char* SplitName(Split split);

struct Provenance {
  // Empty parent means an original program.
  std::string parent;
  TransformKind kind = TransformKind::kEncodeStrings;
  uint64_t seed = 0;

  bool original() const { return parent.empty(); }
  bool operator==(const Provenance& other) const = default;
};

// An input vector that drives the program into a trap at `line`.
struct Witness {
  LineId line = kNoLine;
  std::vector<int64_t> inputs;

  bool operator==(const Witness& other) const = default;
};

struct Program {
  std::string id;
  Split split = Split::kTrain;
  Provenance provenance;
  Ast ast;
  // Function name to vulnerable flag, in function order.
  std::vector<std::pair<std::string, bool>> labels;
  std::vector<Witness> witnesses;

  bool vulnerable() const;
};

bool operator==(const Program& a, const Program& b);

struct Corpus {
  std::vector<Program> programs;

  const Program* Find(const std::string& id) const;
  std::vector<Program> Select(Split split) const;
  size_t CountOriginal() const;
};

bool operator==(const Corpus& a, const Corpus& b);

struct SyntheticSpec {
  int count = 200;
  double vuln_fraction = 0.5;
  // Helper functions per program, inclusive.
  int min_helpers = 2;
  int max_helpers = 4;
  uint64_t seed = 1;
};

// Base interpreter fuel for corpus programs. Transformed programs get
// kTransformFuelMultiplier times as much.
constexpr int64_t kCorpusFuel = 20000;
constexpr int64_t kTransformFuelMultiplier = 4;

Corpus GenerateSynthetic(const SyntheticSpec& spec);

// Train/test assignment from the program id.
Split SplitForId(const std::string& id);

// Labels recomputed from the statement flags of `ast`.
std::vector<std::pair<std::string, bool>> FlagLabels(const Ast& ast);

struct AugmentStats {
  std::map<TransformKind, int> applied;
  std::map<TransformKind, int> skipped;
};

// Adds one variant per (original program, applicable kind). Programs must
// carry `split`; throws Error(kPrecondition) otherwise.
Corpus Augment(const Corpus& corpus, const TransformSet& kinds, uint64_t seed,
               Split split, AugmentStats* stats = nullptr);

// Adds M_D variants of the training originals.
Corpus AugmentTrain(const Corpus& train, const TransformSet& md, uint64_t seed,
                    AugmentStats* stats = nullptr);
// Q+ from the test split; the attacker set defaults to all eight kinds.
Corpus BuildTargets(const Corpus& test,
                    const TransformSet& ma = TransformSet::All(),
                    uint64_t seed = 0, AugmentStats* stats = nullptr);

// Derives one transformed program, transporting labels and witnesses.
Program DeriveVariant(const Program& parent, TransformKind kind, uint64_t seed);

constexpr int kCorpusVersion = 1;

std::string SerializeProgram(const Program& program);
Program DeserializeProgram(const std::string& record, int line_number);

void SaveCorpus(const Corpus& corpus, const std::string& path);
Corpus LoadCorpus(const std::string& path);

}  // namespace zz

#endif  // ZZ_CORPUS_H_

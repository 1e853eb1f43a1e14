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

#ifndef ZZ_FRAGMENT_H_
#define ZZ_FRAGMENT_H_

#include <set>
#include <string>
#include <vector>

#include "zz/ast.h"
#include "zz/corpus.h"

namespace zz {

enum class Granularity { kFunction, kSlice };

const char* GranularityName(Granularity g);

// X holds fragments of original programs, X' those of transformed ones.
enum class Population { kX, kXPrime };

const char* PopulationName(Population p);

struct Fragment {
  std::string id;
  std::string program_id;
  std::string function;
  Granularity granularity = Granularity::kFunction;
  Split split = Split::kTrain;
  Population population = Population::kX;
  std::vector<std::string> tokens;
  int label = 0;
  std::set<LineId> origin_lines;
};

struct SliceOptions {
  bool index_reads = true;
  bool index_writes = true;
  // Calls to these functions are criteria as well.
  std::set<std::string> risky_calls;
};

std::vector<Fragment> ExtractFunctions(const Program& program);
std::vector<Fragment> ExtractSlices(const Program& program,
                                    const SliceOptions& options = {});

// Lines of `fn` in the backward data-dependence closure of `criterion`.
std::set<LineId> BackwardSlice(const FunctionDef& fn, LineId criterion);

// All fragments of a corpus, ordered by (program id, first origin line).
std::vector<Fragment> ExtractFragments(const Corpus& corpus, Granularity g,
                                       const SliceOptions& options = {});

}  // namespace zz

#endif  // ZZ_FRAGMENT_H_

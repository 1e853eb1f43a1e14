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

#ifndef ZZ_EXPERIMENT_H_
#define ZZ_EXPERIMENT_H_

#include <cstdint>
#include <string>

#include "zz/corpus.h"
#include "zz/embed.h"
#include "zz/eval.h"
#include "zz/fragment.h"
#include "zz/nn.h"
#include "zz/transform.h"
#include "zz/zigzag.h"

namespace zz {

// One end-to-end run: generate, augment, target, train, evaluate.
struct ExperimentConfig {
  SyntheticSpec corpus;
  TransformSet md = TransformSet::Named(1);
  TransformSet ma = TransformSet::All();
  Granularity granularity = Granularity::kFunction;
  int vocab_size = 256;
  TrainConfig train;
};

struct Datasets {
  Corpus train;    // originals plus their M_D variants
  Corpus targets;  // test originals plus their M_A variants
  Examples x;
  Examples x_prime;
  Vocab vocab;
  int length = kFunctionLength;
};

int SequenceLength(Granularity g);

// Splits a generated corpus and derives both augmented corpora. The seeds of
// augmentation and targeting are derived from `seed`.
void BuildCorpora(const Corpus& corpus, const TransformSet& md, const TransformSet& ma,
                  uint64_t seed, Corpus* train, Corpus* targets);

// Encodes the training corpus. The vocabulary comes from X alone when
// `x_only`, otherwise from X and X'.
Datasets EncodeTraining(const Corpus& train, Granularity g, int vocab_size, bool x_only);

ModelBundle TrainDetector(TrainMode mode, const Datasets& data, const TrainConfig& config,
                          TrainTrace* trace = nullptr);

struct DetectorRun {
  ModelBundle bundle;
  EvalReport report;
  TrainTrace trace;
};

// Trains and evaluates one detector on the corpus described by `config`.
DetectorRun RunDetector(TrainMode mode, const ExperimentConfig& config);

}  // namespace zz

#endif  // ZZ_EXPERIMENT_H_

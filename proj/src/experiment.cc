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

#include "zz/experiment.h"

#include "zz/common.h"

namespace zz {

int SequenceLength(Granularity g) {
  return g == Granularity::kFunction ? kFunctionLength : kSliceLength;
}

void BuildCorpora(const Corpus& corpus, const TransformSet& md, const TransformSet& ma,
                  uint64_t seed, Corpus* train, Corpus* targets) {
  Corpus train_part;
  Corpus test_part;
  for (const Program& p : corpus.programs) {
    if (!p.provenance.original()) {
      throw Error(ErrorCode::kPrecondition, "expected original programs only: " + p.id);
    }
    (p.split == Split::kTrain ? train_part : test_part).programs.push_back(p);
  }
  if (train) *train = AugmentTrain(train_part, md, DeriveSeed(seed, "augment"));
  if (targets) *targets = BuildTargets(test_part, ma, DeriveSeed(seed, "targets"));
}

Datasets EncodeTraining(const Corpus& train, Granularity g, int vocab_size, bool x_only) {
  Datasets d;
  d.train = train;
  d.length = SequenceLength(g);
  const std::vector<Fragment> fragments = ExtractFragments(train, g);
  std::vector<Fragment> vocab_source;
  for (const Fragment& f : fragments) {
    if (!x_only || f.population == Population::kX) vocab_source.push_back(f);
  }
  d.vocab = BuildVocab(vocab_source, vocab_size);
  for (const Fragment& f : fragments) {
    (f.population == Population::kX ? d.x : d.x_prime).push_back(Encode(f, d.vocab, d.length));
  }
  return d;
}

ModelBundle TrainDetector(TrainMode mode, const Datasets& data, const TrainConfig& config,
                          TrainTrace* trace) {
  switch (mode) {
    case TrainMode::kOriginal:
      return TrainOriginal(data.x, data.vocab, data.length, config, trace);
    case TrainMode::kConventional:
      return TrainConventional(data.x, data.x_prime, data.vocab, data.length, config, trace);
    case TrainMode::kZigzag:
      return TrainZigzag(data.x, data.x_prime, data.vocab, data.length, config, trace);
  }
  throw Error(ErrorCode::kPrecondition, "unknown training mode");
}

DetectorRun RunDetector(TrainMode mode, const ExperimentConfig& config) {
  const Corpus corpus = GenerateSynthetic(config.corpus);
  Corpus train;
  Corpus targets;
  const TransformSet md = mode == TrainMode::kOriginal ? TransformSet() : config.md;
  BuildCorpora(corpus, md, config.ma, config.corpus.seed, &train, &targets);
  const Datasets data =
      EncodeTraining(train, config.granularity, config.vocab_size, mode == TrainMode::kOriginal);
  DetectorRun run;
  run.bundle = TrainDetector(mode, data, config.train, &run.trace);
  run.report = Evaluate(run.bundle, targets, config.granularity, TrainModeName(mode));
  return run;
}

}  // namespace zz

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

#ifndef ZZ_ZIGZAG_H_
#define ZZ_ZIGZAG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "zz/embed.h"
#include "zz/nn.h"

namespace zz {

struct TrainConfig {
  double delta = 0.4;
  int beta = 8;
  // Epochs of joint pretraining, of each classifier phase and of each
  // feature phase.
  int e1 = 20;
  int e2 = 2;
  int e3 = 2;
  int batch = 32;
  double lr = 0.002;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  uint64_t seed = 1;
  double tau_disc = 1e-3;
  double tau_loss = 1e-3;
  // Caps the pretraining epochs and the baselines' epochs.
  int max_epochs = 400;
  // Hard examples are mined with the current feature generator; false
  // mines with the pretrained one.
  bool mine_with_current_features = true;
  ModelConfig model;

  // Epochs a zigzag run spends in total; the baselines get the same.
  int Budget() const { return e1 + beta * (e2 + e3); }
  // Throws Error(kPrecondition) on out-of-range fields.
  void Validate() const;
};

struct TraceRecord {
  int round = 0;
  std::string phase;
  int epoch = 0;
  double l_c = 0.0;
  double l_h = 0.0;
  double mean_disc = 0.0;
  int gamma = 0;
  double val_f1 = 0.0;
};

struct TrainTrace {
  std::vector<TraceRecord> records;

  // One JSON object per line.
  std::string ToJsonl() const;
};

using Examples = std::vector<EncodedExample>;

// Indices into X' where either head's binary verdict differs from the label.
std::vector<size_t> HardExamplesFromProbs(const std::vector<double>& p1,
                                          const std::vector<double>& p2,
                                          const std::vector<int>& labels, double delta);
std::vector<size_t> MineHardExamples(const Model& model, const Examples& x_prime, double delta);

// Full-set evaluations used by the trace and the tests.
double FullCe(const Model& model, const Examples& x, int heads);
double FullDisc(const Model& model, const Examples& x, const std::vector<size_t>* subset = nullptr);

ModelBundle TrainOriginal(const Examples& x, const Vocab& vocab, int length,
                          const TrainConfig& config, TrainTrace* trace = nullptr);
ModelBundle TrainConventional(const Examples& x, const Examples& x_prime, const Vocab& vocab,
                              int length, const TrainConfig& config, TrainTrace* trace = nullptr);

// Joint pretraining of F, C1 and C2 on the summed cross entropies.
Model PretrainJoint(const Examples& x, const TrainConfig& config, TrainTrace* trace = nullptr);

// e2 epochs on L_c(X) - L_h(X''), with F frozen and X'' fixed.
void StepClassifiers(Model& model, const Examples& x, const Examples& x_prime,
                     const std::vector<size_t>& hard, const TrainConfig& config, int round,
                     TrainTrace* trace = nullptr);

// e3 epochs on the mean discrepancy over X', heads frozen.
void StepFeatures(Model& model, const Examples& x_prime, const TrainConfig& config, int round,
                  TrainTrace* trace = nullptr);

ModelBundle TrainZigzag(const Examples& x, const Examples& x_prime, const Vocab& vocab, int length,
                        const TrainConfig& config, TrainTrace* trace = nullptr);

}  // namespace zz

#endif  // ZZ_ZIGZAG_H_

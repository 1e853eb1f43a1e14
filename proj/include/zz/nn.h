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

#ifndef ZZ_NN_H_
#define ZZ_NN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "zz/embed.h"

namespace zz {

enum class EncoderKind { kMeanPool, kRecurrent };

struct ModelConfig {
  int vocab_size = 2;
  int d_e = 16;
  int d_f = 32;
  int d_h = 16;
  EncoderKind encoder = EncoderKind::kMeanPool;

  std::string ToString() const;
  bool operator==(const ModelConfig& other) const = default;
};

struct Tensor {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::string name, int rows, int cols);

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  bool operator==(const Tensor& other) const = default;
};

// A named group of tensors: a feature generator or a classifier head.
struct ParamSet {
  std::vector<Tensor> tensors;

  const Tensor& Get(const std::string& name) const;
  Tensor& Get(const std::string& name);
  size_t Count() const;
  ParamSet ZerosLike() const;
  uint64_t Hash() const;
  bool operator==(const ParamSet& other) const = default;
};

// Feature generator F: embedding, then either mean pooling over non-pad
// tokens with an affine+tanh layer, or an Elman cell whose last state is
// the feature.
ParamSet InitFeatureGen(const ModelConfig& config, uint64_t seed);
// Head C: affine+tanh to d_h units, then an affine map to one logit.
ParamSet InitHead(const ModelConfig& config, uint64_t seed);

struct Model {
  ModelConfig config;
  ParamSet f;
  ParamSet c1;
  ParamSet c2;

  bool operator==(const Model& other) const = default;
};

// C1 and C2 come from distinct derived seeds.
Model InitModel(const ModelConfig& config, uint64_t seed);

struct FeatureCache {
  std::vector<int> tokens;
  std::vector<double> pooled;                 // mean-pool input to the affine layer
  std::vector<std::vector<double>> states;    // recurrent: h_0 .. h_T
  std::vector<double> feature;
};

std::vector<double> FeatureForward(const ModelConfig& config, const ParamSet& f,
                                   const std::vector<int>& ids, FeatureCache* cache = nullptr);
void FeatureBackward(const ModelConfig& config, const ParamSet& f, const FeatureCache& cache,
                     const std::vector<double>& d_feature, ParamSet& grads);

struct HeadCache {
  std::vector<double> hidden;
  double logit = 0.0;
};

double HeadForward(const ModelConfig& config, const ParamSet& c, const std::vector<double>& feature,
                   HeadCache* cache = nullptr);
// Accumulates into `grads` and, when non-null, into `d_feature`.
void HeadBackward(const ModelConfig& config, const ParamSet& c, const std::vector<double>& feature,
                  const HeadCache& cache, double d_logit, ParamSet* grads,
                  std::vector<double>* d_feature);

double Sigmoid(double x);
double ForwardProb(const ModelConfig& config, const ParamSet& f, const ParamSet& c,
                   const std::vector<int>& ids);

// 1 iff p > delta.
int Binary(double p, double delta);

constexpr double kCeEpsilon = 1e-7;

struct LossValue {
  double value = 0.0;
  double d_logit = 0.0;
};

// Cross entropy on the clamped probability; the gradient is taken with
// respect to the logit and is zero where the clamp is active.
LossValue LossCe(double p, int y);

struct DiscValue {
  double value = 0.0;
  double d_p1 = 0.0;
  double d_p2 = 0.0;
};

// |p1 - p2| with subgradient 0 at p1 == p2.
DiscValue LossDisc(double p1, double p2);

struct Gradients {
  ParamSet f;
  ParamSet c1;
  ParamSet c2;
};

Gradients ZeroGradients(const Model& model);

using Batch = std::vector<const EncodedExample*>;

// Mean cross entropy of C1 (heads == 1) or the summed cross entropies of
// both heads (heads == 2).
double CeObjective(const Model& model, const Batch& batch, int heads, Gradients* grads);

// Mean over `x` of CE(c1) + CE(c2) minus mean over `hard` of |c1 - c2|.
// Gradients reach the heads only.
double ClassifierObjective(const Model& model, const Batch& x, const Batch& hard,
                           Gradients* grads);

// Mean over `batch` of |c1 - c2|. Gradients reach F only.
double FeatureObjective(const Model& model, const Batch& batch, Gradients* grads);

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  int64_t steps = 0;
};

// Throws Error(kNonFiniteGradient) naming the tensor on NaN or inf.
void OptimizeStep(ParamSet& params, const ParamSet& grads, OptimizerState& state,
                  const OptimizerConfig& config);

enum class TrainMode { kOriginal, kConventional, kZigzag };

const char* TrainModeName(TrainMode mode);

struct ModelBundle {
  Model model;
  Vocab vocab;
  int length = kFunctionLength;
  double delta = 0.4;
  TrainMode mode = TrainMode::kOriginal;

  // Digest of architecture, vocabulary and sequence length.
  std::string Fingerprint() const;
};

struct Prediction {
  double p = 0.0;
  int label = 0;
};

// Zigzag bundles average both heads; the baselines use C1.
Prediction Predict(const ModelBundle& bundle, const std::vector<int>& ids);

constexpr int kModelVersion = 1;

std::string SerializeModel(const ModelBundle& bundle);
ModelBundle DeserializeModel(const std::string& text);
void SaveModel(const ModelBundle& bundle, const std::string& path);
// Throws Error(kFingerprintMismatch) when `expected_fingerprint` is given
// and differs, or when the stored fingerprint does not match the contents.
ModelBundle LoadModel(const std::string& path, const std::string& expected_fingerprint = "");

}  // namespace zz

#endif  // ZZ_NN_H_

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

#include "zz/zigzag.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "zz/common.h"
#include "zz/eval.h"

namespace zz {
namespace {

Batch Pointers(const Examples& x) {
  Batch out;
  out.reserve(x.size());
  for (const auto& e : x) out.push_back(&e);
  return out;
}

void RequireBothClasses(const Examples& x, const char* what) {
  if (x.empty()) throw Error(ErrorCode::kPrecondition, std::string(what) + " is empty");
  const bool has0 = std::any_of(x.begin(), x.end(), [](const auto& e) { return e.label == 0; });
  const bool has1 = std::any_of(x.begin(), x.end(), [](const auto& e) { return e.label == 1; });
  if (!has0 || !has1) {
    throw Error(ErrorCode::kPrecondition, std::string(what) + " holds a single class");
  }
}

void RequireVocab(const Examples& x, const ModelConfig& config) {
  for (const auto& e : x) {
    for (int id : e.ids) {
      if (id < 0 || id >= config.vocab_size) {
        throw Error(ErrorCode::kShapeMismatch,
                    "token id " + std::to_string(id) + " outside the vocabulary of " +
                        e.fragment_id);
      }
    }
  }
}

void RequireFinite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kDivergence, what + " is not finite");
}

OptimizerConfig Optimizer(const TrainConfig& config) {
  OptimizerConfig o;
  o.kind = config.optimizer;
  o.lr = config.lr;
  return o;
}

Rng EpochRng(const TrainConfig& config, const std::string& phase, int round, int epoch) {
  return Rng(DeriveSeed(config.seed,
                        phase + "/" + std::to_string(round) + "/" + std::to_string(epoch)));
}

// Splits `items` into `n` contiguous chunks of near-equal size.
Batch Chunk(const Batch& items, size_t n, size_t i) {
  const size_t lo = items.size() * i / n;
  const size_t hi = items.size() * (i + 1) / n;
  return Batch(items.begin() + static_cast<std::ptrdiff_t>(lo),
               items.begin() + static_cast<std::ptrdiff_t>(hi));
}

size_t BatchCount(size_t n, int batch) {
  return std::max<size_t>(1, (n + static_cast<size_t>(batch) - 1) / static_cast<size_t>(batch));
}

double ValF1(const Model& model, const Examples& val, bool fused, double delta) {
  Confusion c;
  for (const auto& e : val) {
    const auto feature = FeatureForward(model.config, model.f, e.ids);
    double p = Sigmoid(HeadForward(model.config, model.c1, feature));
    if (fused) p = 0.5 * (p + Sigmoid(HeadForward(model.config, model.c2, feature)));
    c.Add(Binary(p, delta), e.label);
  }
  return ComputeMetrics(c).f1.value_or(0.0);
}

// Trains F and C1 (heads == 1) or F, C1 and C2 (heads == 2) on cross
// entropy. Stops after `epochs`, or earlier on a plateau when `plateau` is
// positive.
void TrainCe(Model& model, const Examples& x, const Examples& val, int heads, int epochs,
             double plateau, const TrainConfig& config, const std::string& phase,
             TrainTrace* trace) {
  const OptimizerConfig opt = Optimizer(config);
  OptimizerState sf, s1, s2;
  Batch all = Pointers(x);
  const size_t nb = BatchCount(all.size(), config.batch);
  const bool fused = heads == 2;
  double prev = FullCe(model, x, heads);
  RequireFinite(prev, phase + " loss");
  if (trace) {
    trace->records.push_back(
        {0, phase, 0, prev, 0.0, 0.0, 0, ValF1(model, val, fused, config.delta)});
  }
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    Rng rng = EpochRng(config, phase, 0, epoch);
    rng.Shuffle(all);
    for (size_t i = 0; i < nb; ++i) {
      Gradients g = ZeroGradients(model);
      CeObjective(model, Chunk(all, nb, i), heads, &g);
      OptimizeStep(model.f, g.f, sf, opt);
      OptimizeStep(model.c1, g.c1, s1, opt);
      if (heads == 2) OptimizeStep(model.c2, g.c2, s2, opt);
    }
    const double loss = FullCe(model, x, heads);
    RequireFinite(loss, phase + " loss");
    if (trace) {
      trace->records.push_back(
          {0, phase, epoch, loss, 0.0, 0.0, 0, ValF1(model, val, fused, config.delta)});
    }
    if (plateau > 0.0 && std::abs(prev - loss) <= plateau) break;
    prev = loss;
  }
}

ModelBundle TrainBaseline(const Examples& data, const Examples& val, const Vocab& vocab,
                          int length, const TrainConfig& config, TrainMode mode,
                          TrainTrace* trace) {
  config.Validate();
  RequireBothClasses(data, "training set");
  TrainConfig cfg = config;
  cfg.model.vocab_size = vocab.size();
  RequireVocab(data, cfg.model);
  ModelBundle bundle;
  bundle.model = InitModel(cfg.model, cfg.seed);
  bundle.vocab = vocab;
  bundle.length = length;
  bundle.delta = cfg.delta;
  bundle.mode = mode;
  TrainCe(bundle.model, data, val.empty() ? data : val, 1,
          std::min(cfg.Budget(), cfg.max_epochs), 0.0, cfg, "train", trace);
  return bundle;
}

void TraceZigzag(TrainTrace* trace, const Model& model, const Examples& x,
                 const Examples& x_prime, const std::vector<size_t>& hard,
                 const TrainConfig& config, int round, const char* phase, int epoch) {
  if (!trace) return;
  TraceRecord r;
  r.round = round;
  r.phase = phase;
  r.epoch = epoch;
  r.l_c = FullCe(model, x, 2);
  r.l_h = FullDisc(model, x_prime, &hard);
  r.mean_disc = FullDisc(model, x_prime);
  r.gamma = static_cast<int>(hard.size());
  r.val_f1 = ValF1(model, x_prime, true, config.delta);
  trace->records.push_back(r);
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kPrecondition, "invalid training config: " + what);
  };
  if (beta < 1) fail("beta must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (e1 < 1 || e2 < 1 || e3 < 1) fail("epochs per phase must be positive");
  if (batch < 1) fail("batch must be positive");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr must be positive");
  if (max_epochs < 1) fail("max_epochs must be positive");
  if (!(tau_disc >= 0.0) || !(tau_loss >= 0.0)) fail("tolerances must be nonnegative");
  if (model.d_e < 1 || model.d_f < 1 || model.d_h < 1) fail("layer sizes must be positive");
}

std::string TrainTrace::ToJsonl() const {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j{{"round", r.round},   {"phase", r.phase},
                             {"epoch", r.epoch},   {"L_c", r.l_c},
                             {"L_h", r.l_h},       {"mean_disc", r.mean_disc},
                             {"gamma", r.gamma},   {"val_f1", r.val_f1}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<size_t> HardExamplesFromProbs(const std::vector<double>& p1,
                                          const std::vector<double>& p2,
                                          const std::vector<int>& labels, double delta) {
  if (p1.size() != labels.size() || p2.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "prediction table sizes differ");
  }
  std::vector<size_t> hard;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (Binary(p1[i], delta) != labels[i] || Binary(p2[i], delta) != labels[i]) {
      hard.push_back(i);
    }
  }
  return hard;
}

std::vector<size_t> MineHardExamples(const Model& model, const Examples& x_prime, double delta) {
  std::vector<double> p1, p2;
  std::vector<int> labels;
  for (const auto& e : x_prime) {
    const auto feature = FeatureForward(model.config, model.f, e.ids);
    p1.push_back(Sigmoid(HeadForward(model.config, model.c1, feature)));
    p2.push_back(Sigmoid(HeadForward(model.config, model.c2, feature)));
    labels.push_back(e.label);
  }
  return HardExamplesFromProbs(p1, p2, labels, delta);
}

double FullCe(const Model& model, const Examples& x, int heads) {
  if (x.empty()) return 0.0;
  return CeObjective(model, Pointers(x), heads, nullptr);
}

double FullDisc(const Model& model, const Examples& x, const std::vector<size_t>* subset) {
  Batch b;
  if (subset) {
    for (size_t i : *subset) b.push_back(&x.at(i));
  } else {
    b = Pointers(x);
  }
  if (b.empty()) return 0.0;
  return FeatureObjective(model, b, nullptr);
}

ModelBundle TrainOriginal(const Examples& x, const Vocab& vocab, int length,
                          const TrainConfig& config, TrainTrace* trace) {
  return TrainBaseline(x, {}, vocab, length, config, TrainMode::kOriginal, trace);
}

ModelBundle TrainConventional(const Examples& x, const Examples& x_prime, const Vocab& vocab,
                              int length, const TrainConfig& config, TrainTrace* trace) {
  Examples all = x;
  all.insert(all.end(), x_prime.begin(), x_prime.end());
  return TrainBaseline(all, x_prime, vocab, length, config, TrainMode::kConventional, trace);
}

Model PretrainJoint(const Examples& x, const TrainConfig& config, TrainTrace* trace) {
  config.Validate();
  RequireBothClasses(x, "X");
  RequireVocab(x, config.model);
  Model model = InitModel(config.model, config.seed);
  TrainCe(model, x, x, 2, std::min(config.e1, config.max_epochs), config.tau_loss, config,
          "pretrain", trace);
  return model;
}

void StepClassifiers(Model& model, const Examples& x, const Examples& x_prime,
                     const std::vector<size_t>& hard, const TrainConfig& config, int round,
                     TrainTrace* trace) {
  const OptimizerConfig opt = Optimizer(config);
  OptimizerState s1, s2;
  Batch xs = Pointers(x);
  Batch hs;
  for (size_t i : hard) hs.push_back(&x_prime.at(i));
  const size_t nb = BatchCount(xs.size() + hs.size(), config.batch);
  TraceZigzag(trace, model, x, x_prime, hard, config, round, "classifiers", 0);
  for (int epoch = 1; epoch <= config.e2; ++epoch) {
    Rng rng = EpochRng(config, "classifiers", round, epoch);
    rng.Shuffle(xs);
    rng.Shuffle(hs);
    for (size_t i = 0; i < nb; ++i) {
      Gradients g = ZeroGradients(model);
      const double loss = ClassifierObjective(model, Chunk(xs, nb, i), Chunk(hs, nb, i), &g);
      RequireFinite(loss, "classifier loss");
      OptimizeStep(model.c1, g.c1, s1, opt);
      OptimizeStep(model.c2, g.c2, s2, opt);
    }
    TraceZigzag(trace, model, x, x_prime, hard, config, round, "classifiers", epoch);
  }
}

void StepFeatures(Model& model, const Examples& x_prime, const TrainConfig& config, int round,
                  TrainTrace* trace) {
  if (x_prime.empty()) throw Error(ErrorCode::kPrecondition, "X' is empty");
  const OptimizerConfig opt = Optimizer(config);
  OptimizerState sf;
  Batch all = Pointers(x_prime);
  const size_t nb = BatchCount(all.size(), config.batch);
  const std::vector<size_t> none;
  auto record = [&](int epoch) {
    if (!trace) return;
    TraceRecord r;
    r.round = round;
    r.phase = "features";
    r.epoch = epoch;
    r.mean_disc = FullDisc(model, x_prime);
    r.val_f1 = ValF1(model, x_prime, true, config.delta);
    trace->records.push_back(r);
  };
  record(0);
  for (int epoch = 1; epoch <= config.e3; ++epoch) {
    Rng rng = EpochRng(config, "features", round, epoch);
    rng.Shuffle(all);
    for (size_t i = 0; i < nb; ++i) {
      Gradients g = ZeroGradients(model);
      const double loss = FeatureObjective(model, Chunk(all, nb, i), &g);
      RequireFinite(loss, "feature loss");
      OptimizeStep(model.f, g.f, sf, opt);
    }
    record(epoch);
  }
}

ModelBundle TrainZigzag(const Examples& x, const Examples& x_prime, const Vocab& vocab, int length,
                        const TrainConfig& config, TrainTrace* trace) {
  config.Validate();
  if (x_prime.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "X' is empty; zigzag training degenerates to the original detector, use "
                "train_original");
  }
  RequireBothClasses(x, "X");
  TrainConfig cfg = config;
  cfg.model.vocab_size = vocab.size();
  RequireVocab(x_prime, cfg.model);

  ModelBundle bundle;
  bundle.vocab = vocab;
  bundle.length = length;
  bundle.delta = cfg.delta;
  bundle.mode = TrainMode::kZigzag;
  Model& model = bundle.model;
  model = PretrainJoint(x, cfg, trace);
  const ParamSet pretrained_f = model.f;

  double prev_disc = FullDisc(model, x_prime);
  double prev_lc = FullCe(model, x, 2);
  for (int round = 1; round <= cfg.beta; ++round) {
    std::vector<size_t> hard;
    if (cfg.mine_with_current_features) {
      hard = MineHardExamples(model, x_prime, cfg.delta);
    } else {
      Model miner = model;
      miner.f = pretrained_f;
      hard = MineHardExamples(miner, x_prime, cfg.delta);
    }
    StepClassifiers(model, x, x_prime, hard, cfg, round, trace);
    StepFeatures(model, x_prime, cfg, round, trace);
    const double disc = FullDisc(model, x_prime);
    const double lc = FullCe(model, x, 2);
    RequireFinite(disc, "mean discrepancy");
    RequireFinite(lc, "L_c");
    if (std::abs(disc - prev_disc) <= cfg.tau_disc && std::abs(lc - prev_lc) <= cfg.tau_loss) {
      break;
    }
    prev_disc = disc;
    prev_lc = lc;
  }
  return bundle;
}

}  // namespace zz

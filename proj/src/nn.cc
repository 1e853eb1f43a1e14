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

#include "zz/nn.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zz/common.h"

namespace zz {

namespace {

void Xavier(Tensor& t, Rng& rng) {
  const double limit = std::sqrt(6.0 / (t.rows + t.cols));
  for (double& x : t.data) x = rng.Uniform(-limit, limit);
}

double Dot(const std::vector<double>& a, const double* b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

[[noreturn]] void ShapeError(const std::string& what) {
  throw Error(ErrorCode::kShapeMismatch, what);
}

std::string FormatDouble(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformedRecord, "bad number '" + s + "' in model file");
  }
  return x;
}

void AddOuter(Tensor& t, const std::vector<double>& rows, const std::vector<double>& cols) {
  for (int r = 0; r < t.rows; ++r) {
    const double a = rows[static_cast<size_t>(r)];
    if (a == 0.0) continue;
    double* row = &t.data[static_cast<size_t>(r) * t.cols];
    for (int c = 0; c < t.cols; ++c) row[c] += a * cols[static_cast<size_t>(c)];
  }
}

// out += t^T v
void AddTransposed(const Tensor& t, const std::vector<double>& v, std::vector<double>& out) {
  for (int r = 0; r < t.rows; ++r) {
    const double a = v[static_cast<size_t>(r)];
    if (a == 0.0) continue;
    const double* row = &t.data[static_cast<size_t>(r) * t.cols];
    for (int c = 0; c < t.cols; ++c) out[static_cast<size_t>(c)] += a * row[c];
  }
}

// tanh(t v + b)
std::vector<double> AffineTanh(const Tensor& t, const std::vector<double>& v, const Tensor& b) {
  std::vector<double> out(static_cast<size_t>(t.rows));
  for (int r = 0; r < t.rows; ++r) {
    out[static_cast<size_t>(r)] =
        std::tanh(Dot(v, &t.data[static_cast<size_t>(r) * t.cols]) + b.data[static_cast<size_t>(r)]);
  }
  return out;
}

const double* EmbeddingRow(const Tensor& emb, int id) {
  return &emb.data[static_cast<size_t>(id) * emb.cols];
}

}  // namespace

std::string ModelConfig::ToString() const {
  return "vocab=" + std::to_string(vocab_size) + " d_e=" + std::to_string(d_e) +
         " d_f=" + std::to_string(d_f) + " d_h=" + std::to_string(d_h) +
         " encoder=" + (encoder == EncoderKind::kMeanPool ? "mean" : "rnn");
}

Tensor::Tensor(std::string n, int r, int c)
    : name(std::move(n)), rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

const Tensor& ParamSet::Get(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  ShapeError("no tensor named " + name);
}

Tensor& ParamSet::Get(const std::string& name) {
  return const_cast<Tensor&>(static_cast<const ParamSet&>(*this).Get(name));
}

size_t ParamSet::Count() const {
  size_t n = 0;
  for (const auto& t : tensors) n += t.data.size();
  return n;
}

ParamSet ParamSet::ZerosLike() const {
  ParamSet out;
  for (const auto& t : tensors) out.tensors.emplace_back(t.name, t.rows, t.cols);
  return out;
}

uint64_t ParamSet::Hash() const {
  std::string bytes;
  for (const auto& t : tensors) {
    bytes += t.name;
    bytes.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(double));
  }
  return Fnv1a64(bytes);
}

ParamSet InitFeatureGen(const ModelConfig& config, uint64_t seed) {
  Rng rng(seed);
  ParamSet f;
  Tensor emb("emb", config.vocab_size, config.d_e);
  for (double& x : emb.data) x = rng.Uniform(-0.5, 0.5);
  for (int c = 0; c < config.d_e; ++c) emb.at(kPadId, c) = 0.0;
  f.tensors.push_back(std::move(emb));
  if (config.encoder == EncoderKind::kMeanPool) {
    Tensor w("w", config.d_f, config.d_e);
    Xavier(w, rng);
    f.tensors.push_back(std::move(w));
  } else {
    Tensor wx("wx", config.d_f, config.d_e);
    Tensor wh("wh", config.d_f, config.d_f);
    Xavier(wx, rng);
    Xavier(wh, rng);
    f.tensors.push_back(std::move(wx));
    f.tensors.push_back(std::move(wh));
  }
  f.tensors.emplace_back("b", config.d_f, 1);
  return f;
}

ParamSet InitHead(const ModelConfig& config, uint64_t seed) {
  Rng rng(seed);
  ParamSet c;
  Tensor w1("w1", config.d_h, config.d_f);
  Tensor w2("w2", 1, config.d_h);
  Xavier(w1, rng);
  Xavier(w2, rng);
  c.tensors.push_back(std::move(w1));
  c.tensors.emplace_back("b1", config.d_h, 1);
  c.tensors.push_back(std::move(w2));
  c.tensors.emplace_back("b2", 1, 1);
  return c;
}

Model InitModel(const ModelConfig& config, uint64_t seed) {
  Model m;
  m.config = config;
  m.f = InitFeatureGen(config, DeriveSeed(seed, "F"));
  m.c1 = InitHead(config, DeriveSeed(seed, "C1"));
  m.c2 = InitHead(config, DeriveSeed(seed, "C2"));
  return m;
}

std::vector<double> FeatureForward(const ModelConfig& config, const ParamSet& f,
                                   const std::vector<int>& ids, FeatureCache* cache) {
  const Tensor& emb = f.tensors[0];
  std::vector<int> tokens;
  for (int id : ids) {
    if (id < 0 || id >= emb.rows) {
      ShapeError("token id " + std::to_string(id) + " outside vocab of " + std::to_string(emb.rows));
    }
    if (id != kPadId) tokens.push_back(id);
  }
  const size_t de = static_cast<size_t>(config.d_e);
  std::vector<double> feature;
  if (config.encoder == EncoderKind::kMeanPool) {
    std::vector<double> pooled(de, 0.0);
    for (int id : tokens) {
      const double* row = EmbeddingRow(emb, id);
      for (size_t k = 0; k < de; ++k) pooled[k] += row[k];
    }
    const double scale = 1.0 / static_cast<double>(std::max<size_t>(tokens.size(), 1));
    for (double& x : pooled) x *= scale;
    feature = AffineTanh(f.tensors[1], pooled, f.tensors[2]);
    if (cache) cache->pooled = std::move(pooled);
  } else {
    const Tensor& wx = f.tensors[1];
    const Tensor& wh = f.tensors[2];
    const Tensor& b = f.tensors[3];
    std::vector<std::vector<double>> states{std::vector<double>(static_cast<size_t>(config.d_f), 0.0)};
    for (int id : tokens) {
      const double* e = EmbeddingRow(emb, id);
      const auto& prev = states.back();
      std::vector<double> h(static_cast<size_t>(config.d_f));
      for (int r = 0; r < config.d_f; ++r) {
        double z = b.data[static_cast<size_t>(r)];
        const double* xr = &wx.data[static_cast<size_t>(r) * wx.cols];
        for (size_t k = 0; k < de; ++k) z += xr[k] * e[k];
        z += Dot(prev, &wh.data[static_cast<size_t>(r) * wh.cols]);
        h[static_cast<size_t>(r)] = std::tanh(z);
      }
      states.push_back(std::move(h));
    }
    feature = states.back();
    if (cache) cache->states = std::move(states);
  }
  if (cache) {
    cache->tokens = std::move(tokens);
    cache->feature = feature;
  }
  return feature;
}

void FeatureBackward(const ModelConfig& config, const ParamSet& f, const FeatureCache& cache,
                     const std::vector<double>& d_feature, ParamSet& grads) {
  const size_t de = static_cast<size_t>(config.d_e);
  Tensor& d_emb = grads.tensors[0];
  if (config.encoder == EncoderKind::kMeanPool) {
    std::vector<double> dz(d_feature.size());
    for (size_t r = 0; r < dz.size(); ++r) {
      dz[r] = d_feature[r] * (1.0 - cache.feature[r] * cache.feature[r]);
    }
    AddOuter(grads.tensors[1], dz, cache.pooled);
    for (size_t r = 0; r < dz.size(); ++r) grads.tensors[2].data[r] += dz[r];
    if (cache.tokens.empty()) return;
    std::vector<double> d_pooled(de, 0.0);
    AddTransposed(f.tensors[1], dz, d_pooled);
    const double scale = 1.0 / static_cast<double>(cache.tokens.size());
    for (int id : cache.tokens) {
      double* row = &d_emb.data[static_cast<size_t>(id) * d_emb.cols];
      for (size_t k = 0; k < de; ++k) row[k] += d_pooled[k] * scale;
    }
    return;
  }
  const Tensor& wx = f.tensors[1];
  const Tensor& wh = f.tensors[2];
  std::vector<double> dh = d_feature;
  for (size_t t = cache.tokens.size(); t >= 1; --t) {
    const auto& h = cache.states[t];
    const auto& prev = cache.states[t - 1];
    std::vector<double> dz(dh.size());
    for (size_t r = 0; r < dz.size(); ++r) dz[r] = dh[r] * (1.0 - h[r] * h[r]);
    const int id = cache.tokens[t - 1];
    const double* e = EmbeddingRow(f.tensors[0], id);
    AddOuter(grads.tensors[1], dz, std::vector<double>(e, e + de));
    AddOuter(grads.tensors[2], dz, prev);
    for (size_t r = 0; r < dz.size(); ++r) grads.tensors[3].data[r] += dz[r];
    std::vector<double> d_e(de, 0.0);
    AddTransposed(wx, dz, d_e);
    double* row = &d_emb.data[static_cast<size_t>(id) * d_emb.cols];
    for (size_t k = 0; k < de; ++k) row[k] += d_e[k];
    std::fill(dh.begin(), dh.end(), 0.0);
    AddTransposed(wh, dz, dh);
  }
}

double HeadForward(const ModelConfig& config, const ParamSet& c, const std::vector<double>& feature,
                   HeadCache* cache) {
  if (static_cast<int>(feature.size()) != config.d_f) ShapeError("feature width mismatch");
  std::vector<double> hidden = AffineTanh(c.tensors[0], feature, c.tensors[1]);
  const double logit = Dot(hidden, c.tensors[2].data.data()) + c.tensors[3].data[0];
  if (cache) {
    cache->hidden = std::move(hidden);
    cache->logit = logit;
  }
  return logit;
}

void HeadBackward(const ModelConfig& /*config*/, const ParamSet& c,
                  const std::vector<double>& feature, const HeadCache& cache, double d_logit,
                  ParamSet* grads, std::vector<double>* d_feature) {
  const Tensor& w2 = c.tensors[2];
  std::vector<double> d_hidden(cache.hidden.size());
  for (size_t k = 0; k < d_hidden.size(); ++k) {
    d_hidden[k] = d_logit * w2.data[k] * (1.0 - cache.hidden[k] * cache.hidden[k]);
  }
  if (grads) {
    for (size_t k = 0; k < d_hidden.size(); ++k) grads->tensors[2].data[k] += d_logit * cache.hidden[k];
    grads->tensors[3].data[0] += d_logit;
    AddOuter(grads->tensors[0], d_hidden, feature);
    for (size_t k = 0; k < d_hidden.size(); ++k) grads->tensors[1].data[k] += d_hidden[k];
  }
  if (d_feature) AddTransposed(c.tensors[0], d_hidden, *d_feature);
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double ForwardProb(const ModelConfig& config, const ParamSet& f, const ParamSet& c,
                   const std::vector<int>& ids) {
  return Sigmoid(HeadForward(config, c, FeatureForward(config, f, ids)));
}

int Binary(double p, double delta) { return p > delta ? 1 : 0; }

LossValue LossCe(double p, int y) {
  const bool clamped = p < kCeEpsilon || p > 1.0 - kCeEpsilon;
  const double q = std::clamp(p, kCeEpsilon, 1.0 - kCeEpsilon);
  LossValue out;
  out.value = y ? -std::log(q) : -std::log(1.0 - q);
  out.d_logit = clamped ? 0.0 : p - y;
  return out;
}

DiscValue LossDisc(double p1, double p2) {
  DiscValue out;
  out.value = std::fabs(p1 - p2);
  const double s = p1 > p2 ? 1.0 : (p1 < p2 ? -1.0 : 0.0);
  out.d_p1 = s;
  out.d_p2 = -s;
  return out;
}

Gradients ZeroGradients(const Model& model) {
  return {model.f.ZerosLike(), model.c1.ZerosLike(), model.c2.ZerosLike()};
}

double CeObjective(const Model& model, const Batch& batch, int heads, Gradients* grads) {
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  const ModelConfig& cfg = model.config;
  double total = 0.0;
  for (const EncodedExample* ex : batch) {
    FeatureCache fc;
    const auto feature = FeatureForward(cfg, model.f, ex->ids, &fc);
    std::vector<double> d_feature(feature.size(), 0.0);
    for (int l = 0; l < heads; ++l) {
      const ParamSet& c = l == 0 ? model.c1 : model.c2;
      HeadCache hc;
      const double p = Sigmoid(HeadForward(cfg, c, feature, &hc));
      const LossValue loss = LossCe(p, ex->label);
      total += loss.value * scale;
      if (grads) {
        HeadBackward(cfg, c, feature, hc, loss.d_logit * scale, l == 0 ? &grads->c1 : &grads->c2,
                     &d_feature);
      }
    }
    if (grads) FeatureBackward(cfg, model.f, fc, d_feature, grads->f);
  }
  return total;
}

double ClassifierObjective(const Model& model, const Batch& x, const Batch& hard,
                           Gradients* grads) {
  const ModelConfig& cfg = model.config;
  double total = 0.0;
  if (!x.empty()) {
    const double scale = 1.0 / static_cast<double>(x.size());
    for (const EncodedExample* ex : x) {
      const auto feature = FeatureForward(cfg, model.f, ex->ids);
      for (int l = 0; l < 2; ++l) {
        const ParamSet& c = l == 0 ? model.c1 : model.c2;
        HeadCache hc;
        const double p = Sigmoid(HeadForward(cfg, c, feature, &hc));
        const LossValue loss = LossCe(p, ex->label);
        total += loss.value * scale;
        if (grads) {
          HeadBackward(cfg, c, feature, hc, loss.d_logit * scale,
                       l == 0 ? &grads->c1 : &grads->c2, nullptr);
        }
      }
    }
  }
  if (!hard.empty()) {
    const double scale = 1.0 / static_cast<double>(hard.size());
    for (const EncodedExample* ex : hard) {
      const auto feature = FeatureForward(cfg, model.f, ex->ids);
      HeadCache h1, h2;
      const double p1 = Sigmoid(HeadForward(cfg, model.c1, feature, &h1));
      const double p2 = Sigmoid(HeadForward(cfg, model.c2, feature, &h2));
      const DiscValue d = LossDisc(p1, p2);
      total -= d.value * scale;
      if (grads) {
        HeadBackward(cfg, model.c1, feature, h1, -scale * d.d_p1 * p1 * (1.0 - p1), &grads->c1,
                     nullptr);
        HeadBackward(cfg, model.c2, feature, h2, -scale * d.d_p2 * p2 * (1.0 - p2), &grads->c2,
                     nullptr);
      }
    }
  }
  return total;
}

double FeatureObjective(const Model& model, const Batch& batch, Gradients* grads) {
  if (batch.empty()) return 0.0;
  const ModelConfig& cfg = model.config;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const EncodedExample* ex : batch) {
    FeatureCache fc;
    const auto feature = FeatureForward(cfg, model.f, ex->ids, &fc);
    HeadCache h1, h2;
    const double p1 = Sigmoid(HeadForward(cfg, model.c1, feature, &h1));
    const double p2 = Sigmoid(HeadForward(cfg, model.c2, feature, &h2));
    const DiscValue d = LossDisc(p1, p2);
    total += d.value * scale;
    if (grads && d.d_p1 != 0.0) {
      std::vector<double> d_feature(feature.size(), 0.0);
      HeadBackward(cfg, model.c1, feature, h1, scale * d.d_p1 * p1 * (1.0 - p1), nullptr, &d_feature);
      HeadBackward(cfg, model.c2, feature, h2, scale * d.d_p2 * p2 * (1.0 - p2), nullptr, &d_feature);
      FeatureBackward(cfg, model.f, fc, d_feature, grads->f);
    }
  }
  return total;
}

void OptimizeStep(ParamSet& params, const ParamSet& grads, OptimizerState& state,
                  const OptimizerConfig& config) {
  for (const auto& g : grads.tensors) {
    for (double x : g.data) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFiniteGradient, "non-finite gradient in tensor " + g.name);
      }
    }
  }
  if (config.kind == OptimizerKind::kSgd) {
    for (size_t i = 0; i < params.tensors.size(); ++i) {
      auto& p = params.tensors[i].data;
      const auto& g = grads.tensors[i].data;
      for (size_t k = 0; k < p.size(); ++k) p[k] -= config.lr * g[k];
    }
    return;
  }
  if (state.m.empty()) {
    for (const auto& t : params.tensors) {
      state.m.emplace_back(t.data.size(), 0.0);
      state.v.emplace_back(t.data.size(), 0.0);
    }
  }
  ++state.steps;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.steps));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.steps));
  for (size_t i = 0; i < params.tensors.size(); ++i) {
    auto& p = params.tensors[i].data;
    const auto& g = grads.tensors[i].data;
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (size_t k = 0; k < p.size(); ++k) {
      m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g[k];
      v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g[k] * g[k];
      p[k] -= config.lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + config.epsilon);
    }
  }
}

const char* TrainModeName(TrainMode mode) {
  switch (mode) {
    case TrainMode::kOriginal:
      return "original";
    case TrainMode::kConventional:
      return "conventional";
    case TrainMode::kZigzag:
      return "zigzag";
  }
  return "?";
}

std::string ModelBundle::Fingerprint() const {
  std::string text = model.config.ToString() + "|L=" + std::to_string(length) + "|" +
                     Vocab::kPolicy;
  for (const auto& t : vocab.tokens()) text += "\n" + t;
  return HexDigest(Fnv1a64(text));
}

Prediction Predict(const ModelBundle& bundle, const std::vector<int>& ids) {
  if (static_cast<int>(ids.size()) != bundle.length) {
    ShapeError("sequence length " + std::to_string(ids.size()) + " != model length " +
               std::to_string(bundle.length));
  }
  const Model& m = bundle.model;
  const auto feature = FeatureForward(m.config, m.f, ids);
  Prediction out;
  const double p1 = Sigmoid(HeadForward(m.config, m.c1, feature));
  if (bundle.mode == TrainMode::kZigzag) {
    const double p2 = Sigmoid(HeadForward(m.config, m.c2, feature));
    out.p = (p1 + p2) / 2.0;
  } else {
    out.p = p1;
  }
  out.label = Binary(out.p, bundle.delta);
  return out;
}

std::string SerializeModel(const ModelBundle& b) {
  std::ostringstream out;
  const ModelConfig& c = b.model.config;
  out << "zz-model " << kModelVersion << "\n";
  out << "fingerprint " << b.Fingerprint() << "\n";
  out << "mode " << TrainModeName(b.mode) << "\n";
  out << "delta " << FormatDouble(b.delta) << "\n";
  out << "length " << b.length << "\n";
  out << "config " << c.vocab_size << " " << c.d_e << " " << c.d_f << " " << c.d_h << " "
      << (c.encoder == EncoderKind::kMeanPool ? "mean" : "rnn") << "\n";
  out << "vocab " << b.vocab.size() << "\n";
  for (const auto& t : b.vocab.tokens()) out << nlohmann::json(t).dump() << "\n";
  const std::pair<const char*, const ParamSet*> sets[] = {
      {"F", &b.model.f}, {"C1", &b.model.c1}, {"C2", &b.model.c2}};
  for (const auto& [name, set] : sets) {
    out << "params " << name << " " << set->tensors.size() << "\n";
    for (const auto& t : set->tensors) {
      out << "tensor " << t.name << " " << t.rows << " " << t.cols << "\n";
      for (size_t k = 0; k < t.data.size(); ++k) {
        out << (k ? " " : "") << FormatDouble(t.data[k]);
      }
      out << "\n";
    }
  }
  return out.str();
}

ModelBundle DeserializeModel(const std::string& text) {
  std::istringstream in(text);
  auto fail = [](const std::string& what) -> void {
    throw Error(ErrorCode::kMalformedRecord, "model file: " + what);
  };
  auto expect = [&](const std::string& key) {
    std::string word;
    if (!(in >> word) || word != key) fail("expected '" + key + "'");
  };
  ModelBundle b;
  int version = 0;
  expect("zz-model");
  in >> version;
  if (version != kModelVersion) {
    throw Error(ErrorCode::kVersionMismatch, "model file version " + std::to_string(version));
  }
  std::string fingerprint, mode, delta, encoder;
  expect("fingerprint");
  in >> fingerprint;
  expect("mode");
  in >> mode;
  if (mode == "original") {
    b.mode = TrainMode::kOriginal;
  } else if (mode == "conventional") {
    b.mode = TrainMode::kConventional;
  } else if (mode == "zigzag") {
    b.mode = TrainMode::kZigzag;
  } else {
    fail("unknown mode " + mode);
  }
  expect("delta");
  in >> delta;
  b.delta = ParseDouble(delta);
  expect("length");
  in >> b.length;
  ModelConfig& c = b.model.config;
  expect("config");
  in >> c.vocab_size >> c.d_e >> c.d_f >> c.d_h >> encoder;
  c.encoder = encoder == "rnn" ? EncoderKind::kRecurrent : EncoderKind::kMeanPool;
  expect("vocab");
  int n = 0;
  in >> n;
  std::string line;
  std::getline(in, line);
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail("truncated vocab");
    try {
      tokens.push_back(nlohmann::json::parse(line).get<std::string>());
    } catch (const nlohmann::json::exception&) {
      fail("bad vocab entry");
    }
  }
  b.vocab = Vocab(std::move(tokens));
  ParamSet* sets[] = {&b.model.f, &b.model.c1, &b.model.c2};
  for (ParamSet* set : sets) {
    std::string name;
    size_t count = 0;
    expect("params");
    in >> name >> count;
    for (size_t i = 0; i < count; ++i) {
      std::string tname;
      int rows = 0, cols = 0;
      expect("tensor");
      in >> tname >> rows >> cols;
      if (!in || rows <= 0 || cols <= 0) fail("bad tensor header");
      Tensor t(tname, rows, cols);
      for (double& x : t.data) {
        std::string word;
        if (!(in >> word)) fail("truncated tensor " + tname);
        x = ParseDouble(word);
      }
      set->tensors.push_back(std::move(t));
    }
  }
  if (!in) fail("truncated");
  if (b.Fingerprint() != fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch, "model file fingerprint does not match contents");
  }
  const ParamSet expected_f = InitFeatureGen(c, 0);
  const ParamSet expected_c = InitHead(c, 0);
  auto same_shape = [](const ParamSet& a, const ParamSet& e) {
    if (a.tensors.size() != e.tensors.size()) return false;
    for (size_t i = 0; i < a.tensors.size(); ++i) {
      if (a.tensors[i].name != e.tensors[i].name || a.tensors[i].rows != e.tensors[i].rows ||
          a.tensors[i].cols != e.tensors[i].cols) {
        return false;
      }
    }
    return true;
  };
  if (!same_shape(b.model.f, expected_f) || !same_shape(b.model.c1, expected_c) ||
      !same_shape(b.model.c2, expected_c) || b.vocab.size() != c.vocab_size) {
    throw Error(ErrorCode::kShapeMismatch, "model file tensors do not match its config");
  }
  return b;
}

void SaveModel(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  out << SerializeModel(bundle);
}

ModelBundle LoadModel(const std::string& path, const std::string& expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ModelBundle b = DeserializeModel(ss.str());
  if (!expected_fingerprint.empty() && b.Fingerprint() != expected_fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "model fingerprint " + b.Fingerprint() + " != expected " + expected_fingerprint);
  }
  return b;
}

}  // namespace zz

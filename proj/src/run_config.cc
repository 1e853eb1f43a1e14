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

#include "zz/run_config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "zz/common.h"

namespace zz {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::kUsage, "bad value for " + key + ": '" + value + "'");
}

template <typename T>
T Number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) Bad(key, value);
  return out;
}

int PositiveInt(const std::string& key, const std::string& value) {
  const int v = Number<int>(key, value);
  if (v < 1) Bad(key, value);
  return v;
}

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const char* OptimizerName(OptimizerKind k) { return k == OptimizerKind::kAdam ? "adam" : "sgd"; }
const char* EncoderName(EncoderKind k) {
  return k == EncoderKind::kMeanPool ? "meanpool" : "recurrent";
}

}  // namespace

Granularity ParseGranularity(const std::string& text) {
  if (text == "function") return Granularity::kFunction;
  if (text == "slice") return Granularity::kSlice;
  throw Error(ErrorCode::kUsage, "unknown granularity '" + text + "'");
}

OptimizerKind ParseOptimizer(const std::string& text) {
  if (text == "adam") return OptimizerKind::kAdam;
  if (text == "sgd") return OptimizerKind::kSgd;
  throw Error(ErrorCode::kUsage, "unknown optimizer '" + text + "'");
}

EncoderKind ParseEncoder(const std::string& text) {
  if (text == "meanpool") return EncoderKind::kMeanPool;
  if (text == "recurrent") return EncoderKind::kRecurrent;
  throw Error(ErrorCode::kUsage, "unknown encoder '" + text + "'");
}

TrainMode ParseTrainMode(const std::string& text) {
  for (TrainMode m : {TrainMode::kOriginal, TrainMode::kConventional, TrainMode::kZigzag}) {
    if (text == TrainModeName(m)) return m;
  }
  throw Error(ErrorCode::kUsage, "unknown training mode '" + text + "'");
}

const std::vector<std::string>& RunConfig::Keys() {
  static const std::vector<std::string> keys = {
      "seed",       "count",      "vuln",     "min_helpers", "max_helpers", "md",
      "ma",         "granularity", "vocab_size", "delta",     "beta",        "e1",
      "e2",         "e3",         "batch",    "lr",          "optimizer",   "tau_disc",
      "tau_loss",   "max_epochs", "mine_with", "encoder",    "d_e",         "d_f",
      "d_h",        "out_dir"};
  return keys;
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  SyntheticSpec& c = experiment.corpus;
  TrainConfig& t = experiment.train;
  if (key == "seed") {
    seed = Number<uint64_t>(key, value);
  } else if (key == "count") {
    c.count = PositiveInt(key, value);
  } else if (key == "vuln") {
    c.vuln_fraction = Number<double>(key, value);
    if (!(c.vuln_fraction > 0.0 && c.vuln_fraction < 1.0)) Bad(key, value);
  } else if (key == "min_helpers") {
    c.min_helpers = PositiveInt(key, value);
  } else if (key == "max_helpers") {
    c.max_helpers = PositiveInt(key, value);
  } else if (key == "md") {
    experiment.md = TransformSet::Parse(value);
  } else if (key == "ma") {
    experiment.ma = TransformSet::Parse(value);
  } else if (key == "granularity") {
    experiment.granularity = ParseGranularity(value);
  } else if (key == "vocab_size") {
    experiment.vocab_size = Number<int>(key, value);
    if (experiment.vocab_size < 3) Bad(key, value);
  } else if (key == "delta") {
    t.delta = Number<double>(key, value);
  } else if (key == "beta") {
    t.beta = PositiveInt(key, value);
  } else if (key == "e1") {
    t.e1 = PositiveInt(key, value);
  } else if (key == "e2") {
    t.e2 = PositiveInt(key, value);
  } else if (key == "e3") {
    t.e3 = PositiveInt(key, value);
  } else if (key == "batch") {
    t.batch = PositiveInt(key, value);
  } else if (key == "lr") {
    t.lr = Number<double>(key, value);
  } else if (key == "optimizer") {
    t.optimizer = ParseOptimizer(value);
  } else if (key == "tau_disc") {
    t.tau_disc = Number<double>(key, value);
  } else if (key == "tau_loss") {
    t.tau_loss = Number<double>(key, value);
  } else if (key == "max_epochs") {
    t.max_epochs = PositiveInt(key, value);
  } else if (key == "mine_with") {
    if (value != "current" && value != "pretrained") Bad(key, value);
    t.mine_with_current_features = value == "current";
  } else if (key == "encoder") {
    t.model.encoder = ParseEncoder(value);
  } else if (key == "d_e") {
    t.model.d_e = PositiveInt(key, value);
  } else if (key == "d_f") {
    t.model.d_f = PositiveInt(key, value);
  } else if (key == "d_h") {
    t.model.d_h = PositiveInt(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else {
    throw Error(ErrorCode::kUsage, "unknown config key '" + key + "'");
  }
  if (key != "out_dir" && key != "seed") {
    try {
      t.Validate();
    } catch (const Error&) {
      Bad(key, value);
    }
  }
}

std::string RunConfig::ToString() const {
  const SyntheticSpec& c = experiment.corpus;
  const TrainConfig& t = experiment.train;
  std::ostringstream out;
  out << "seed = " << seed << "\n"
      << "count = " << c.count << "\n"
      << "vuln = " << Num(c.vuln_fraction) << "\n"
      << "min_helpers = " << c.min_helpers << "\n"
      << "max_helpers = " << c.max_helpers << "\n"
      << "md = " << (experiment.md.empty() ? "none" : experiment.md.ToString()) << "\n"
      << "ma = " << (experiment.ma.empty() ? "none" : experiment.ma.ToString()) << "\n"
      << "granularity = " << GranularityName(experiment.granularity) << "\n"
      << "vocab_size = " << experiment.vocab_size << "\n"
      << "delta = " << Num(t.delta) << "\n"
      << "beta = " << t.beta << "\n"
      << "e1 = " << t.e1 << "\n"
      << "e2 = " << t.e2 << "\n"
      << "e3 = " << t.e3 << "\n"
      << "batch = " << t.batch << "\n"
      << "lr = " << Num(t.lr) << "\n"
      << "optimizer = " << OptimizerName(t.optimizer) << "\n"
      << "tau_disc = " << Num(t.tau_disc) << "\n"
      << "tau_loss = " << Num(t.tau_loss) << "\n"
      << "max_epochs = " << t.max_epochs << "\n"
      << "mine_with = " << (t.mine_with_current_features ? "current" : "pretrained") << "\n"
      << "encoder = " << EncoderName(t.model.encoder) << "\n"
      << "d_e = " << t.model.d_e << "\n"
      << "d_f = " << t.model.d_f << "\n"
      << "d_h = " << t.model.d_h << "\n";
  if (!out_dir.empty()) out << "out_dir = " << out_dir << "\n";
  return out.str();
}

ExperimentConfig RunConfig::Resolved() const {
  ExperimentConfig e = experiment;
  e.corpus.seed = seed;
  e.train.seed = seed;
  return e;
}

RunConfig ParseRunConfig(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = Trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kUsage, "config line " + std::to_string(number) + ": expected key = value");
    }
    config.Set(Trim(body.substr(0, eq)), Trim(body.substr(eq + 1)));
  }
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

void ApplySeedOverride(RunConfig& config, const char* value) {
  if (value && *value) config.Set("seed", value);
}

void WriteRunConfig(const RunConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  out << config.ToString();
}

}  // namespace zz

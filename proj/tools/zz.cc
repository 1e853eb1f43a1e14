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

// zz: command-line front end of the workbench.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zz/common.h"
#include "zz/corpus.h"
#include "zz/eval.h"
#include "zz/experiment.h"
#include "zz/run_config.h"
#include "zz/zigzag.h"

namespace fs = std::filesystem;

namespace zz {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kInapplicable:
      return kExitUsage;
    case ErrorCode::kDivergence:
    case ErrorCode::kNonFiniteGradient:
      return kExitDivergence;
    default:
      return kExitData;
  }
}

void RequireFile(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kMalformedRecord, std::string(what) + " not found: " + path);
  }
}

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  out << text;
}

// Config file, then --set overrides, then ZZ_SEED.
RunConfig BuildConfig(const std::string& file, const std::vector<std::string>& sets) {
  RunConfig config = file.empty() ? RunConfig() : LoadRunConfig(file);
  for (const auto& kv : sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kUsage, "--set expects key=value: " + kv);
    config.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  ApplySeedOverride(config, std::getenv("ZZ_SEED"));
  return config;
}

Split CorpusSplit(const Corpus& corpus) {
  if (corpus.programs.empty()) throw Error(ErrorCode::kMalformedRecord, "corpus is empty");
  const Split s = corpus.programs.front().split;
  for (const auto& p : corpus.programs) {
    if (p.split != s) throw Error(ErrorCode::kMalformedRecord, "corpus mixes splits");
  }
  return s;
}

struct GenArgs {
  int count = 200;
  double vuln = 0.5;
  int min_helpers = 2;
  int max_helpers = 4;
  uint64_t seed = 1;
  std::string out;
};

int CmdGen(const GenArgs& a) {
  RunConfig config;
  config.Set("count", std::to_string(a.count));
  config.Set("vuln", Num(a.vuln));
  config.Set("min_helpers", std::to_string(a.min_helpers));
  config.Set("max_helpers", std::to_string(a.max_helpers));
  config.Set("seed", std::to_string(a.seed));
  ApplySeedOverride(config, std::getenv("ZZ_SEED"));
  fs::create_directories(a.out);
  const Corpus corpus = GenerateSynthetic(config.Resolved().corpus);
  Corpus train;
  Corpus test;
  for (const auto& p : corpus.programs) {
    (p.split == Split::kTrain ? train : test).programs.push_back(p);
  }
  SaveCorpus(train, a.out + "/train.jsonl");
  SaveCorpus(test, a.out + "/test.jsonl");
  WriteRunConfig(config, a.out + "/gen.conf");
  std::printf("generated %zu programs (%zu train, %zu test) in %s\n", corpus.programs.size(),
              train.programs.size(), test.programs.size(), a.out.c_str());
  return 0;
}

struct TransformArgs {
  std::string in;
  std::string ct = "all";
  uint64_t seed = 1;
  std::string out;
};

int CmdTransform(const TransformArgs& a) {
  RunConfig config;
  config.Set("seed", std::to_string(a.seed));
  ApplySeedOverride(config, std::getenv("ZZ_SEED"));
  const TransformSet kinds = TransformSet::Parse(a.ct);
  RequireFile(a.in, "corpus");
  const Corpus corpus = LoadCorpus(a.in);
  AugmentStats stats;
  Corpus out;
  if (CorpusSplit(corpus) == Split::kTrain) {
    config.experiment.md = kinds;
    out = AugmentTrain(corpus, kinds, DeriveSeed(config.seed, "augment"), &stats);
  } else {
    config.experiment.ma = kinds;
    out = BuildTargets(corpus, kinds, DeriveSeed(config.seed, "targets"), &stats);
  }
  SaveCorpus(out, a.out);
  WriteRunConfig(config, a.out + ".conf");
  for (TransformKind k : kinds.kinds()) {
    std::printf("%s applied %d skipped %d\n", TransformLabel(k).c_str(), stats.applied[k],
                stats.skipped[k]);
  }
  std::printf("wrote %zu programs to %s\n", out.programs.size(), a.out.c_str());
  return 0;
}

struct TrainArgs {
  std::string mode = "zigzag";
  std::string corpus;
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

int CmdTrain(const TrainArgs& a) {
  const TrainMode mode = ParseTrainMode(a.mode);
  RunConfig config = BuildConfig(a.config, a.sets);
  const ExperimentConfig e = config.Resolved();
  RequireFile(a.corpus, "training corpus");
  const Corpus corpus = LoadCorpus(a.corpus);
  if (CorpusSplit(corpus) != Split::kTrain) {
    throw Error(ErrorCode::kMalformedRecord, "training corpus holds test programs");
  }
  Datasets data = EncodeTraining(corpus, e.granularity, e.vocab_size, mode == TrainMode::kOriginal);
  if (mode == TrainMode::kOriginal && !data.x_prime.empty()) {
    std::fprintf(stderr, "warning: original mode ignores %zu transformed examples\n",
                 data.x_prime.size());
    data.x_prime.clear();
  }
  TrainTrace trace;
  const ModelBundle bundle = TrainDetector(mode, data, e.train, &trace);
  SaveModel(bundle, a.out);
  WriteText(a.out + ".trace.jsonl", trace.ToJsonl());
  WriteRunConfig(config, a.out + ".conf");
  std::printf("trained %s detector: %zu X, %zu X' examples, fingerprint %s\n", a.mode.c_str(),
              data.x.size(), data.x_prime.size(), bundle.Fingerprint().c_str());
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string corpus;
  std::string granularity = "function";
  std::string fingerprint;
  std::string out;
};

int CmdEval(const EvalArgs& a) {
  RequireFile(a.model, "model");
  RequireFile(a.corpus, "corpus");
  const Granularity g = ParseGranularity(a.granularity);
  const ModelBundle bundle = LoadModel(a.model, a.fingerprint);
  if (bundle.length != SequenceLength(g)) {
    throw Error(ErrorCode::kShapeMismatch, "model sequence length does not match granularity " +
                                               a.granularity);
  }
  const EvalReport report = Evaluate(bundle, LoadCorpus(a.corpus), g);
  std::printf("%s", report.ToText().c_str());
  if (!a.out.empty()) {
    SaveReport(report, a.out);
    WriteText(a.out + ".txt", report.ToText());
  }
  return 0;
}

struct CompareArgs {
  std::string original;
  std::string conventional;
  std::string zigzag;
  std::string row = "manipulated";
  std::string out;
};

int CmdCompare(const CompareArgs& a) {
  for (const auto* p : {&a.original, &a.conventional, &a.zigzag}) RequireFile(*p, "report");
  const Comparison c =
      Compare(LoadReport(a.original), LoadReport(a.conventional), LoadReport(a.zigzag), a.row);
  std::printf("%s", c.table.c_str());
  if (!a.out.empty()) WriteText(a.out, c.table);
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

// The whole D / D' / D+ comparison on one generated corpus.
int CmdExperiment(const ExperimentArgs& a) {
  RunConfig config = BuildConfig(a.config, a.sets);
  if (!a.out.empty()) config.out_dir = a.out;
  if (config.out_dir.empty()) throw Error(ErrorCode::kUsage, "no output directory (--out)");
  const std::string dir = config.out_dir;
  fs::create_directories(dir);
  WriteRunConfig(config, dir + "/run.conf");
  const ExperimentConfig e = config.Resolved();
  EvalReport reports[3];
  const TrainMode modes[3] = {TrainMode::kOriginal, TrainMode::kConventional, TrainMode::kZigzag};
  for (int i = 0; i < 3; ++i) {
    const std::string name = TrainModeName(modes[i]);
    DetectorRun run = RunDetector(modes[i], e);
    SaveModel(run.bundle, dir + "/" + name + ".model");
    WriteText(dir + "/" + name + ".trace.jsonl", run.trace.ToJsonl());
    SaveReport(run.report, dir + "/" + name + ".report.jsonl");
    WriteText(dir + "/" + name + ".report.txt", run.report.ToText());
    std::printf("%s", run.report.ToText().c_str());
    reports[i] = run.report;
  }
  const Comparison c = Compare(reports[0], reports[1], reports[2]);
  WriteText(dir + "/compare.txt", c.table);
  std::printf("%s", c.table.c_str());
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"zz: code-transformation robustness workbench"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic corpus split into train/test");
  g->add_option("--count", gen.count, "number of programs")->check(CLI::PositiveNumber);
  g->add_option("--vuln", gen.vuln, "fraction of vulnerable programs, in (0, 1)");
  g->add_option("--min-helpers", gen.min_helpers);
  g->add_option("--max-helpers", gen.max_helpers);
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "output directory")->required();

  TransformArgs tr;
  auto* t = app.add_subcommand("transform", "add transformed variants to a corpus");
  t->add_option("--in", tr.in, "input corpus")->required();
  t->add_option("--ct", tr.ct, "ct1..ct8 list, all, none or md0..md5");
  t->add_option("--seed", tr.seed);
  t->add_option("--out", tr.out, "output corpus")->required();

  TrainArgs trn;
  auto* tn = app.add_subcommand("train", "train a detector");
  tn->add_option("--mode", trn.mode, "original, conventional or zigzag");
  tn->add_option("--corpus", trn.corpus, "training corpus")->required();
  tn->add_option("--config", trn.config, "run config file");
  tn->add_option("--set", trn.sets, "key=value override")->take_all();
  tn->add_option("--out", trn.out, "model file")->required();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "evaluate a detector on a corpus");
  e->add_option("--model", ev.model)->required();
  e->add_option("--corpus", ev.corpus)->required();
  e->add_option("--granularity", ev.granularity, "function or slice");
  e->add_option("--fingerprint", ev.fingerprint, "expected model fingerprint");
  e->add_option("--out", ev.out, "report file");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "compare the reports of D, D' and D+");
  c->add_option("--original", cmp.original)->required();
  c->add_option("--conventional", cmp.conventional)->required();
  c->add_option("--zigzag", cmp.zigzag)->required();
  c->add_option("--row", cmp.row);
  c->add_option("--out", cmp.out);

  ExperimentArgs ex;
  auto* x = app.add_subcommand("experiment", "run gen, transform, train, eval and compare");
  x->add_option("--config", ex.config, "run config file");
  x->add_option("--set", ex.sets, "key=value override")->take_all();
  x->add_option("--out", ex.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*g) return CmdGen(gen);
    if (*t) return CmdTransform(tr);
    if (*tn) return CmdTrain(trn);
    if (*e) return CmdEval(ev);
    if (*c) return CmdCompare(cmp);
    if (*x) return CmdExperiment(ex);
  } catch (const Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return ExitCodeFor(err.code());
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace zz

int main(int argc, char** argv) { return zz::Main(argc, argv); }

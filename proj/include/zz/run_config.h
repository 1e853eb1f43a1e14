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

#ifndef ZZ_RUN_CONFIG_H_
#define ZZ_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "zz/experiment.h"

namespace zz {

// Settings of one workbench run, read from `key = value` lines. A single
// seed drives corpus generation, augmentation and training.
struct RunConfig {
  uint64_t seed = 1;
  ExperimentConfig experiment;
  std::string out_dir;

  // Throws Error(kUsage) for unknown keys and malformed values.
  void Set(const std::string& key, const std::string& value);
  // Every key with its current value, one `key = value` line each.
  std::string ToString() const;
  // Copies `seed` into the corpus and training settings.
  ExperimentConfig Resolved() const;

  static const std::vector<std::string>& Keys();
};

RunConfig ParseRunConfig(const std::string& text);
RunConfig LoadRunConfig(const std::string& path);
// Overrides the seed from a ZZ_SEED value; null or empty leaves it.
void ApplySeedOverride(RunConfig& config, const char* value);
void WriteRunConfig(const RunConfig& config, const std::string& path);

Granularity ParseGranularity(const std::string& text);
OptimizerKind ParseOptimizer(const std::string& text);
EncoderKind ParseEncoder(const std::string& text);
TrainMode ParseTrainMode(const std::string& text);

}  // namespace zz

#endif  // ZZ_RUN_CONFIG_H_

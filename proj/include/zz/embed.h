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

#ifndef ZZ_EMBED_H_
#define ZZ_EMBED_H_

#include <map>
#include <string>
#include <vector>

#include "zz/fragment.h"

namespace zz {

constexpr int kPadId = 0;
constexpr int kUnknownId = 1;
constexpr int kFunctionLength = 128;
constexpr int kSliceLength = 64;

// Renames user identifiers to VAR_k / FUN_k by first appearance and
// collapses string literals to STR.
std::vector<std::string> Normalize(const std::vector<std::string>& tokens);

class Vocab {
 public:
  static constexpr const char* kPolicy = "canon-v1";

  Vocab();
  // Tokens in id order, starting with the two reserved entries.
  explicit Vocab(std::vector<std::string> tokens);

  int Id(const std::string& token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
};

// Keeps the max_size - 2 most frequent normalized tokens, ties broken by
// token text. Throws Error(kPrecondition) for max_size < 3 or any fragment
// outside the training split.
Vocab BuildVocab(const std::vector<Fragment>& train, int max_size);

struct EncodedExample {
  std::string fragment_id;
  Population population = Population::kX;
  int label = 0;
  std::vector<int> ids;

  bool operator==(const EncodedExample& other) const = default;
};

EncodedExample Encode(const Fragment& fragment, const Vocab& vocab, int length);
std::vector<EncodedExample> EncodeAll(const std::vector<Fragment>& fragments,
                                      const Vocab& vocab, int length);

constexpr int kDatasetVersion = 1;

void SaveDataset(const std::vector<EncodedExample>& examples, const std::string& path);
std::vector<EncodedExample> LoadDataset(const std::string& path);

}  // namespace zz

#endif  // ZZ_EMBED_H_

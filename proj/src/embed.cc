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

#include "zz/embed.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "json.hpp"
#include "zz/ast.h"
#include "zz/common.h"
#include "zz/lang.h"

namespace zz {

namespace {

bool IsIdentifier(const std::string& t) {
  return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_') &&
         !IsKeyword(t);
}

}  // namespace

std::vector<std::string> Normalize(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> vars;
  std::map<std::string, std::string> funcs;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (!t.empty() && t[0] == '"') {
      out.push_back("STR");
      continue;
    }
    if (!IsIdentifier(t) || IsBuiltin(t)) {
      out.push_back(t);
      continue;
    }
    const bool is_func = (i + 1 < tokens.size() && tokens[i + 1] == "(") ||
                         (i > 0 && tokens[i - 1] == "func");
    auto& table = is_func ? funcs : vars;
    auto it = table.find(t);
    if (it == table.end()) {
      const std::string name = (is_func ? "FUN_" : "VAR_") + std::to_string(table.size() + 1);
      it = table.emplace(t, name).first;
    }
    out.push_back(it->second);
  }
  return out;
}

Vocab::Vocab() : Vocab(std::vector<std::string>{"<pad>", "<unk>"}) {}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_[0] != "<pad>" || tokens_[1] != "<unk>") {
    throw Error(ErrorCode::kPrecondition, "vocab must start with <pad> and <unk>");
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kPrecondition, "duplicate vocab token " + tokens_[i]);
    }
  }
}

int Vocab::Id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() || it->second < 2 ? kUnknownId : it->second;
}

Vocab BuildVocab(const std::vector<Fragment>& train, int max_size) {
  if (max_size < 3) throw Error(ErrorCode::kPrecondition, "vocab max-size must be >= 3");
  std::map<std::string, int64_t> counts;
  for (const auto& f : train) {
    if (f.split != Split::kTrain) {
      throw Error(ErrorCode::kPrecondition,
                  "vocab leakage: fragment " + f.id + " is not from the training split");
    }
    for (const auto& t : Normalize(f.tokens)) ++counts[t];
  }
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{"<pad>", "<unk>"};
  for (const auto& [token, n] : ranked) {
    if (static_cast<int>(tokens.size()) >= max_size) break;
    tokens.push_back(token);
  }
  return Vocab(std::move(tokens));
}

EncodedExample Encode(const Fragment& fragment, const Vocab& vocab, int length) {
  if (length < 1) throw Error(ErrorCode::kPrecondition, "sequence length must be >= 1");
  EncodedExample e;
  e.fragment_id = fragment.id;
  e.population = fragment.population;
  e.label = fragment.label;
  e.ids.assign(static_cast<size_t>(length), kPadId);
  const auto normalized = Normalize(fragment.tokens);
  const size_t n = std::min(normalized.size(), static_cast<size_t>(length));
  for (size_t i = 0; i < n; ++i) e.ids[i] = vocab.Id(normalized[i]);
  return e;
}

std::vector<EncodedExample> EncodeAll(const std::vector<Fragment>& fragments,
                                      const Vocab& vocab, int length) {
  std::vector<EncodedExample> out;
  out.reserve(fragments.size());
  for (const auto& f : fragments) out.push_back(Encode(f, vocab, length));
  return out;
}

void SaveDataset(const std::vector<EncodedExample>& examples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  for (const auto& e : examples) {
    nlohmann::json record = nlohmann::json::array(
        {kDatasetVersion, e.fragment_id, PopulationName(e.population), e.label, e.ids});
    out << record.dump() << '\n';
  }
}

std::vector<EncodedExample> LoadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + path);
  std::vector<EncodedExample> out;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const std::string where = "dataset line " + std::to_string(line);
    try {
      auto r = nlohmann::json::parse(text);
      if (!r.is_array() || r.size() != 5) {
        throw Error(ErrorCode::kMalformedRecord, where + ": expected 5 fields");
      }
      if (r[0].get<int>() != kDatasetVersion) {
        throw Error(ErrorCode::kVersionMismatch, where + ": version " + r[0].dump());
      }
      EncodedExample e;
      e.fragment_id = r[1].get<std::string>();
      const std::string tag = r[2].get<std::string>();
      if (tag != "X" && tag != "X'") throw Error(ErrorCode::kMalformedRecord, where + ": tag");
      e.population = tag == "X" ? Population::kX : Population::kXPrime;
      e.label = r[3].get<int>();
      e.ids = r[4].get<std::vector<int>>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kMalformedRecord, where + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace zz

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

#ifndef ZZ_TRANSFORM_H_
#define ZZ_TRANSFORM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zz/ast.h"

namespace zz {

// The eight semantics-preserving transformations, in their canonical order.
enum class TransformKind {
  kEncodeStrings = 1,
  kRndArgs,
  kFlatten,
  kMergeSimple,
  kMergeFlatten,
  kSplitTop,
  kSplitBlock,
  kSplitRecursive,
};

inline constexpr std::array<TransformKind, 8> kAllTransforms = {
    TransformKind::kEncodeStrings, TransformKind::kRndArgs,
    TransformKind::kFlatten,       TransformKind::kMergeSimple,
    TransformKind::kMergeFlatten,  TransformKind::kSplitTop,
    TransformKind::kSplitBlock,    TransformKind::kSplitRecursive};

// "EncodeStrings", "RndArgs", ...
const char* TransformName(TransformKind kind);
// "CT-1" ... "CT-8".
std::string TransformLabel(TransformKind kind);
// Accepts ct1, ct-1, CT-1 or the transform name, case-insensitively.
std::optional<TransformKind> ParseTransformKind(std::string_view text);

class TransformSet {
 public:
  TransformSet() = default;
  // Throws Error(kPrecondition) on duplicates.
  explicit TransformSet(const std::vector<TransformKind>& kinds);

  static TransformSet All();
  // Defender instances md0 (empty) through md5 (all eight).
  static TransformSet Named(int index);
  // "all", "none", "md0".."md5" or a comma-separated list of kinds.
  // Throws Error(kUsage) on unknown names.
  static TransformSet Parse(std::string_view text);

  bool Contains(TransformKind kind) const;
  bool empty() const { return kinds_.empty(); }
  size_t size() const { return kinds_.size(); }
  const std::vector<TransformKind>& kinds() const { return kinds_; }
  // Comma-separated lower-case labels, e.g. "ct2,ct7,ct8".
  std::string ToString() const;

  bool operator==(const TransformSet& other) const = default;

 private:
  std::vector<TransformKind> kinds_;
};

struct TransformResult {
  Ast ast;
  LineMap line_map;
};

// Entry point every transform preserves.
inline constexpr const char* kEntryFunction = "main";

bool IsApplicable(const Ast& ast, TransformKind kind);

// Applies one transform. The input must carry unique nonzero LineIds (as
// produced by Parse). The result is renumbered; its line map relates every
// input line to its images. Throws Error(kInapplicable) when the program
// has no site for `kind`.
TransformResult ApplyTransform(const Ast& ast, TransformKind kind,
                               uint64_t seed);

// Sequential application with per-stage derived seeds; inapplicable stages
// are skipped. Throws Error(kInapplicable) only if every stage is.
TransformResult ApplyPipeline(const Ast& ast,
                              const std::vector<TransformKind>& kinds,
                              uint64_t seed);

// Relation composition: first, then second.
LineMap ComposeLineMaps(const LineMap& first, const LineMap& second);

}  // namespace zz

#endif  // ZZ_TRANSFORM_H_

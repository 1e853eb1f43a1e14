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

#ifndef ZZ_COMMON_H_
#define ZZ_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zz {

enum class ErrorCode {
  kSyntax,
  kUndeclared,
  kUnknownEntry,
  kInapplicable,
  kPrecondition,
  kMalformedRecord,
  kVersionMismatch,
  kFingerprintMismatch,
  kShapeMismatch,
  kDivergence,
  kNonFiniteGradient,
  kCorpusMismatch,
  kUsage,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type for the whole workbench; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Source errors (syntax, undeclared names) carry the 1-based source position of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message,
              ErrorCode code = ErrorCode::kSyntax);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Portable deterministic random source. The standard distributions are
// implementation-defined, so every draw used by the workbench goes through
// these helpers on top of the raw 64-bit SplitMix/xoshiro stream.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();
  // Uniform in [0, bound). bound must be positive.
  uint64_t Below(uint64_t bound);
  // Uniform integer in [lo, hi].
  int64_t Range(int64_t lo, int64_t hi);
  // Uniform double in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t state_[4];
};

uint64_t SplitMix64(uint64_t x);

// Derives an independent seed for a named sub-stream.
uint64_t DeriveSeed(uint64_t seed, std::string_view tag);
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

uint64_t Fnv1a64(std::string_view bytes);
std::string HexDigest(uint64_t value);

}  // namespace zz

#endif  // ZZ_COMMON_H_

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

#include "zz/common.h"

#include <cmath>
#include <cstdio>

namespace zz {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax:
      return "syntax-error";
    case ErrorCode::kUndeclared:
      return "use-of-undeclared-identifier";
    case ErrorCode::kUnknownEntry:
      return "unknown-entry";
    case ErrorCode::kInapplicable:
      return "inapplicable";
    case ErrorCode::kPrecondition:
      return "precondition-violation";
    case ErrorCode::kMalformedRecord:
      return "malformed-record";
    case ErrorCode::kVersionMismatch:
      return "version-mismatch";
    case ErrorCode::kFingerprintMismatch:
      return "fingerprint-mismatch";
    case ErrorCode::kShapeMismatch:
      return "shape-mismatch";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kNonFiniteGradient:
      return "nonfinite-gradient";
    case ErrorCode::kCorpusMismatch:
      return "corpus-mismatch";
    case ErrorCode::kUsage:
      return "usage-error";
  }
  return "unknown";
}

SyntaxError::SyntaxError(int line, int column, const std::string& message,
                         ErrorCode code)
    : Error(code, std::to_string(line) + ":" +
                                    std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed) {
  uint64_t s = seed;
  for (auto& word : state_) {
    s = SplitMix64(s);
    word = s;
  }
}

namespace {
inline uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

// xoshiro256**
uint64_t Rng::NextU64() {
  const uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

uint64_t Rng::Below(uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kPrecondition, "Rng::Below requires bound > 0");
  }
  // Rejection sampling keeps the draw unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % bound;
}

int64_t Rng::Range(int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(Below(static_cast<uint64_t>(hi - lo) + 1));
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t DeriveSeed(uint64_t seed, std::string_view tag) {
  return SplitMix64(seed ^ Fnv1a64(tag));
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return SplitMix64(SplitMix64(seed) + index);
}

std::string HexDigest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace zz

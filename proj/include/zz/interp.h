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

#ifndef ZZ_INTERP_H_
#define ZZ_INTERP_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zz/ast.h"

namespace zz {

// Values observable through output().
using OutputValue = std::variant<int64_t, std::string>;

std::string OutputToString(const OutputValue& value);

enum class ExecStatus { kCompleted, kRuntimeError, kFuelExhausted };

enum class RuntimeErrorKind {
  kNone,
  kOutOfBounds,
  kDivisionByZero,
  kInputExhausted,
  kTypeError,
  kCallDepth,
};

const char* ExecStatusName(ExecStatus status);
const char* RuntimeErrorName(RuntimeErrorKind kind);

struct ExecResult {
  std::vector<OutputValue> outputs;
  ExecStatus status = ExecStatus::kCompleted;
  RuntimeErrorKind error = RuntimeErrorKind::kNone;
  // Innermost statement executing when the error trapped; kNoLine otherwise.
  LineId trap_line = kNoLine;
  int64_t steps_used = 0;
};

struct InterpOptions {
  int max_call_depth = 256;
};

// Runs `entry` with the given input stream. Every executed statement and
// every loop-condition evaluation costs one step. Entry parameters, if any,
// start at 0. Throws Error(kUnknownEntry) if `entry` is not defined.
ExecResult Interpret(const Ast& ast, const std::string& entry,
                     const std::vector<int64_t>& inputs, int64_t fuel,
                     const InterpOptions& options = {});

// Same observable behavior: equal outputs, status and error kind.
bool SameBehavior(const ExecResult& a, const ExecResult& b);

}  // namespace zz

#endif  // ZZ_INTERP_H_

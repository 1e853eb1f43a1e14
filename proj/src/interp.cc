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

#include "zz/interp.h"

#include <memory>
#include <unordered_map>
#include <utility>

#include "zz/common.h"

namespace zz {

namespace {

struct Value;
using ArrayRef = std::shared_ptr<std::vector<Value>>;

struct Value {
  std::variant<int64_t, std::string, ArrayRef> v = int64_t{0};
};

struct Trap {
  RuntimeErrorKind kind;
};

struct OutOfFuel {};

class Machine {
 public:
  Machine(const Ast& ast, const std::vector<int64_t>& inputs, int64_t fuel,
          const InterpOptions& options)
      : ast_(ast), inputs_(inputs), fuel_(fuel), options_(options) {
    for (const auto& fn : ast.functions) functions_[fn.name] = &fn;
  }

  ExecResult Run(const std::string& entry) {
    auto it = functions_.find(entry);
    if (it == functions_.end()) {
      throw Error(ErrorCode::kUnknownEntry, "unknown entry '" + entry + "'");
    }
    std::vector<Value> args(it->second->params.size());
    try {
      CallFunction(*it->second, std::move(args));
      result_.status = ExecStatus::kCompleted;
    } catch (const Trap& trap) {
      result_.status = ExecStatus::kRuntimeError;
      result_.error = trap.kind;
      result_.trap_line = current_line_;
    } catch (const OutOfFuel&) {
      result_.status = ExecStatus::kFuelExhausted;
    }
    result_.steps_used = steps_;
    return std::move(result_);
  }

 private:
  using Frame = std::unordered_map<std::string, Value>;

  enum class Flow { kNormal, kReturn };

  void Step(const Stmt& s) {
    if (steps_ >= fuel_) throw OutOfFuel{};
    ++steps_;
    current_line_ = s.line;
  }

  Value CallFunction(const FunctionDef& fn, std::vector<Value> args) {
    if (depth_ >= options_.max_call_depth) throw Trap{RuntimeErrorKind::kCallDepth};
    ++depth_;
    Frame frame;
    for (size_t i = 0; i < fn.params.size(); ++i) {
      frame[fn.params[i]] = std::move(args[i]);
    }
    Value ret;
    ExecBlock(fn.body, frame, &ret);
    --depth_;
    return ret;
  }

  Flow ExecBlock(const std::vector<Stmt>& stmts, Frame& frame, Value* ret) {
    for (const auto& s : stmts) {
      if (Exec(s, frame, ret) == Flow::kReturn) return Flow::kReturn;
    }
    return Flow::kNormal;
  }

  Flow Exec(const Stmt& s, Frame& frame, Value* ret) {
    Step(s);
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
      case Stmt::Kind::kAssign: {
        Value v = Eval(s.exprs[0], frame);
        frame[s.name] = std::move(v);
        return Flow::kNormal;
      }
      case Stmt::Kind::kArrayDecl:
        frame[s.name].v = std::make_shared<std::vector<Value>>(
            static_cast<size_t>(s.array_size));
        return Flow::kNormal;
      case Stmt::Kind::kIndexAssign: {
        ArrayRef arr = AsArray(Lookup(frame, s.name));
        const int64_t idx = AsInt(Eval(s.exprs[0], frame));
        Value v = Eval(s.exprs[1], frame);
        current_line_ = s.line;
        CheckBounds(*arr, idx);
        (*arr)[static_cast<size_t>(idx)] = std::move(v);
        return Flow::kNormal;
      }
      case Stmt::Kind::kCall:
        Eval(s.exprs[0], frame);
        return Flow::kNormal;
      case Stmt::Kind::kReturn:
        *ret = s.exprs.empty() ? Value{} : Eval(s.exprs[0], frame);
        return Flow::kReturn;
      case Stmt::Kind::kIf:
        if (Truthy(Eval(s.exprs[0], frame))) {
          return ExecBlock(s.body, frame, ret);
        }
        return ExecBlock(s.else_body, frame, ret);
      case Stmt::Kind::kWhile:
        while (true) {
          if (!Truthy(Eval(s.exprs[0], frame))) return Flow::kNormal;
          if (ExecBlock(s.body, frame, ret) == Flow::kReturn) {
            return Flow::kReturn;
          }
          Step(s);
        }
      case Stmt::Kind::kFor: {
        if (Exec(s.header[0], frame, ret) == Flow::kReturn) return Flow::kReturn;
        while (true) {
          Step(s);
          if (!Truthy(Eval(s.exprs[0], frame))) return Flow::kNormal;
          if (ExecBlock(s.body, frame, ret) == Flow::kReturn) {
            return Flow::kReturn;
          }
          Exec(s.header[1], frame, ret);
        }
      }
    }
    return Flow::kNormal;
  }

  const Value& Lookup(Frame& frame, const std::string& name) {
    auto it = frame.find(name);
    // Reads of a declared-but-unassigned name see 0; the parser rules out
    // everything else.
    if (it == frame.end()) return frame[name];
    return it->second;
  }

  static int64_t AsInt(const Value& v) {
    if (const auto* i = std::get_if<int64_t>(&v.v)) return *i;
    throw Trap{RuntimeErrorKind::kTypeError};
  }

  static ArrayRef AsArray(const Value& v) {
    if (const auto* a = std::get_if<ArrayRef>(&v.v)) return *a;
    throw Trap{RuntimeErrorKind::kTypeError};
  }

  static bool Truthy(const Value& v) { return AsInt(v) != 0; }

  static void CheckBounds(const std::vector<Value>& arr, int64_t idx) {
    if (idx < 0 || static_cast<uint64_t>(idx) >= arr.size()) {
      throw Trap{RuntimeErrorKind::kOutOfBounds};
    }
  }

  static int64_t Wrap(uint64_t x) { return static_cast<int64_t>(x); }

  Value Eval(const Expr& e, Frame& frame) {
    switch (e.kind) {
      case Expr::Kind::kInt:
        return Value{e.int_value};
      case Expr::Kind::kStr:
        return Value{e.text};
      case Expr::Kind::kVar:
        return Lookup(frame, e.text);
      case Expr::Kind::kIndex: {
        ArrayRef arr = AsArray(Lookup(frame, e.text));
        const int64_t idx = AsInt(Eval(e.args[0], frame));
        CheckBounds(*arr, idx);
        return (*arr)[static_cast<size_t>(idx)];
      }
      case Expr::Kind::kUnary: {
        const int64_t x = AsInt(Eval(e.args[0], frame));
        if (e.un_op == UnOp::kNeg) return Value{Wrap(0 - static_cast<uint64_t>(x))};
        return Value{int64_t{x == 0}};
      }
      case Expr::Kind::kBinary:
        return EvalBinary(e, frame);
      case Expr::Kind::kCall:
        return EvalCall(e, frame);
    }
    return Value{};
  }

  Value EvalBinary(const Expr& e, Frame& frame) {
    if (e.bin_op == BinOp::kAnd) {
      if (!Truthy(Eval(e.args[0], frame))) return Value{int64_t{0}};
      return Value{int64_t{Truthy(Eval(e.args[1], frame))}};
    }
    if (e.bin_op == BinOp::kOr) {
      if (Truthy(Eval(e.args[0], frame))) return Value{int64_t{1}};
      return Value{int64_t{Truthy(Eval(e.args[1], frame))}};
    }
    Value lhs = Eval(e.args[0], frame);
    Value rhs = Eval(e.args[1], frame);
    const auto* ls = std::get_if<std::string>(&lhs.v);
    const auto* rs = std::get_if<std::string>(&rhs.v);
    if (ls != nullptr || rs != nullptr) {
      if (ls == nullptr || rs == nullptr) throw Trap{RuntimeErrorKind::kTypeError};
      switch (e.bin_op) {
        case BinOp::kAdd:
          return Value{*ls + *rs};
        case BinOp::kEq:
          return Value{int64_t{*ls == *rs}};
        case BinOp::kNe:
          return Value{int64_t{*ls != *rs}};
        default:
          throw Trap{RuntimeErrorKind::kTypeError};
      }
    }
    const int64_t a = AsInt(lhs);
    const int64_t b = AsInt(rhs);
    const auto ua = static_cast<uint64_t>(a);
    const auto ub = static_cast<uint64_t>(b);
    switch (e.bin_op) {
      case BinOp::kAdd:
        return Value{Wrap(ua + ub)};
      case BinOp::kSub:
        return Value{Wrap(ua - ub)};
      case BinOp::kMul:
        return Value{Wrap(ua * ub)};
      case BinOp::kDiv:
      case BinOp::kMod:
        if (b == 0) throw Trap{RuntimeErrorKind::kDivisionByZero};
        if (a == INT64_MIN && b == -1) {
          return Value{e.bin_op == BinOp::kDiv ? a : int64_t{0}};
        }
        return Value{e.bin_op == BinOp::kDiv ? a / b : a % b};
      case BinOp::kLt:
        return Value{int64_t{a < b}};
      case BinOp::kLe:
        return Value{int64_t{a <= b}};
      case BinOp::kGt:
        return Value{int64_t{a > b}};
      case BinOp::kGe:
        return Value{int64_t{a >= b}};
      case BinOp::kEq:
        return Value{int64_t{a == b}};
      case BinOp::kNe:
        return Value{int64_t{a != b}};
      default:
        break;
    }
    return Value{};
  }

  Value EvalCall(const Expr& e, Frame& frame) {
    if (e.text == "input") {
      if (next_input_ >= inputs_.size()) {
        throw Trap{RuntimeErrorKind::kInputExhausted};
      }
      return Value{inputs_[next_input_++]};
    }
    if (e.text == "output") {
      Value v = Eval(e.args[0], frame);
      if (const auto* i = std::get_if<int64_t>(&v.v)) {
        result_.outputs.emplace_back(*i);
      } else if (const auto* s = std::get_if<std::string>(&v.v)) {
        result_.outputs.emplace_back(*s);
      } else {
        throw Trap{RuntimeErrorKind::kTypeError};
      }
      return Value{};
    }
    if (e.text == "chr") {
      const int64_t code = AsInt(Eval(e.args[0], frame));
      if (code < 0 || code > 255) throw Trap{RuntimeErrorKind::kTypeError};
      return Value{std::string(1, static_cast<char>(code))};
    }
    auto it = functions_.find(e.text);
    const FunctionDef& fn = *it->second;
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(Eval(a, frame));
    const LineId caller_line = current_line_;
    Value ret = CallFunction(fn, std::move(args));
    current_line_ = caller_line;
    return ret;
  }

  const Ast& ast_;
  const std::vector<int64_t>& inputs_;
  size_t next_input_ = 0;
  int64_t fuel_;
  int64_t steps_ = 0;
  int depth_ = 0;
  LineId current_line_ = kNoLine;
  InterpOptions options_;
  std::unordered_map<std::string, const FunctionDef*> functions_;
  ExecResult result_;
};

}  // namespace

std::string OutputToString(const OutputValue& value) {
  if (const auto* i = std::get_if<int64_t>(&value)) return std::to_string(*i);
  return std::get<std::string>(value);
}

const char* ExecStatusName(ExecStatus status) {
  switch (status) {
    case ExecStatus::kCompleted:
      return "completed";
    case ExecStatus::kRuntimeError:
      return "runtime-error";
    case ExecStatus::kFuelExhausted:
      return "fuel-exhausted";
  }
  return "?";
}

const char* RuntimeErrorName(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::kNone:
      return "none";
    case RuntimeErrorKind::kOutOfBounds:
      return "out-of-bounds";
    case RuntimeErrorKind::kDivisionByZero:
      return "division-by-zero";
    case RuntimeErrorKind::kInputExhausted:
      return "input-exhausted";
    case RuntimeErrorKind::kTypeError:
      return "type-error";
    case RuntimeErrorKind::kCallDepth:
      return "call-depth-exceeded";
  }
  return "?";
}

ExecResult Interpret(const Ast& ast, const std::string& entry,
                     const std::vector<int64_t>& inputs, int64_t fuel,
                     const InterpOptions& options) {
  if (fuel <= 0) throw Error(ErrorCode::kPrecondition, "fuel must be positive");
  Machine machine(ast, inputs, fuel, options);
  return machine.Run(entry);
}

bool SameBehavior(const ExecResult& a, const ExecResult& b) {
  return a.outputs == b.outputs && a.status == b.status && a.error == b.error;
}

}  // namespace zz

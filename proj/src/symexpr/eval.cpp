// Copyright 2026 The pfida Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "node.hpp"
#include "pfida/program.hpp"

namespace pfida {

double apply_function(Function f, double x) {
  switch (f) {
    case Function::kSin: return std::sin(x);
    case Function::kCos: return std::cos(x);
    case Function::kTan: return std::tan(x);
    case Function::kLn:
      if (!(x > 0)) fail(ErrorCode::kDomain, "ln of non-positive value");
      return std::log(x);
    case Function::kExp: return std::exp(x);
    case Function::kSqrt:
      if (x < 0) fail(ErrorCode::kDomain, "sqrt of negative value");
      return std::sqrt(x);
    case Function::kAbs: return std::fabs(x);
  }
  return std::nan("");
}

double checked_div(double a, double b) {
  if (b == 0.0) fail(ErrorCode::kDomain, "division by zero");
  return a / b;
}

double checked_pow(double a, double b) {
  if (a == 0.0 && b < 0) fail(ErrorCode::kDomain, "division by zero");
  double r = std::pow(a, b);
  if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) {
    fail(ErrorCode::kDomain, "non-real power");
  }
  return r;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Bindings& b) : b_(b) {}

  double run(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kNumber: return e.value();
      case NodeKind::kSymbol: {
        auto it = b_.find(e.name());
        if (it != b_.end()) return it->second;
        if (e.name() == "pi") return std::numbers::pi;
        fail(ErrorCode::kUnboundSymbol, "unbound symbol '" + e.name() + "'");
      }
      default: break;
    }
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    double v = 0.0;
    if (e.kind() == NodeKind::kNegate) {
      v = -run(e.operand());
    } else if (e.kind() == NodeKind::kCall) {
      v = apply_function(e.function(), run(e.operand()));
    } else {
      double l = run(e.lhs());
      double r = run(e.rhs());
      switch (e.op()) {
        case BinaryOp::kAdd: v = l + r; break;
        case BinaryOp::kSub: v = l - r; break;
        case BinaryOp::kMul: v = l * r; break;
        case BinaryOp::kDiv: v = checked_div(l, r); break;
        case BinaryOp::kPow: v = checked_pow(l, r); break;
      }
    }
    memo_.emplace(e.id(), v);
    return v;
  }

 private:
  const Bindings& b_;
  std::unordered_map<const Expr::Node*, double> memo_;
};

}  // namespace

double eval(const Expr& e, const Bindings& b) { return Evaluator(b).run(e); }

namespace {

class Compiler {
 public:
  Compiler(const std::vector<std::string>& slots, std::vector<Program::Instr>& code)
      : slots_(slots), code_(code) {}

  int lower(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    int reg = 0;
    switch (e.kind()) {
      case NodeKind::kNumber:
        reg = constant(e.value());
        break;
      case NodeKind::kSymbol: {
        auto it = inputs_.find(e.name());
        if (it != inputs_.end()) {
          reg = it->second;
          break;
        }
        int slot = -1;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
          if (slots_[i] == e.name()) slot = static_cast<int>(i);
        }
        if (slot < 0) {
          if (e.name() != "pi") {
            fail(ErrorCode::kUnboundSymbol, "unbound symbol '" + e.name() + "'");
          }
          reg = constant(std::numbers::pi);
        } else {
          reg = emit({Program::Op::kInput, Function::kSin, slot, 0, 0.0});
        }
        inputs_.emplace(e.name(), reg);
        break;
      }
      case NodeKind::kNegate:
        reg = emit({Program::Op::kNeg, Function::kSin, lower(e.operand()), 0, 0.0});
        break;
      case NodeKind::kCall:
        reg = emit({Program::Op::kCall, e.function(), lower(e.operand()), 0, 0.0});
        break;
      case NodeKind::kBinary: {
        int a = lower(e.lhs());
        int b = lower(e.rhs());
        Program::Op op = Program::Op::kAdd;
        switch (e.op()) {
          case BinaryOp::kAdd: op = Program::Op::kAdd; break;
          case BinaryOp::kSub: op = Program::Op::kSub; break;
          case BinaryOp::kMul: op = Program::Op::kMul; break;
          case BinaryOp::kDiv: op = Program::Op::kDiv; break;
          case BinaryOp::kPow: op = Program::Op::kPow; break;
        }
        reg = emit({op, Function::kSin, a, b, 0.0});
        break;
      }
    }
    memo_.emplace(e.id(), reg);
    return reg;
  }

 private:
  int emit(Program::Instr ins) {
    code_.push_back(ins);
    return static_cast<int>(code_.size() - 1);
  }

  int constant(double v) {
    auto it = constants_.find(v);
    if (it != constants_.end()) return it->second;
    int reg = emit({Program::Op::kConst, Function::kSin, 0, 0, v});
    constants_.emplace(v, reg);
    return reg;
  }

  const std::vector<std::string>& slots_;
  std::vector<Program::Instr>& code_;
  std::unordered_map<const Expr::Node*, int> memo_;
  std::unordered_map<std::string, int> inputs_;
  std::unordered_map<double, int> constants_;
};

}  // namespace

Program::Program(std::span<const Expr> outputs, std::vector<std::string> slots)
    : slots_(std::move(slots)) {
  Compiler compiler(slots_, code_);
  outputs_.reserve(outputs.size());
  for (const Expr& e : outputs) outputs_.push_back(compiler.lower(e));
  regs_.resize(code_.size());
}

void Program::run(std::span<const double> inputs, std::span<double> outputs) const {
  if (inputs.size() != slots_.size()) {
    fail(ErrorCode::kDimension, "program expects " + std::to_string(slots_.size()) + " inputs");
  }
  if (outputs.size() != outputs_.size()) {
    fail(ErrorCode::kDimension, "program produces " + std::to_string(outputs_.size()) + " outputs");
  }
  double* r = regs_.data();
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.op) {
      case Op::kConst: r[i] = in.c; break;
      case Op::kInput: r[i] = inputs[in.a]; break;
      case Op::kAdd: r[i] = r[in.a] + r[in.b]; break;
      case Op::kSub: r[i] = r[in.a] - r[in.b]; break;
      case Op::kMul: r[i] = r[in.a] * r[in.b]; break;
      case Op::kDiv: r[i] = checked_div(r[in.a], r[in.b]); break;
      case Op::kPow: r[i] = checked_pow(r[in.a], r[in.b]); break;
      case Op::kNeg: r[i] = -r[in.a]; break;
      case Op::kCall: r[i] = apply_function(in.fn, r[in.a]); break;
    }
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) outputs[k] = r[outputs_[k]];
}

std::vector<double> Program::run(std::span<const double> inputs) const {
  std::vector<double> out(outputs_.size());
  run(inputs, out);
  return out;
}

}  // namespace pfida

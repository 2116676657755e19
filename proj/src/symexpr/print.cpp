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

#include <charconv>
#include <cmath>
#include <string>

#include "pfida/expr.hpp"

namespace pfida {
namespace {

// sum 1, product 2, unary 3, power 4, atom 5
int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kNumber: return e.value() < 0 ? 3 : 5;
    case NodeKind::kSymbol:
    case NodeKind::kCall: return 5;
    case NodeKind::kNegate: return 3;
    case NodeKind::kBinary:
      switch (e.op()) {
        case BinaryOp::kAdd:
        case BinaryOp::kSub: return 1;
        case BinaryOp::kMul:
        case BinaryOp::kDiv: return 2;
        case BinaryOp::kPow: return 4;
      }
  }
  return 5;
}

void format_number(double v, std::string& out) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  if (std::isinf(v)) {
    out += v < 0 ? "-inf" : "inf";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void emit(const Expr& e, std::string& out);

void emit_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(e, out);
  if (parens) out += ')';
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::kNumber:
      format_number(e.value(), out);
      return;
    case NodeKind::kSymbol:
      out += e.name();
      return;
    case NodeKind::kCall:
      out += function_name(e.function());
      out += '(';
      emit(e.operand(), out);
      out += ')';
      return;
    case NodeKind::kNegate:
      out += '-';
      emit_wrapped(e.operand(), precedence(e.operand()) <= 3, out);
      return;
    case NodeKind::kBinary:
      break;
  }
  int pl = precedence(e.lhs());
  int pr = precedence(e.rhs());
  switch (e.op()) {
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      emit(e.lhs(), out);
      out += e.op() == BinaryOp::kAdd ? " + " : " - ";
      emit_wrapped(e.rhs(), pr <= 1 || pr == 3, out);
      return;
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
      emit_wrapped(e.lhs(), pl <= 1, out);
      out += e.op() == BinaryOp::kMul ? '*' : '/';
      emit_wrapped(e.rhs(), pr <= 3, out);
      return;
    case BinaryOp::kPow:
      emit_wrapped(e.lhs(), pl <= 4, out);
      out += '^';
      emit_wrapped(e.rhs(), pr <= 3, out);
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  emit(e, out);
  return out;
}

}  // namespace pfida

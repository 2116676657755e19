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

#include "pfida/expr.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "node.hpp"

namespace pfida {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kUnboundSymbol: return "UnboundSymbol";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kNotInCatalog: return "NotInCatalog";
    case ErrorCode::kDimension: return "DimensionError";
    case ErrorCode::kNotExact: return "NotExact";
    case ErrorCode::kNotIntegrable: return "NotIntegrable";
    case ErrorCode::kStage1Unsolvable: return "Stage1Unsolvable";
    case ErrorCode::kStage4Unsolvable: return "Stage4Unsolvable";
    case ErrorCode::kParameterizationFailed: return "ParameterizationFailed";
    case ErrorCode::kHypothesisViolated: return "HypothesisViolated";
    case ErrorCode::kNotAffine: return "NotAffine";
    case ErrorCode::kSingularInput: return "SingularInput";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDomainEscape: return "DomainEscape";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kUnknownCase: return "UnknownCase";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

constexpr struct {
  const char* name;
  Function fn;
} kFunctions[] = {
    {"sin", Function::kSin}, {"cos", Function::kCos}, {"tan", Function::kTan},
    {"ln", Function::kLn},   {"exp", Function::kExp}, {"sqrt", Function::kSqrt},
    {"abs", Function::kAbs},
};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const Expr& zero_expr() {
  static const Expr z = Expr::number(0.0);
  return z;
}

}  // namespace

const char* function_name(Function f) {
  for (const auto& entry : kFunctions) {
    if (entry.fn == f) return entry.name;
  }
  return "?";
}

bool lookup_function(std::string_view name, Function& out) {
  for (const auto& entry : kFunctions) {
    if (name == entry.name) {
      out = entry.fn;
      return true;
    }
  }
  return false;
}

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name.substr(1)) {
    if (!alpha(c) && !digit(c)) return false;
  }
  return true;
}

Expr::Expr() : node_(zero_expr().node_) {}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNumber;
  n->value = v == 0.0 ? 0.0 : v;  // fold -0 into 0
  n->hash = mix(1, std::hash<double>{}(n->value));
  return Expr(std::move(n));
}

Expr Expr::symbol(std::string name) {
  if (!is_valid_symbol_name(name)) {
    fail(ErrorCode::kInvalidArgument, "invalid symbol name '" + name + "'");
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kSymbol;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kBinary;
  n->op = op;
  n->hash = mix(mix(mix(3, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNegate;
  n->hash = mix(4, operand.hash());
  n->children[0] = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::call(Function f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kCall;
  n->fn = f;
  n->hash = mix(mix(5, static_cast<std::size_t>(f)), arg.hash());
  n->children[0] = std::move(arg);
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::op() const { return node_->op; }
Function Expr::function() const { return node_->fn; }
const Expr& Expr::lhs() const { return node_->children[0]; }
const Expr& Expr::rhs() const { return node_->children[1]; }
const Expr& Expr::operand() const { return node_->children[0]; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::kNumber:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case NodeKind::kSymbol: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::kBinary: {
      if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
      int c = compare(a.lhs(), b.lhs());
      return c != 0 ? c : compare(a.rhs(), b.rhs());
    }
    case NodeKind::kNegate:
      return compare(a.operand(), b.operand());
    case NodeKind::kCall:
      if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
      return compare(a.operand(), b.operand());
  }
  return 0;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return num(a.value() + b.value());
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (b.kind() == NodeKind::kNegate) return Expr::binary(BinaryOp::kSub, a, b.operand());
  if (b.is_number() && b.value() < 0) return Expr::binary(BinaryOp::kSub, a, num(-b.value()));
  return Expr::binary(BinaryOp::kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return num(a.value() - b.value());
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  if (a == b) return num(0.0);
  if (b.kind() == NodeKind::kNegate) return Expr::binary(BinaryOp::kAdd, a, b.operand());
  return Expr::binary(BinaryOp::kSub, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_number()) return num(-a.value());
  if (a.kind() == NodeKind::kNegate) return a.operand();
  return Expr::negate(a);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return num(a.value() * b.value());
  if (a.is_number(0.0) || b.is_number(0.0)) return num(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  if (a.kind() == NodeKind::kNegate) return -(a.operand() * b);
  if (b.kind() == NodeKind::kNegate) return -(a * b.operand());
  if (b.is_number() && !a.is_number()) return Expr::binary(BinaryOp::kMul, b, a);
  return Expr::binary(BinaryOp::kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number() && b.value() != 0.0) return num(a.value() / b.value());
  if (a.is_number(0.0) && !b.is_number(0.0)) return num(0.0);
  if (b.is_number(1.0)) return a;
  if (b.is_number(-1.0)) return -a;
  if (a == b && !b.is_number(0.0)) return num(1.0);
  if (a.kind() == NodeKind::kNegate) return -(a.operand() / b);
  if (b.kind() == NodeKind::kNegate) return -(a / b.operand());
  return Expr::binary(BinaryOp::kDiv, a, b);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_number(0.0)) return num(1.0);
  if (exponent.is_number(1.0)) return base;
  if (base.is_number() && exponent.is_number()) {
    double v = std::pow(base.value(), exponent.value());
    if (std::isfinite(v)) return num(v);
  }
  return Expr::binary(BinaryOp::kPow, base, exponent);
}

Expr apply(Function f, const Expr& arg) {
  if (arg.is_number(0.0)) {
    switch (f) {
      case Function::kSin:
      case Function::kTan:
      case Function::kSqrt:
      case Function::kAbs: return num(0.0);
      case Function::kCos:
      case Function::kExp: return num(1.0);
      case Function::kLn: break;
    }
  }
  return Expr::call(f, arg);
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out,
                     std::unordered_set<const Expr::Node*>& seen) {
  if (!seen.insert(e.id()).second) return;
  switch (e.kind()) {
    case NodeKind::kNumber: return;
    case NodeKind::kSymbol:
      if (e.name() != "pi") out.insert(e.name());
      return;
    case NodeKind::kBinary:
      collect_symbols(e.lhs(), out, seen);
      collect_symbols(e.rhs(), out, seen);
      return;
    case NodeKind::kNegate:
    case NodeKind::kCall:
      collect_symbols(e.operand(), out, seen);
      return;
  }
}

bool depends_rec(const Expr& e, std::string_view var,
                 std::unordered_map<const Expr::Node*, bool>& memo) {
  switch (e.kind()) {
    case NodeKind::kNumber: return false;
    case NodeKind::kSymbol: return e.name() == var;
    default: break;
  }
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  bool r = e.kind() == NodeKind::kBinary
               ? depends_rec(e.lhs(), var, memo) || depends_rec(e.rhs(), var, memo)
               : depends_rec(e.operand(), var, memo);
  memo.emplace(e.id(), r);
  return r;
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  std::unordered_set<const Expr::Node*> seen;
  collect_symbols(e, out, seen);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  std::unordered_map<const Expr::Node*, bool> memo;
  return depends_rec(e, var, memo);
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<const Expr::Node*> seen;
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur->id()).second) continue;
    if (cur->kind() == NodeKind::kBinary) {
      stack.push_back(&cur->lhs());
      stack.push_back(&cur->rhs());
    } else if (cur->kind() == NodeKind::kNegate || cur->kind() == NodeKind::kCall) {
      stack.push_back(&cur->operand());
    }
  }
  return seen.size();
}

namespace {

Expr substitute_rec(const Expr& e, const std::map<std::string, Expr, std::less<>>& rep,
                    std::unordered_map<const Expr::Node*, Expr>& memo) {
  switch (e.kind()) {
    case NodeKind::kNumber: return e;
    case NodeKind::kSymbol: {
      if (e.name() == "pi") return e;
      auto it = rep.find(e.name());
      return it == rep.end() ? e : it->second;
    }
    default: break;
  }
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr out;
  if (e.kind() == NodeKind::kBinary) {
    Expr l = substitute_rec(e.lhs(), rep, memo);
    Expr r = substitute_rec(e.rhs(), rep, memo);
    out = (l.id() == e.lhs().id() && r.id() == e.rhs().id()) ? e : Expr::binary(e.op(), l, r);
  } else {
    Expr o = substitute_rec(e.operand(), rep, memo);
    if (o.id() == e.operand().id()) {
      out = e;
    } else {
      out = e.kind() == NodeKind::kNegate ? Expr::negate(o) : Expr::call(e.function(), o);
    }
  }
  memo.emplace(e.id(), out);
  return out;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (replacements.empty()) return e;
  std::unordered_map<const Expr::Node*, Expr> memo;
  return substitute_rec(e, replacements, memo);
}

}  // namespace pfida

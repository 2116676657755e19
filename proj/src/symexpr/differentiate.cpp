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

#include <unordered_map>

#include "node.hpp"

namespace pfida {
namespace {

class Differentiator {
 public:
  explicit Differentiator(std::string_view var) : var_(var) {}

  Expr run(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kNumber: return num(0.0);
      case NodeKind::kSymbol: return num(e.name() == var_ ? 1.0 : 0.0);
      default: break;
    }
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr d = rule(e);
    memo_.emplace(e.id(), d);
    return d;
  }

 private:
  Expr rule(const Expr& e) {
    if (e.kind() == NodeKind::kNegate) return -run(e.operand());
    if (e.kind() == NodeKind::kCall) {
      const Expr& u = e.operand();
      Expr du = run(u);
      if (du.is_number(0.0)) return du;
      switch (e.function()) {
        case Function::kSin: return apply(Function::kCos, u) * du;
        case Function::kCos: return -(apply(Function::kSin, u) * du);
        case Function::kTan: return du / pow(apply(Function::kCos, u), num(2));
        case Function::kLn: return du / u;
        case Function::kExp: return e * du;
        case Function::kSqrt: return du / (num(2) * e);
        case Function::kAbs: return u / e * du;
      }
    }
    const Expr& u = e.lhs();
    const Expr& v = e.rhs();
    Expr du = run(u);
    Expr dv = run(v);
    switch (e.op()) {
      case BinaryOp::kAdd: return du + dv;
      case BinaryOp::kSub: return du - dv;
      case BinaryOp::kMul: return du * v + u * dv;
      case BinaryOp::kDiv:
        if (dv.is_number(0.0)) return du / v;
        return (du * v - u * dv) / pow(v, num(2));
      case BinaryOp::kPow:
        if (dv.is_number(0.0)) {
          if (du.is_number(0.0)) return num(0.0);
          Expr n_minus_1 = v.is_number() ? num(v.value() - 1.0) : v - num(1.0);
          return v * pow(u, n_minus_1) * du;
        }
        if (du.is_number(0.0)) return e * apply(Function::kLn, u) * dv;
        return e * (dv * apply(Function::kLn, u) + v * du / u);
    }
    return num(0.0);
  }

  std::string_view var_;
  std::unordered_map<const Expr::Node*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) { return Differentiator(var).run(e); }

std::vector<Expr> gradient(const Expr& e, std::span<const std::string> vars) {
  std::vector<Expr> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(differentiate(e, v));
  return out;
}

}  // namespace pfida

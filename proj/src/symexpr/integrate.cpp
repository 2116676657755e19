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
#include <random>
#include <vector>

#include "pfida/expr.hpp"

namespace pfida {
namespace {

struct Factor {
  Expr base;
  double exp;
};

[[noreturn]] void not_in_catalog(const Expr& e) {
  fail(ErrorCode::kNotInCatalog, "no catalog antiderivative for " + to_string(e));
}

void collect_terms(const Expr& e, double sign, std::vector<std::pair<Expr, double>>& out) {
  if (e.kind() == NodeKind::kBinary && (e.op() == BinaryOp::kAdd || e.op() == BinaryOp::kSub)) {
    collect_terms(e.lhs(), sign, out);
    collect_terms(e.rhs(), e.op() == BinaryOp::kAdd ? sign : -sign, out);
  } else if (e.kind() == NodeKind::kNegate) {
    collect_terms(e.operand(), -sign, out);
  } else {
    out.emplace_back(e, sign);
  }
}

void collect_factors(const Expr& e, double exponent, std::vector<Factor>& out) {
  if (e.kind() == NodeKind::kBinary && e.op() == BinaryOp::kMul) {
    collect_factors(e.lhs(), exponent, out);
    collect_factors(e.rhs(), exponent, out);
  } else if (e.kind() == NodeKind::kBinary && e.op() == BinaryOp::kDiv) {
    collect_factors(e.lhs(), exponent, out);
    collect_factors(e.rhs(), -exponent, out);
  } else if (e.kind() == NodeKind::kNegate) {
    out.push_back({num(-1.0), exponent});
    collect_factors(e.operand(), exponent, out);
  } else if (e.kind() == NodeKind::kBinary && e.op() == BinaryOp::kPow && e.rhs().is_number()) {
    out.push_back({e.lhs(), exponent * e.rhs().value()});
  } else if (e.kind() == NodeKind::kCall && e.function() == Function::kSqrt) {
    out.push_back({e.operand(), exponent * 0.5});
  } else {
    out.push_back({e, exponent});
  }
}

Expr factor_power(const Factor& f) {
  if (f.exp == 1.0) return f.base;
  return pow(f.base, num(f.exp));
}

// Returns the constant slope of `l` in `var`, or an empty optional-like flag.
bool linear_slope(const Expr& l, std::string_view var, Expr& slope) {
  if (!depends_on(l, var)) return false;
  slope = simplify(differentiate(l, var));
  return !depends_on(slope, var) && !slope.is_number(0.0);
}

class Integrator {
 public:
  explicit Integrator(std::string_view var) : var_(var), x_(sym(std::string(var))) {}

  Expr sum(const Expr& e) {
    std::vector<std::pair<Expr, double>> terms;
    collect_terms(e, 1.0, terms);
    Expr acc = num(0.0);
    for (const auto& [t, s] : terms) {
      Expr r = term(t);
      acc = s < 0 ? acc - r : acc + r;
    }
    return acc;
  }

 private:
  Expr term(const Expr& t) {
    if (!depends_on(t, var_)) return t * x_;
    std::vector<Factor> raw;
    collect_factors(t, 1.0, raw);
    Expr constant = num(1.0);
    std::vector<Factor> dep;
    for (const auto& f : raw) {
      if (!depends_on(f.base, var_)) {
        constant = constant * factor_power(f);
        continue;
      }
      bool merged = false;
      for (auto& d : dep) {
        if (d.base == f.base) {
          d.exp += f.exp;
          merged = true;
        }
      }
      if (!merged) dep.push_back(f);
    }
    std::erase_if(dep, [](const Factor& f) { return f.exp == 0.0; });
    if (dep.empty()) return t * x_;
    return constant * dependent(dep, t);
  }

  Expr dependent(const std::vector<Factor>& dep, const Expr& t) {
    if (dep.size() == 1) return single(dep[0], t);
    // Polynomial in var times one transcendental factor of a linear argument.
    int k = -1;
    const Factor* trans = nullptr;
    for (const auto& f : dep) {
      if (f.base == x_ && f.exp > 0 && f.exp == std::floor(f.exp) && k < 0) {
        k = static_cast<int>(f.exp);
      } else if (f.exp == 1.0 && f.base.kind() == NodeKind::kCall && trans == nullptr &&
                 (f.base.function() == Function::kExp || f.base.function() == Function::kSin ||
                  f.base.function() == Function::kCos)) {
        trans = &f;
      } else {
        not_in_catalog(t);
      }
    }
    if (trans == nullptr || k < 0 || k > 12) not_in_catalog(t);
    Expr poly = pow(x_, num(k));
    Expr fn = trans->base;
    Expr acc = num(0.0);
    double sign = 1.0;
    for (int i = 0; i <= k; ++i) {
      fn = sum(simplify(fn));
      Expr piece = poly * fn;
      acc = sign > 0 ? acc + piece : acc - piece;
      sign = -sign;
      poly = simplify(differentiate(poly, var_));
    }
    return acc;
  }

  Expr single(const Factor& f, const Expr& t) {
    Expr slope;
    if (f.base == x_) {
      if (f.exp == -1.0) return apply(Function::kLn, apply(Function::kAbs, x_));
      return pow(x_, num(f.exp + 1.0)) / num(f.exp + 1.0);
    }
    if (f.base.kind() == NodeKind::kCall && f.exp == 1.0 &&
        linear_slope(f.base.operand(), var_, slope)) {
      const Expr& l = f.base.operand();
      switch (f.base.function()) {
        case Function::kSin: return -apply(Function::kCos, l) / slope;
        case Function::kCos: return apply(Function::kSin, l) / slope;
        case Function::kExp: return f.base / slope;
        default: break;
      }
    }
    if (linear_slope(f.base, var_, slope)) {
      if (f.exp == -1.0) return apply(Function::kLn, apply(Function::kAbs, f.base)) / slope;
      return pow(f.base, num(f.exp + 1.0)) / (num(f.exp + 1.0) * slope);
    }
    not_in_catalog(t);
  }

  std::string_view var_;
  Expr x_;
};

void verify(const Expr& integrand, const Expr& result, std::string_view var) {
  Expr d = differentiate(result, var);
  std::set<std::string> names = free_symbols(integrand);
  for (const auto& n : free_symbols(result)) names.insert(n);
  std::mt19937_64 rng(0x5eed);
  int checked = 0;
  for (int attempt = 0; attempt < 64 && checked < 12; ++attempt) {
    Bindings b;
    for (const auto& n : names) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      b[n] = n == var ? 0.3 + 1.8 * u : 0.5 + u;
    }
    double lhs = 0.0, rhs = 0.0;
    try {
      lhs = eval(d, b);
      rhs = eval(integrand, b);
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (std::fabs(lhs - rhs) > 1e-8 * scale) {
      fail(ErrorCode::kNotInCatalog,
           "antiderivative failed verification for " + to_string(integrand));
    }
    ++checked;
  }
}

}  // namespace

Expr integrate_catalog(const Expr& e, std::string_view var) {
  Expr s = simplify(e);
  Expr result = simplify(Integrator(var).sum(s));
  verify(e, result, var);
  return result;
}

}  // namespace pfida

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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "node.hpp"

namespace pfida {
namespace {

constexpr std::size_t kMaxTerms = 512;
constexpr int kMaxExpandPower = 8;

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

struct Factor {
  Expr atom;
  double exp;
};
using Monomial = std::vector<Factor>;

double degree(const Monomial& m) {
  double d = 0;
  for (const auto& f : m) d += f.exp;
  return d;
}

int compare_mono(const Monomial& a, const Monomial& b) {
  double da = degree(a), db = degree(b);
  if (da != db) return da > db ? -1 : 1;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].atom, b[i].atom);
    if (c != 0) return c;
    if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_mono(a, b) < 0; }
};

using Poly = std::map<Monomial, double, MonoLess>;

void add_term(Poly& p, const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) p.erase(it);
  }
}

Poly constant_poly(double v) {
  Poly p;
  add_term(p, {}, v);
  return p;
}

bool is_constant(const Poly& p, double* value = nullptr) {
  if (p.empty()) {
    if (value) *value = 0.0;
    return true;
  }
  if (p.size() == 1 && p.begin()->first.empty()) {
    if (value) *value = p.begin()->second;
    return true;
  }
  return false;
}

Poly scale(const Poly& p, double k) {
  Poly out;
  if (k == 0.0) return out;
  for (const auto& [m, c] : p) add_term(out, m, c * k);
  return out;
}

class Simplifier {
 public:
  Expr run(const Expr& e) { return from_poly(to_poly(e)); }

  Poly to_poly(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.second;
    Poly p = convert(e);
    memo_.emplace(e.id(), std::make_pair(e, p));
    return p;
  }

  Expr from_poly(const Poly& p) {
    if (p.empty()) return num(0.0);
    Expr result;
    bool first = true;
    for (const auto& [m, c] : p) {
      if (first) {
        result = term_expr(m, std::fabs(c), c < 0);
        first = false;
      } else {
        Expr t = term_expr(m, std::fabs(c), false);
        result = Expr::binary(c < 0 ? BinaryOp::kSub : BinaryOp::kAdd, result, t);
      }
    }
    return result;
  }

 private:
  static Expr atom_power(const Expr& atom, double e) {
    if (e == 1.0) return atom;
    if (e == 0.5) return apply(Function::kSqrt, atom);
    return pow(atom, num(e));
  }

  // Left-associated product c*a1*a2*.../(b1*b2*...); a negative sign goes on
  // the leading factor.
  static Expr term_expr(const Monomial& m, double c, bool negative) {
    std::vector<Expr> numer, denom;
    if (c != 1.0) numer.push_back(num(negative ? -c : c));
    for (const auto& f : m) {
      if (f.exp > 0) {
        numer.push_back(atom_power(f.atom, f.exp));
      } else {
        denom.push_back(atom_power(f.atom, -f.exp));
      }
    }
    if (numer.empty()) numer.push_back(num(negative ? -1.0 : 1.0));
    if (negative && c == 1.0 && !numer.front().is_number()) numer.front() = Expr::negate(numer.front());
    auto product = [](const std::vector<Expr>& fs) {
      Expr acc = fs.front();
      for (std::size_t i = 1; i < fs.size(); ++i) acc = Expr::binary(BinaryOp::kMul, acc, fs[i]);
      return acc;
    };
    Expr t = product(numer);
    return denom.empty() ? t : Expr::binary(BinaryOp::kDiv, t, product(denom));
  }

  static Poly atom_poly(const Expr& atom, double e = 1.0) {
    Poly p;
    add_term(p, {Factor{atom, e}}, 1.0);
    return p;
  }

  // Sorts, merges equal atoms, drops zero exponents and folds products of
  // exponentials into a single exponential.
  void normalize(Monomial& m, double& coef) {
    std::sort(m.begin(), m.end(),
              [](const Factor& a, const Factor& b) { return compare(a.atom, b.atom) < 0; });
    Monomial out;
    for (auto& f : m) {
      if (!out.empty() && out.back().atom == f.atom) {
        out.back().exp += f.exp;
      } else {
        out.push_back(f);
      }
    }
    std::erase_if(out, [](const Factor& f) { return f.exp == 0.0; });

    int n_exp = 0;
    bool needs_merge = false;
    for (const auto& f : out) {
      if (f.atom.kind() == NodeKind::kCall && f.atom.function() == Function::kExp) {
        ++n_exp;
        if (f.exp != 1.0) needs_merge = true;
      }
    }
    if (n_exp >= 2 || needs_merge) {
      Poly arg;
      Monomial rest;
      for (const auto& f : out) {
        if (f.atom.kind() == NodeKind::kCall && f.atom.function() == Function::kExp) {
          for (const auto& [am, ac] : to_poly(f.atom.operand())) add_term(arg, am, ac * f.exp);
        } else {
          rest.push_back(f);
        }
      }
      double value = 0.0;
      if (is_constant(arg, &value)) {
        coef *= std::exp(value);
      } else {
        Expr merged = apply(Function::kExp, from_poly(arg));
        rest.push_back(Factor{merged, 1.0});
        std::sort(rest.begin(), rest.end(),
                  [](const Factor& a, const Factor& b) { return compare(a.atom, b.atom) < 0; });
      }
      out = std::move(rest);
    }
    m = std::move(out);
  }

  Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() > kMaxTerms * 8) {
      return multiply(as_single_term(a), as_single_term(b));
    }
    Poly out;
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        double coef = ca * cb;
        normalize(m, coef);
        add_term(out, m, coef);
      }
    }
    if (out.size() > kMaxTerms) return multiply(as_single_term(a), as_single_term(b));
    return out;
  }

  // Writes a multi-term polynomial as c * B with B a normalised sum atom.
  void split_sum(const Poly& p, double& c, Expr& atom) {
    double lead = p.begin()->second;
    bool all_int = true;
    for (const auto& [m, v] : p) {
      if (!is_integer(v) || std::fabs(v) > 1e15) all_int = false;
    }
    c = lead < 0 ? -1.0 : 1.0;
    if (all_int) {
      long long g = 0;
      for (const auto& [m, v] : p) g = std::gcd(g, static_cast<long long>(std::fabs(v)));
      if (g > 1) c *= static_cast<double>(g);
    }
    atom = from_poly(c == 1.0 ? p : scale(p, 1.0 / c));
  }

  Poly as_single_term(const Poly& p) {
    if (p.size() <= 1) return p;
    double c;
    Expr atom;
    split_sum(p, c, atom);
    return scale(atom_poly(atom), c);
  }

  Poly power(const Poly& base, double n, const Expr& original) {
    double cval = 0.0;
    if (is_constant(base, &cval)) {
      double v = std::pow(cval, n);
      if (std::isfinite(v)) return constant_poly(v);
      return atom_poly(original);
    }
    if (base.size() == 1) {
      const auto& [m, c] = *base.begin();
      if (is_integer(n)) {
        double cn = std::pow(c, n);
        if (!std::isfinite(cn)) return atom_poly(original);
        Monomial out = m;
        for (auto& f : out) f.exp *= n;
        double coef = cn;
        normalize(out, coef);
        Poly p;
        add_term(p, out, coef);
        return p;
      }
      if (c > 0 && m.size() == 1 && m[0].exp == 1.0) {
        Poly p;
        add_term(p, {Factor{m[0].atom, n}}, std::pow(c, n));
        return p;
      }
      return atom_poly(original);
    }
    if (is_integer(n) && n >= 2 && n <= kMaxExpandPower) {
      Poly acc = base;
      for (int k = 1; k < static_cast<int>(n); ++k) {
        acc = multiply(acc, base);
        if (acc.size() > kMaxTerms) break;
      }
      if (acc.size() <= kMaxTerms) return acc;
    }
    double c;
    Expr atom;
    split_sum(base, c, atom);
    if (is_integer(n) || c > 0) {
      Poly p;
      add_term(p, {Factor{atom, n}}, std::pow(c, n));
      return p;
    }
    return atom_poly(original);
  }

  // a / d, with products and constant powers in d inverted factor by factor
  // so that denominators are never expanded.
  Poly divide(const Poly& a, const Expr& d) {
    if (d.kind() == NodeKind::kBinary && d.op() == BinaryOp::kMul) {
      return divide(divide(a, d.lhs()), d.rhs());
    }
    if (d.kind() == NodeKind::kBinary && d.op() == BinaryOp::kPow) {
      Poly ex = to_poly(d.rhs());
      double n = 0.0;
      if (is_constant(ex, &n) && n != 0.0) {
        Poly base = to_poly(d.lhs());
        if (!base.empty()) {
          Expr original = Expr::binary(BinaryOp::kPow, from_poly(base), num(-n));
          return multiply(a, power(base, -n, original));
        }
      }
    }
    Poly b = to_poly(d);
    Expr original = Expr::binary(BinaryOp::kDiv, num(1.0), from_poly(b));
    return divide(a, b, original);
  }

  Poly divide(const Poly& a, const Poly& b, const Expr& original) {
    if (b.empty()) {
      return multiply(a.empty() ? constant_poly(1.0) : a, atom_poly(original));
    }
    if (a.empty()) return {};
    if (b.size() > 1 && a.size() == b.size()) {
      // Proportional numerator and denominator.
      double ratio = a.begin()->second / b.begin()->second;
      bool prop = true;
      auto ia = a.begin();
      for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib) {
        if (compare_mono(ia->first, ib->first) != 0 ||
            std::fabs(ia->second - ratio * ib->second) > 1e-14 * std::fabs(ia->second)) {
          prop = false;
          break;
        }
      }
      if (prop) return constant_poly(ratio);
    }
    return multiply(a, power(b, -1.0, original));
  }

  Poly trig_pass(Poly p) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [m, c] : p) {
        for (const auto& f : m) {
          if (f.atom.kind() != NodeKind::kCall || f.atom.function() != Function::kSin ||
              f.exp < 2.0 || !is_integer(f.exp)) {
            continue;
          }
          Expr cos_atom = apply(Function::kCos, f.atom.operand());
          Monomial partner = m;
          partner.push_back(Factor{f.atom, -2.0});
          partner.push_back(Factor{cos_atom, 2.0});
          double k = 1.0;
          normalize(partner, k);
          auto it = p.find(partner);
          if (it == p.end() || it->second != c) continue;
          Monomial reduced = m;
          reduced.push_back(Factor{f.atom, -2.0});
          double k2 = 1.0;
          normalize(reduced, k2);
          double coef = c;
          Monomial first = m;
          p.erase(it);
          p.erase(first);
          add_term(p, reduced, coef);
          changed = true;
          break;
        }
        if (changed) break;
      }
    }
    return p;
  }

  Poly convert(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kNumber: return constant_poly(e.value());
      case NodeKind::kSymbol: return atom_poly(e);
      case NodeKind::kNegate: return scale(to_poly(e.operand()), -1.0);
      case NodeKind::kCall: return convert_call(e);
      case NodeKind::kBinary: break;
    }
    switch (e.op()) {
      case BinaryOp::kAdd:
      case BinaryOp::kSub: {
        Poly out = to_poly(e.lhs());
        double sign = e.op() == BinaryOp::kAdd ? 1.0 : -1.0;
        for (const auto& [m, c] : to_poly(e.rhs())) add_term(out, m, sign * c);
        if (out.size() > kMaxTerms) return as_single_term(out);
        return trig_pass(std::move(out));
      }
      case BinaryOp::kMul: return trig_pass(multiply(to_poly(e.lhs()), to_poly(e.rhs())));
      case BinaryOp::kDiv: return trig_pass(divide(to_poly(e.lhs()), e.rhs()));
      case BinaryOp::kPow: {
        Poly base = to_poly(e.lhs());
        Poly ex = to_poly(e.rhs());
        double n = 0.0;
        Expr base_e = from_poly(base);
        if (is_constant(ex, &n)) {
          if (n == 0.0) return constant_poly(1.0);
          return power(base, n, Expr::binary(BinaryOp::kPow, base_e, num(n)));
        }
        return atom_poly(Expr::binary(BinaryOp::kPow, base_e, from_poly(ex)));
      }
    }
    return atom_poly(e);
  }

  Poly convert_call(const Expr& e) {
    Poly arg = to_poly(e.operand());
    Function f = e.function();
    double v = 0.0;
    if (is_constant(arg, &v)) {
      double r = std::nan("");
      try {
        r = apply_value(f, v);
      } catch (const Error&) {
      }
      if (std::isfinite(r)) return constant_poly(r);
    }
    Expr arg_e = from_poly(arg);
    if (f == Function::kSqrt) return power(arg, 0.5, Expr::call(f, arg_e));
    if (f == Function::kLn && arg_e.kind() == NodeKind::kCall &&
        arg_e.function() == Function::kExp) {
      return to_poly(arg_e.operand());
    }
    if (f == Function::kExp && arg_e.kind() == NodeKind::kCall &&
        arg_e.function() == Function::kLn) {
      return to_poly(arg_e.operand());
    }
    return atom_poly(Expr::call(f, arg_e));
  }

  static double apply_value(Function f, double x) {
    switch (f) {
      case Function::kSin: return std::sin(x);
      case Function::kCos: return std::cos(x);
      case Function::kTan: return std::tan(x);
      case Function::kLn: return x > 0 ? std::log(x) : std::nan("");
      case Function::kExp: return std::exp(x);
      case Function::kSqrt: return x >= 0 ? std::sqrt(x) : std::nan("");
      case Function::kAbs: return std::fabs(x);
    }
    return std::nan("");
  }

  // Keeps the key expression alive so node addresses are never reused.
  std::unordered_map<const Expr::Node*, std::pair<Expr, Poly>> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
  Expr cur = Simplifier().run(e);
  for (int i = 0; i < 16; ++i) {
    Expr next = Simplifier().run(cur);
    if (next == cur) return cur;
    cur = next;
  }
  return cur;
}

}  // namespace pfida

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfida/error.hpp"

namespace pfida {

enum class NodeKind : std::uint8_t { kNumber, kSymbol, kBinary, kNegate, kCall };
enum class BinaryOp : std::uint8_t { kAdd, kSub, kMul, kDiv, kPow };
enum class Function : std::uint8_t { kSin, kCos, kTan, kLn, kExp, kSqrt, kAbs };

const char* function_name(Function f);
bool lookup_function(std::string_view name, Function& out);

/// Symbol name -> value. Evaluation never falls back to a default.
using Bindings = std::map<std::string, double, std::less<>>;

/// Immutable symbolic expression. Copies share the node; equality is
/// structural. The raw factories below build nodes verbatim (no folding);
/// the arithmetic operators further down fold constants and 0/1 identities.
class Expr {
 public:
  struct Node;

  Expr();  // the number 0

  static Expr number(double v);
  static Expr symbol(std::string name);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  static Expr call(Function f, Expr arg);

  NodeKind kind() const;
  double value() const;
  const std::string& name() const;
  BinaryOp op() const;
  Function function() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  /// Operand of a Negate or argument of a Call.
  const Expr& operand() const;

  std::size_t hash() const;
  const Node* id() const { return node_.get(); }

  bool is_number() const { return kind() == NodeKind::kNumber; }
  bool is_number(double v) const { return is_number() && value() == v; }
  bool is_symbol() const { return kind() == NodeKind::kSymbol; }
  bool is_symbol(std::string_view n) const { return is_symbol() && name() == n; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct EmptyTag {};
  explicit Expr(EmptyTag) {}
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Total structural order, used to canonicalise sums and products.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

bool is_valid_symbol_name(std::string_view name);

// Folding arithmetic.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr apply(Function f, const Expr& arg);
inline Expr num(double v) { return Expr::number(v); }
inline Expr sym(std::string name) { return Expr::symbol(std::move(name)); }

/// Parses the expression grammar: decimal numbers, identifiers, + - * / ^,
/// parentheses and calls to sin cos tan ln exp sqrt abs. ^ is right
/// associative and binds tighter than unary minus.
Expr parse(std::string_view text);

/// Canonical infix form; parse(to_string(e)) prints back identically.
std::string to_string(const Expr& e);

/// Tree-walking evaluation; `pi` is the circle constant.
double eval(const Expr& e, const Bindings& b);

Expr differentiate(const Expr& e, std::string_view var);
std::vector<Expr> gradient(const Expr& e, std::span<const std::string> vars);

/// Best-effort rewriting: constant folding, 0/1 identities, like-term
/// collection over polynomial parts and sin^2 + cos^2 = 1. Idempotent.
Expr simplify(const Expr& e);

/// Simultaneous substitution of symbols.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

/// Antiderivative for the supported catalog (polynomials, x^n, 1/x, sin,
/// cos, exp of linear arguments, polynomial times those, sums and constant
/// multiples). Throws ErrorCode::kNotInCatalog otherwise. Every result is
/// re-differentiated and compared numerically against the integrand.
Expr integrate_catalog(const Expr& e, std::string_view var);

std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

/// Number of distinct nodes (shared subtrees counted once).
std::size_t node_count(const Expr& e);

}  // namespace pfida

template <>
struct std::hash<pfida::Expr> {
  std::size_t operator()(const pfida::Expr& e) const noexcept { return e.hash(); }
};

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
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pfida/benchmarks.hpp"

namespace pfida {

namespace {

using ExprMap = std::map<std::string, Expr, std::less<>>;

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] void syntax(int line, const std::string& message) {
  fail(ErrorCode::kSyntax, "case file line " + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int bracket_balance(std::string_view s) {
  int depth = 0;
  for (char ch : s) {
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
  }
  return depth;
}

/// Splits on commas outside brackets.
std::vector<std::string> split_top(std::string_view s, int line) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
    if (depth < 0) syntax(line, "unbalanced brackets");
    if (ch == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) syntax(line, "unbalanced brackets");
  out.push_back(trim(s.substr(start)));
  return out;
}

std::string strip_outer(const std::string& s, char open, char close, int line) {
  if (s.size() < 2 || s.front() != open || s.back() != close) {
    syntax(line, std::string("expected a value enclosed in ") + open + close);
  }
  return s.substr(1, s.size() - 2);
}

Expr parse_at(const std::string& text, int line) {
  try {
    return parse(text);
  } catch (const Error& e) {
    syntax(line, std::string(e.what()) + " in '" + text + "'");
  }
}

ExprVector parse_vec(const std::string& value, int line) {
  ExprVector out;
  for (const auto& item : split_top(strip_outer(value, '[', ']', line), line)) {
    out.push_back(parse_at(item, line));
  }
  return out;
}

ExprMatrix parse_mat(const std::string& value, int line) {
  std::vector<ExprVector> rows;
  for (const auto& row : split_top(strip_outer(value, '[', ']', line), line)) {
    rows.push_back(parse_vec(row, line));
  }
  if (rows.empty()) syntax(line, "empty matrix");
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) syntax(line, "matrix rows differ in length");
  }
  return ExprMatrix::from_rows(rows);
}

std::vector<std::string> parse_names(const std::string& value, int line) {
  std::vector<std::string> out;
  for (const auto& item : split_top(value, line)) {
    if (!is_valid_symbol_name(item)) syntax(line, "invalid name '" + item + "'");
    out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
        section = trim(line.substr(1, line.size() - 2));
        static const std::set<std::string> known{"case",   "params", "solutions",  "system",
                                                  "desired", "domain", "equilibrium"};
        if (!known.count(section)) syntax(line_no, "unknown section [" + section + "]");
        sections_[section];
        continue;
      }
      if (section.empty()) syntax(line_no, "entry outside a section");
      auto eq = line.find('=');
      if (eq == std::string::npos) syntax(line_no, "expected 'name = value'");
      Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
      while (bracket_balance(e.value) > 0 && std::getline(in, raw)) {
        ++line_no;
        auto h = raw.find('#');
        if (h != std::string::npos) raw.erase(h);
        e.value += " " + trim(raw);
      }
      if (e.key.empty() || e.value.empty()) syntax(e.line, "empty name or value");
      sections_[section].push_back(std::move(e));
    }
  }

  const std::vector<Entry>& section(const std::string& name) const {
    static const std::vector<Entry> empty;
    auto it = sections_.find(name);
    return it == sections_.end() ? empty : it->second;
  }
  bool has(const std::string& name) const { return sections_.count(name) > 0; }

 private:
  std::map<std::string, std::vector<Entry>> sections_;
};

/// Solution names reachable from `e`, following solution-to-solution references.
void collect_refs(const Expr& e, const std::map<std::string, std::set<std::string>>& deps,
                  std::set<std::string>& out) {
  for (const auto& s : free_symbols(e)) {
    auto it = deps.find(s);
    if (it == deps.end() || out.count(s)) continue;
    out.insert(s);
    out.insert(it->second.begin(), it->second.end());
  }
}

}  // namespace

BenchmarkCase parse_case(std::string_view text) {
  Reader rd(text);
  BenchmarkCase c;
  Bindings params;
  for (const auto& e : rd.section("params")) {
    if (!is_valid_symbol_name(e.key)) syntax(e.line, "invalid parameter name '" + e.key + "'");
    double v = 0.0;
    try {
      v = eval(parse_at(e.value, e.line), params);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::kSyntax) throw;
      syntax(e.line, std::string("cannot evaluate parameter: ") + err.what());
    }
    params[e.key] = v;
    c.params.emplace_back(e.key, v);
  }

  ExprMap expand;
  for (const auto& e : rd.section("solutions")) {
    if (!is_valid_symbol_name(e.key)) syntax(e.line, "invalid solution name '" + e.key + "'");
    Expr raw = parse_at(e.value, e.line);
    std::set<std::string> refs;
    collect_refs(raw, c.solution_deps, refs);
    c.solution_deps[e.key] = refs;
    Expr value = substitute(raw, expand);
    expand[e.key] = value;
    c.solutions.emplace_back(e.key, value);
  }
  auto expr = [&](const Entry& e) {
    Expr raw = parse_at(e.value, e.line);
    collect_refs(raw, c.solution_deps, c.model_references);
    return substitute(raw, expand);
  };
  auto matrix = [&](const Entry& e) {
    ExprMatrix raw = parse_mat(e.value, e.line);
    for (const auto& x : raw.data()) collect_refs(x, c.solution_deps, c.model_references);
    return substitute(raw, expand);
  };
  auto vector = [&](const Entry& e) {
    ExprVector raw = parse_vec(e.value, e.line);
    for (const auto& x : raw) collect_refs(x, c.solution_deps, c.model_references);
    return substitute(raw, expand);
  };

  for (const auto& e : rd.section("case")) {
    if (e.key == "name") {
      c.name = e.value;
    } else if (e.key == "kind") {
      if (e.value == "pch") {
        c.kind = ModelKind::kPortHamiltonian;
      } else if (e.value == "mechanical") {
        c.kind = ModelKind::kMechanical;
      } else {
        syntax(e.line, "kind must be 'pch' or 'mechanical'");
      }
    } else if (e.key == "suite") {
      c.suite = e.value;
    } else if (e.key == "description") {
      c.description = e.value;
    } else if (e.key == "variant" || e.key == "covers" || e.key == "gap") {
      auto bar = e.value.find('|');
      if (bar == std::string::npos) syntax(e.line, "expected 'label | text'");
      std::string label = trim(e.value.substr(0, bar));
      std::string rest = trim(e.value.substr(bar + 1));
      if (e.key == "variant") {
        c.variants.push_back({label, rest});
      } else if (e.key == "covers") {
        c.coverage.push_back({label, split_top(rest, e.line), ""});
      } else {
        c.coverage.push_back({label, {}, rest});
      }
    } else {
      syntax(e.line, "unknown [case] entry '" + e.key + "'");
    }
  }
  if (c.name.empty()) fail(ErrorCode::kSyntax, "case file has no name");

  std::vector<ExprVector> alphas;
  for (const auto& e : rd.section("system")) {
    if (c.kind == ModelKind::kPortHamiltonian) {
      if (e.key == "states") c.pch.x = parse_names(e.value, e.line);
      else if (e.key == "J") c.pch.J = matrix(e);
      else if (e.key == "R") c.pch.R = matrix(e);
      else if (e.key == "H") c.pch.H = expr(e);
      else if (e.key == "g") c.pch.g = matrix(e);
      else if (e.key == "g_perp") c.pch.g_perp = matrix(e);
      else syntax(e.line, "unknown [system] entry '" + e.key + "'");
    } else {
      if (e.key == "q") c.mech.q = parse_names(e.value, e.line);
      else if (e.key == "p") c.mech.p = parse_names(e.value, e.line);
      else if (e.key == "M") c.mech.M = matrix(e);
      else if (e.key == "V") c.mech.V = expr(e);
      else if (e.key == "G") c.mech.G = matrix(e);
      else if (e.key == "G_perp") c.mech.G_perp = matrix(e);
      else syntax(e.line, "unknown [system] entry '" + e.key + "'");
    }
  }
  for (const auto& e : rd.section("desired")) {
    if (c.kind == ModelKind::kPortHamiltonian) {
      if (e.key == "J_d") c.pch_desired.J_d = matrix(e);
      else if (e.key == "R_d") c.pch_desired.R_d = matrix(e);
      else if (e.key == "H_a") c.pch_desired.H_a = expr(e);
      else if (e.key == "H_d") c.pch_desired.H_d = expr(e);
      else syntax(e.line, "unknown [desired] entry '" + e.key + "'");
    } else {
      if (e.key == "M_d") {
        c.mech_desired.M_d = matrix(e);
      } else if (e.key == "V_d") {
        c.mech_desired.V_d = expr(e);
      } else if (e.key == "J2") {
        c.mech_desired.J2 = matrix(e);
      } else if (e.key == "K_v") {
        c.mech_desired.K_v = matrix(e);
      } else if (e.key == "alphas") {
        if (e.value != "derive") syntax(e.line, "alphas must be 'derive'");
        c.derive_alphas = true;
      } else if (e.key.rfind("alpha", 0) == 0) {
        std::size_t k = 0;
        try {
          k = std::stoul(e.key.substr(5));
        } catch (...) {
          syntax(e.line, "expected alpha<k>");
        }
        if (k != alphas.size() + 1) syntax(e.line, "alpha vectors must be numbered 1, 2, ...");
        alphas.push_back(vector(e));
      } else if (e.key == "weighting") {
        if (e.value == "desired_inertia") c.mech_desired.weighting = J2Weighting::kDesiredInertia;
        else if (e.value == "open_loop_inertia") c.mech_desired.weighting = J2Weighting::kOpenLoopInertia;
        else syntax(e.line, "weighting must be desired_inertia or open_loop_inertia");
      } else {
        syntax(e.line, "unknown [desired] entry '" + e.key + "'");
      }
    }
  }
  c.mech_desired.alphas = std::move(alphas);

  for (const auto& e : rd.section("domain")) {
    if (e.key == "exclude") {
      auto ne = e.value.rfind("!=");
      if (ne == std::string::npos || trim(e.value.substr(ne + 2)) != "0") {
        syntax(e.line, "exclusions read 'exclude = <expr> != 0'");
      }
      Entry inner{e.key, trim(e.value.substr(0, ne)), e.line};
      c.domain.exclusions.push_back(expr(inner));
      continue;
    }
    auto parts = split_top(strip_outer(e.value, '(', ')', e.line), e.line);
    if (parts.size() != 2) syntax(e.line, "intervals read '(lo, hi)'");
    double lo = 0.0, hi = 0.0;
    try {
      lo = eval(parse_at(parts[0], e.line), params);
      hi = eval(parse_at(parts[1], e.line), params);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::kSyntax) throw;
      syntax(e.line, std::string("cannot evaluate interval: ") + err.what());
    }
    if (!(lo < hi)) syntax(e.line, "interval must satisfy lo < hi");
    c.domain.set(e.key, {lo, hi});
  }
  c.domain.fixed = params;

  for (const auto& e : rd.section("equilibrium")) {
    if (e.key == "calibrate") {
      c.calibrate = parse_names(e.value, e.line);
      for (const auto& name : c.calibrate) {
        if (!params.count(name)) syntax(e.line, "calibrated '" + name + "' is not a parameter");
      }
    } else {
      c.equilibrium.emplace_back(e.key, expr(e));
    }
  }

  if (c.kind == ModelKind::kPortHamiltonian) {
    c.pch.validate();
  } else {
    c.mech.validate();
    if (c.derive_alphas) {
      SampleOptions o;
      o.points = 50;
      c.mech_desired.alphas = solve_alphas(c.mech, c.mech_desired.M_d, c.domain, o);
    }
  }
  for (const auto& [name, value] : c.equilibrium) {
    const auto st = c.state();
    if (std::find(st.begin(), st.end(), name) == st.end()) {
      fail(ErrorCode::kSyntax, "equilibrium entry '" + name + "' is not a state variable");
    }
  }
  return c;
}

BenchmarkCase load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open case file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

}  // namespace pfida

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

#include <fstream>
#include <sstream>

#include "pfida/pfaffian.hpp"

namespace pfida {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

[[noreturn]] void line_error(int line, const std::string& msg) {
  fail(ErrorCode::kSyntax, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view text, int line) {
  try {
    Expr e = parse(text);
    return eval(e, {});
  } catch (const Error& e) {
    line_error(line, "expected a number, got '" + std::string(text) + "' (" + e.what() + ")");
  }
}

Expr parse_at(std::string_view text, int line) {
  try {
    return parse(text);
  } catch (const Error& e) {
    line_error(line, e.what());
  }
}

}  // namespace

FormFile parse_form(std::string_view text) {
  FormFile out;
  std::optional<Expr> coeff[3];
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos || (eq + 1 < line.size() && line[eq + 1] == '=')) {
      line_error(line_no, "expected 'key = value'");
    }
    // `exclude = e != 0` contains a second '='; split at the first one.
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key == "vars") {
      out.form.vars = split(value, ',');
      for (const auto& v : out.form.vars) {
        if (!is_valid_symbol_name(v)) line_error(line_no, "invalid variable name '" + v + "'");
      }
    } else if (key == "P" || key == "Q" || key == "R") {
      coeff[key == "P" ? 0 : key == "Q" ? 1 : 2] = parse_at(value, line_no);
    } else if (key == "exclude") {
      auto ne = value.rfind("!=");
      if (ne == std::string_view::npos) line_error(line_no, "exclusions are written 'expr != 0'");
      std::string_view rhs = trim(value.substr(ne + 2));
      if (parse_number(rhs, line_no) != 0.0) line_error(line_no, "exclusions must compare with 0");
      out.domain.exclusions.push_back(parse_at(trim(value.substr(0, ne)), line_no));
    } else if (key.starts_with("domain ")) {
      std::string var(trim(key.substr(7)));
      auto parts = split(value, ',');
      if (parts.size() != 2) line_error(line_no, "domain needs 'lo, hi'");
      Interval iv{parse_number(parts[0], line_no), parse_number(parts[1], line_no)};
      if (!(iv.lo < iv.hi)) line_error(line_no, "empty domain interval for " + var);
      out.domain.set(var, iv);
    } else if (key.starts_with("param ")) {
      std::string name(trim(key.substr(6)));
      if (!is_valid_symbol_name(name)) line_error(line_no, "invalid parameter name '" + name + "'");
      out.domain.fixed[name] = parse_number(value, line_no);
    } else {
      line_error(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (out.form.vars.size() != 3) fail(ErrorCode::kSyntax, "form file needs 'vars = a,b,c'");
  for (int i = 0; i < 3; ++i) {
    if (!coeff[i]) fail(ErrorCode::kSyntax, std::string("form file is missing ") + "PQR"[i]);
    out.form.coeffs.push_back(*coeff[i]);
  }
  for (const auto& v : out.form.vars) {
    if (!out.domain.find(v)) out.domain.set(v, {0.5, 1.5});
  }
  return out;
}

FormFile load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_form(ss.str());
}

}  // namespace pfida

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

#include "pfida/report.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace pfida {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  fail(ErrorCode::kSyntax, "expected a number, got '" + s + "'");
}

}  // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.kind != CheckKind::kCheck || c.pass; });
}

std::string to_json(const Report& r, bool include_timing) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["tool_version"] = r.tool_version;
  j["case"] = r.case_name;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass();
  auto& checks = j["checks"] = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["kind"] = c.kind == CheckKind::kCheck ? "check" : "verdict";
    e["pass"] = c.pass;
    e["max_abs_residual"] = number(c.max_abs);
    e["max_rel_residual"] = number(c.max_rel);
    e["n_points"] = c.n_points;
    e["tolerance"] = number(c.tolerance);
    e["seed"] = c.seed;
    e["method"] = c.method;
    e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["unused_solutions"] = r.unused_solutions;
  if (include_timing) j["timing_seconds"] = r.timing_seconds;
  return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  try {
    auto j = ordered_json::parse(text);
    if (j.at("schema").get<int>() != kReportSchema) {
      fail(ErrorCode::kSyntax, "unsupported report schema");
    }
    Report r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.case_name = j.at("case").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.points = j.at("points").get<std::size_t>();
    r.tolerance = read_number(j.at("tolerance"));
    for (const auto& e : j.at("checks")) {
      ResidualReport c;
      c.name = e.at("name").get<std::string>();
      auto kind = e.at("kind").get<std::string>();
      if (kind != "check" && kind != "verdict") fail(ErrorCode::kSyntax, "bad kind " + kind);
      c.kind = kind == "check" ? CheckKind::kCheck : CheckKind::kVerdict;
      c.pass = e.at("pass").get<bool>();
      c.max_abs = read_number(e.at("max_abs_residual"));
      c.max_rel = read_number(e.at("max_rel_residual"));
      c.n_points = e.at("n_points").get<std::size_t>();
      c.tolerance = read_number(e.at("tolerance"));
      c.seed = e.at("seed").get<std::uint64_t>();
      c.method = e.at("method").get<std::string>();
      c.note = e.at("note").get<std::string>();
      r.checks.push_back(std::move(c));
    }
    r.unused_solutions = j.at("unused_solutions").get<std::vector<std::string>>();
    if (j.contains("timing_seconds")) r.timing_seconds = j["timing_seconds"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSyntax, std::string("malformed report: ") + e.what());
  }
}

}  // namespace pfida

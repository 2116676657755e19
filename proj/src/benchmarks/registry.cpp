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
#include <filesystem>

#include "pfida/benchmarks.hpp"

namespace pfida {

namespace detail {
std::vector<std::pair<std::string_view, std::string_view>> embedded_cases();
}

bool BenchmarkCase::has_solution(std::string_view n) const {
  return std::any_of(solutions.begin(), solutions.end(), [&](const auto& s) { return s.first == n; });
}

const Expr& BenchmarkCase::solution(std::string_view n) const {
  for (const auto& [key, value] : solutions) {
    if (key == n) return value;
  }
  fail(ErrorCode::kInvalidArgument, "case " + name + " has no solution named " + std::string(n));
}

double BenchmarkCase::param(std::string_view n) const {
  auto it = domain.fixed.find(n);
  if (it == domain.fixed.end()) {
    fail(ErrorCode::kInvalidArgument, "case " + name + " has no parameter " + std::string(n));
  }
  return it->second;
}

void BenchmarkCase::set_param(const std::string& n, double value) {
  domain.fixed[n] = value;
  for (auto& [key, v] : params) {
    if (key == n) {
      v = value;
      return;
    }
  }
  params.emplace_back(n, value);
}

PCHSystem BenchmarkCase::state_model() const {
  return kind == ModelKind::kPortHamiltonian ? pch : mech.lowered();
}

Expr BenchmarkCase::desired_energy() const {
  return kind == ModelKind::kPortHamiltonian ? pch_desired.desired_energy(pch)
                                             : mech_desired.energy(mech);
}

std::vector<std::string> BenchmarkCase::state() const {
  return kind == ModelKind::kPortHamiltonian ? pch.x : mech.state();
}

ExprVector BenchmarkCase::controller(const SampleOptions& opts) const {
  return kind == ModelKind::kPortHamiltonian
             ? control_law(pch, pch_desired, domain, opts)
             : mechanical_control_law(mech, mech_desired, domain, opts);
}

std::vector<double> BenchmarkCase::equilibrium_state() const {
  if (equilibrium.empty()) fail(ErrorCode::kInvalidArgument, "case " + name + " has no equilibrium");
  std::vector<double> out;
  for (const auto& v : state()) {
    auto it = std::find_if(equilibrium.begin(), equilibrium.end(),
                           [&](const auto& e) { return e.first == v; });
    if (it != equilibrium.end()) {
      out.push_back(eval(it->second, domain.fixed));
    } else if (kind == ModelKind::kMechanical &&
               std::find(mech.p.begin(), mech.p.end(), v) != mech.p.end()) {
      out.push_back(0.0);
    } else {
      fail(ErrorCode::kInvalidArgument, "equilibrium of case " + name + " lacks " + v);
    }
  }
  return out;
}

std::vector<std::string> case_names() {
  std::vector<std::string> out;
  for (const auto& [n, text] : detail::embedded_cases()) out.emplace_back(n);
  return out;
}

std::string_view case_text(std::string_view name) {
  for (const auto& [n, text] : detail::embedded_cases()) {
    if (n == name) return text;
  }
  fail(ErrorCode::kUnknownCase, "unknown case '" + std::string(name) + "'");
}

BenchmarkCase load_case(std::string_view name) { return parse_case(case_text(name)); }

BenchmarkCase resolve_case(const std::string& name_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_path, ec)) return load_case_file(name_or_path);
  return load_case(name_or_path);
}

}  // namespace pfida

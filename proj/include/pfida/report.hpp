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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pfida/sampling.hpp"

namespace pfida {

inline constexpr int kReportSchema = 1;

/// Outcome of one `check` run over a case.
struct Report {
  std::string tool_version;
  std::string case_name;
  std::uint64_t seed = 42;
  std::size_t points = 200;
  double tolerance = 1e-9;
  std::vector<ResidualReport> checks;
  std::vector<std::string> unused_solutions;
  double timing_seconds = 0.0;

  /// All gating records pass.
  bool pass() const;
};

/// Pretty-printed JSON, `"schema": 1`. Non-finite residuals are written as
/// the strings "inf", "-inf" or "nan".
std::string to_json(const Report& r, bool include_timing = true);
/// ErrorCode::kSyntax on malformed JSON or a missing field.
Report report_from_json(std::string_view text);

}  // namespace pfida

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

#include <gtest/gtest.h>

#include <cmath>

#include "pfida/benchmarks.hpp"
#include "pfida/report.hpp"

namespace pfida {
namespace {

Report sample() {
  Report r;
  r.tool_version = "1.2.3";
  r.case_name = "demo";
  r.seed = 7;
  r.points = 50;
  r.tolerance = 1e-9;
  ResidualReport a;
  a.name = "demo.first";
  a.n_points = 50;
  a.max_abs = 0.1 + 0.2;
  a.max_rel = 1.0 / 3.0;
  a.tolerance = 1e-9;
  a.pass = false;
  a.kind = CheckKind::kVerdict;
  a.seed = 7;
  a.method = "sampled";
  a.note = "quote \" and newline\n";
  ResidualReport b = make_verdict("demo.second", CheckKind::kCheck, false, INFINITY, 1e-8, "err");
  r.checks = {a, b};
  r.unused_solutions = {"s"};
  r.timing_seconds = 0.25;
  return r;
}

TEST(Report, RoundTripsLosslessly) {
  auto r = sample();
  auto text = to_json(r);
  auto back = report_from_json(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_EQ(back.checks[0].max_abs, 0.1 + 0.2);
  EXPECT_EQ(back.checks[0].max_rel, 1.0 / 3.0);
  EXPECT_TRUE(std::isinf(back.checks[1].max_abs));
  EXPECT_EQ(back.checks[0].note, r.checks[0].note);
  EXPECT_EQ(back.checks[0].kind, CheckKind::kVerdict);
  EXPECT_EQ(back.timing_seconds, 0.25);
}

TEST(Report, SchemaAndPassFlag) {
  auto r = sample();
  auto text = to_json(r);
  EXPECT_NE(text.find("\"schema\": 1"), std::string::npos);
  EXPECT_NE(text.find("\"pass\": false"), std::string::npos);
  EXPECT_FALSE(r.pass());
  r.checks.pop_back();
  EXPECT_TRUE(r.pass());
}

TEST(Report, TimingOptional) {
  auto text = to_json(sample(), false);
  EXPECT_EQ(text.find("timing_seconds"), std::string::npos);
  EXPECT_EQ(report_from_json(text).timing_seconds, 0.0);
}

TEST(Report, RejectsMalformed) {
  for (const char* bad : {"{", "[]", "{\"schema\": 2}", "{\"schema\": 1, \"case\": 3}"}) {
    try {
      report_from_json(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSyntax) << bad;
    }
  }
}

TEST(Report, SameSeedSameBytes) {
  auto make = [] {
    Report r;
    r.case_name = "mems_switch";
    r.checks = verify_case(load_case("mems_switch"), SampleOptions{}).reports;
    return to_json(r, false);
  };
  EXPECT_EQ(make(), make());
}

}  // namespace
}  // namespace pfida

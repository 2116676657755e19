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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pfida/pfida.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  pfida_string_free(s);
  return out;
}

TEST(CApi, ListsShippedCases) {
  ASSERT_EQ(pfida_case_count(), 6u);
  std::vector<std::string> names;
  for (size_t i = 0; i < pfida_case_count(); ++i) names.emplace_back(pfida_case_name_at(i));
  EXPECT_NE(std::find(names.begin(), names.end(), "pendubot"), names.end());
  EXPECT_EQ(pfida_case_name_at(99), nullptr);
  EXPECT_STRNE(pfida_version(), "");
}

TEST(CApi, UnknownCaseReportsStatusAndMessage) {
  pfida_case* c = reinterpret_cast<pfida_case*>(0x1);
  EXPECT_EQ(pfida_case_load("nosuch", &c), PFIDA_E_UNKNOWN_CASE);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::string(pfida_last_error()).find("nosuch"), std::string::npos);
  EXPECT_STREQ(pfida_status_name(PFIDA_OK), "ok");
  EXPECT_STREQ(pfida_status_name(PFIDA_E_INTERNAL), "internal error");
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(pfida_case_load(nullptr, nullptr), PFIDA_E_INVALID_ARGUMENT);
  EXPECT_EQ(pfida_check(nullptr, 10, 1e-9, 1, nullptr), PFIDA_E_INVALID_ARGUMENT);
  EXPECT_EQ(pfida_form_parse(nullptr, nullptr), PFIDA_E_INVALID_ARGUMENT);
  pfida_case_free(nullptr);
  pfida_report_free(nullptr);
  pfida_string_free(nullptr);
}

TEST(CApi, CheckPendubotPasses) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load("pendubot", &c), PFIDA_OK);
  EXPECT_STREQ(pfida_case_name(c), "pendubot");
  pfida_report* r = nullptr;
  ASSERT_EQ(pfida_check(c, 200, 1e-9, 42, &r), PFIDA_OK);
  EXPECT_TRUE(pfida_report_pass(r));
  ASSERT_GT(pfida_report_size(r), 10u);
  pfida_record rec{};
  ASSERT_EQ(pfida_report_record(r, 0, &rec), PFIDA_OK);
  EXPECT_EQ(std::string(rec.name).rfind("pendubot.", 0), 0u);
  EXPECT_EQ(pfida_report_record(r, 10000, &rec), PFIDA_E_INVALID_ARGUMENT);
  char* json = nullptr;
  ASSERT_EQ(pfida_report_json(r, 0, &json), PFIDA_OK);
  auto text = take(json);
  EXPECT_NE(text.find("\"schema\": 1"), std::string::npos);
  EXPECT_EQ(text.find("timing_seconds"), std::string::npos);
  pfida_report_free(r);
  pfida_case_free(c);
}

TEST(CApi, MaglevFailsOnPrintedVariantOnly) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load("maglev", &c), PFIDA_OK);
  pfida_report* r = nullptr;
  ASSERT_EQ(pfida_check(c, 200, 1e-9, 42, &r), PFIDA_OK);
  EXPECT_FALSE(pfida_report_pass(r));
  std::vector<std::string> failing;
  for (size_t i = 0; i < pfida_report_size(r); ++i) {
    pfida_record rec{};
    pfida_report_record(r, i, &rec);
    if (rec.gating && !rec.pass) failing.emplace_back(rec.name);
  }
  EXPECT_EQ(failing, std::vector<std::string>{"maglev.nonhom_printed.pde"});
  pfida_report_free(r);
  pfida_case_free(c);
}

TEST(CApi, ParamsRoundTrip) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load("cdr_spatial", &c), PFIDA_OK);
  double v = 0.0;
  ASSERT_EQ(pfida_case_get_param(c, "kv", &v), PFIDA_OK);
  EXPECT_EQ(v, 2.0);
  EXPECT_EQ(pfida_case_set_param(c, "kv", 3.5), PFIDA_OK);
  pfida_case_get_param(c, "kv", &v);
  EXPECT_EQ(v, 3.5);
  EXPECT_EQ(pfida_case_get_param(c, "nope", &v), PFIDA_E_INVALID_ARGUMENT);
  EXPECT_EQ(pfida_case_apply_params(c, "# comment\n[params]\nkv = 2*2\n"), PFIDA_OK);
  pfida_case_get_param(c, "kv", &v);
  EXPECT_EQ(v, 4.0);
  EXPECT_EQ(pfida_case_apply_params(c, "kv 3\n"), PFIDA_E_SYNTAX);
  pfida_case_free(c);
}

TEST(CApi, CalibrationSidecarReloads) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load("cdr_spatial", &c), PFIDA_OK);
  char* text = nullptr;
  ASSERT_EQ(pfida_case_calibrate(c, &text), PFIDA_OK);
  auto sidecar = take(text);
  EXPECT_NE(sidecar.find("cs = 4.90"), std::string::npos) << sidecar;
  pfida_case* fresh = nullptr;
  ASSERT_EQ(pfida_case_load("cdr_spatial", &fresh), PFIDA_OK);
  ASSERT_EQ(pfida_case_apply_params(fresh, sidecar.c_str()), PFIDA_OK);
  double cs = 0.0;
  pfida_case_get_param(fresh, "cs", &cs);
  EXPECT_NEAR(cs, 9.81 / 2.0, 1e-9);
  pfida_case_free(fresh);
  pfida_case_free(c);
}

TEST(CApi, StateNamesAndEquilibrium) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load("cdr_planar", &c), PFIDA_OK);
  ASSERT_EQ(pfida_case_state_dim(c), 6u);
  EXPECT_STREQ(pfida_case_state_name(c, 2), "theta");
  EXPECT_STREQ(pfida_case_state_name(c, 3), "px");
  EXPECT_EQ(pfida_case_state_name(c, 6), nullptr);
  double x[6];
  ASSERT_EQ(pfida_case_equilibrium(c, x, 6), PFIDA_OK);
  EXPECT_EQ(x[0], 0.5);
  EXPECT_EQ(x[1], -1.0);
  EXPECT_EQ(pfida_case_equilibrium(c, x, 5), PFIDA_E_DIMENSION);
  pfida_case_free(c);
}

TEST(CApi, SolvesExactForm) {
  pfida_form* f = nullptr;
  ASSERT_EQ(pfida_form_parse("vars = x, y, z\nP = y\nQ = x\nR = 1\n", &f), PFIDA_OK);
  pfida_record rec{};
  char* residual = nullptr;
  ASSERT_EQ(pfida_form_integrability(f, 42, &rec, &residual), PFIDA_OK);
  EXPECT_TRUE(rec.pass);
  EXPECT_EQ(take(residual), "0");
  pfida_trace* t = nullptr;
  ASSERT_EQ(pfida_form_solve(f, nullptr, 42, &t), PFIDA_OK);
  EXPECT_STREQ(pfida_trace_get(t, PFIDA_TRACE_U), "x*y");
  EXPECT_STREQ(pfida_trace_get(t, PFIDA_TRACE_PHI_ARG), "x*y + z");
  EXPECT_FALSE(pfida_trace_hint_used(t));
  ASSERT_GT(pfida_trace_size(t), 0u);
  for (size_t i = 0; i < pfida_trace_size(t); ++i) {
    ASSERT_EQ(pfida_trace_record(t, i, &rec), PFIDA_OK);
    EXPECT_TRUE(rec.pass) << rec.name;
  }
  pfida_trace_free(t);
  pfida_form_free(f);
}

TEST(CApi, SolverFailuresCarryStatus) {
  pfida_form* f = nullptr;
  ASSERT_EQ(pfida_form_parse("vars = x, y, z\nP = y\nQ = 0\nR = x\n", &f), PFIDA_OK);
  pfida_trace* t = nullptr;
  EXPECT_EQ(pfida_form_solve(f, nullptr, 42, &t), PFIDA_E_NOT_INTEGRABLE);
  EXPECT_EQ(t, nullptr);
  EXPECT_NE(std::string(pfida_last_error()).find("-x"), std::string::npos);
  pfida_form_free(f);

  ASSERT_EQ(pfida_form_parse("vars = x, y, z\nP = y\nQ = x\nR = 1\n", &f), PFIDA_OK);
  EXPECT_EQ(pfida_form_solve(f, "x + y", 42, &t), PFIDA_E_STAGE1_UNSOLVABLE);
  pfida_form_free(f);

  EXPECT_EQ(pfida_form_parse("bogus\n", &f), PFIDA_E_SYNTAX);
  EXPECT_EQ(pfida_form_load("/nonexistent/form.pf", &f), PFIDA_E_IO);
}

TEST(CApi, SimulatesOscillatorOpenLoop) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load(PFIDA_SOURCE_DIR "/cases/oscillator.case", &c), PFIDA_OK);
  pfida_sim_options o = pfida_sim_defaults();
  o.t_final = 5.0;
  o.open_loop = 1;
  double x0[2] = {1.0, 0.0};
  pfida_trajectory* t = nullptr;
  ASSERT_EQ(pfida_simulate(c, x0, 2, &o, &t), PFIDA_OK);
  EXPECT_EQ(pfida_trajectory_stopped(t, nullptr), PFIDA_OK);
  size_t n = pfida_trajectory_size(t);
  ASSERT_EQ(n, 5001u);
  EXPECT_EQ(pfida_trajectory_dim(t), 2u);
  EXPECT_NEAR(pfida_trajectory_time(t, n - 1), 5.0, 1e-12);
  double H0 = 0.0, H = 0.0, x[2];
  pfida_trajectory_energy(t, 0, &H0, nullptr);
  pfida_trajectory_energy(t, n - 1, &H, nullptr);
  EXPECT_NEAR(H, H0, 1e-8);
  ASSERT_EQ(pfida_trajectory_state(t, n - 1, x, 2), PFIDA_OK);
  EXPECT_NEAR(x[0], std::cos(5.0), 1e-9);
  EXPECT_EQ(pfida_trajectory_state(t, n, x, 2), PFIDA_E_INVALID_ARGUMENT);
  char* csv = nullptr;
  ASSERT_EQ(pfida_trajectory_csv(t, &csv), PFIDA_OK);
  EXPECT_EQ(take(csv).rfind("t,x1,x2,H,Hd\n", 0), 0u);
  pfida_trajectory_free(t);
  pfida_case_free(c);
}

TEST(CApi, ClosedLoopDissipates) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load(PFIDA_SOURCE_DIR "/cases/oscillator.case", &c), PFIDA_OK);
  pfida_sim_options o = pfida_sim_defaults();
  o.t_final = 10.0;
  double x0[2] = {1.0, 0.0};
  pfida_trajectory* t = nullptr;
  ASSERT_EQ(pfida_simulate(c, x0, 2, &o, &t), PFIDA_OK);
  pfida_sim_metrics m{};
  ASSERT_EQ(pfida_trajectory_metrics(t, c, 1e-8, &m), PFIDA_OK);
  EXPECT_TRUE(m.hd_monotone);
  EXPECT_LT(m.excess_energy_ratio, 1e-2);
  pfida_trajectory_free(t);
  pfida_case_free(c);
}

TEST(CApi, SimulationInputErrors) {
  pfida_case* c = nullptr;
  ASSERT_EQ(pfida_case_load(PFIDA_SOURCE_DIR "/cases/oscillator.case", &c), PFIDA_OK);
  pfida_trajectory* t = nullptr;
  double outside[2] = {5.0, 0.0};
  EXPECT_EQ(pfida_simulate(c, outside, 2, nullptr, &t), PFIDA_E_DOMAIN);
  double x0[3] = {0.1, 0.0, 0.0};
  EXPECT_EQ(pfida_simulate(c, x0, 3, nullptr, &t), PFIDA_E_DIMENSION);
  pfida_sim_options o = pfida_sim_defaults();
  o.dt = -1.0;
  EXPECT_EQ(pfida_simulate(c, x0, 2, &o, &t), PFIDA_E_INVALID_ARGUMENT);
  EXPECT_EQ(t, nullptr);
  pfida_case_free(c);
}

}  // namespace

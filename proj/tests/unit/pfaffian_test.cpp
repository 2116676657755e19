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
#include <numbers>
#include <random>

#include "pfida/pfaffian.hpp"

namespace pfida {
namespace {

PfaffianForm form(const char* p, const char* q, const char* r,
                  std::vector<std::string> vars = {"x", "y", "z"}) {
  return PfaffianForm{std::move(vars), {parse(p), parse(q), parse(r)}};
}

Domain unit_box(std::vector<std::string> vars = {"x", "y", "z"}, double lo = 1.0, double hi = 2.0) {
  Domain d;
  for (const auto& v : vars) d.set(v, {lo, hi});
  return d;
}

// Planar cable-robot form solved in closed form by the five-stage procedure.
PfaffianForm planar_form() {
  return form("4*a*cos(theta) - 2*b", "4*a*sin(theta)",
              "-4*a*sin(theta)*x + 4*a*cos(theta)*y + 2*a*b*sin(theta)", {"x", "y", "theta"});
}

Domain planar_domain() {
  Domain d;
  d.set("x", {-0.5, 1.5});
  d.set("y", {-2.0, -0.3});
  d.set("theta", {-1.0, 1.0});
  d.fixed = {{"a", 0.2}, {"b", 1.0}};
  return d;
}

TEST(Integrability, ConstantFormHasZeroResidual) {
  EXPECT_TRUE(simplify(integrability_residual(form("1", "1", "1"))).is_number(0.0));
}

TEST(Integrability, CounterexampleResidualIsMinusX) {
  Expr r = simplify(integrability_residual(form("y", "0", "x")));
  EXPECT_EQ(to_string(r), "-x");
  SampleOptions opts;
  EXPECT_FALSE(is_integrable(form("y", "0", "x"), unit_box(), opts));
}

TEST(Integrability, RequiresThreeVariables) {
  PfaffianForm f{{"x", "y"}, {parse("1"), parse("1")}};
  try {
    integrability_residual(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

TEST(Integrability, GradientFormsAreIntegrableAndExact) {
  const char* potentials[] = {"x^2*y + sin(z*x)", "exp(x - y)*cos(z)", "x*y*z + ln(1 + x^2)",
                              "sqrt(1 + x*x + y*y)*z^3", "tan(0.2*x)*y - z/(1 + y^2)"};
  std::vector<std::string> vars{"x", "y", "z"};
  SampleOptions opts;
  for (const char* text : potentials) {
    Expr F = parse(text);
    PfaffianForm f{vars, gradient(F, vars)};
    ResidualReport rep;
    EXPECT_TRUE(is_integrable(f, unit_box(), opts, &rep)) << text << " " << rep.max_rel;
    ResidualReport ex = check_zero("exact", exactness_defect(f), unit_box(), opts);
    EXPECT_TRUE(ex.pass) << text;
  }
}

TEST(Exactness, RotationFormDefect) {
  ExprVector d = exactness_defect(form("y", "-x", "0"));
  EXPECT_TRUE(simplify(d[0]).is_number(-2.0));
  EXPECT_TRUE(simplify(d[1]).is_number(0.0));
  EXPECT_TRUE(simplify(d[2]).is_number(0.0));
}

TEST(Exactness, PlanarFormIsExactAsWritten) {
  for (const auto& c : exactness_defect(planar_form())) EXPECT_TRUE(simplify(c).is_number(0.0));
}

TEST(Potential, SquareIntegratesToNine) {
  Domain d;
  EXPECT_NEAR(reconstruct_potential(form("2*x", "0", "0"), {0, 0, 0}, {3, 0, 0}, d), 9.0, 1e-12);
}

TEST(Potential, PlanarFormMatchesClosedForm) {
  Domain d = planar_domain();
  Expr phi = parse("(4*a*cos(theta) - 2*b)*x + 4*a*sin(theta)*y - 2*a*b*cos(theta) + 2*a*b");
  std::vector<double> target{0.7, -1.1, 0.4};
  Bindings b = d.fixed;
  b["x"] = target[0];
  b["y"] = target[1];
  b["theta"] = target[2];
  double got = reconstruct_potential(planar_form(), {0, 0, 0}, target, d);
  EXPECT_NEAR(got, eval(phi, b), 1e-12);
}

TEST(Potential, PathIndependence) {
  Domain d = planar_domain();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    double p1 = reconstruct_potential(planar_form(), a, b, d, {0, 1, 2});
    double p2 = reconstruct_potential(planar_form(), a, b, d, {2, 0, 1});
    EXPECT_LE(std::fabs(p1 - p2), 1e-6 * std::max(1.0, std::fabs(p1)));
  }
}

TEST(Potential, NotExactAndExclusionErrors) {
  Domain d;
  try {
    reconstruct_potential(form("y", "-x", "0"), {0.1, 0.1, 0}, {1, 1, 0}, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotExact);
  }
  Domain ex;
  ex.exclusions.push_back(parse("x"));
  ex.set("x", {-1, 1});
  try {
    reconstruct_potential(form("1", "0", "0"), {-0.5, 0, 0}, {0.5, 0, 0}, ex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(PdeSolution, ChecksCandidateAgainstEquation) {
  // x z_x + y z_y = 2 z has z = x^2 + y^2; z = x*y^2 fails.
  FirstOrderPDE pde{{"x", "y"}, "z", {parse("x"), parse("y")}, parse("2*z")};
  SampleOptions opts;
  Domain d = unit_box({"x", "y"});
  EXPECT_TRUE(check_pde_solution(pde, parse("x^2 + y^2"), d, opts).pass);
  EXPECT_FALSE(check_pde_solution(pde, parse("x*y^2"), d, opts).pass);
}

TEST(Characteristics, RotationInvariants) {
  // dx/0 = dy/(-k1 z) = dz/(k2 y) with first integrals x and k2 y^2 + k1 z^2.
  CharacteristicSystem cs{{"x", "y", "z"}, "V", {parse("0"), parse("-k1*z"), parse("k2*y")},
                          parse("0")};
  SampleOptions opts;
  auto reps = characteristic_residuals(cs, {parse("x"), parse("k2*y^2 + k1*z^2"), parse("V")},
                                       unit_box(), opts);
  ASSERT_EQ(reps.size(), 3u);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name;
  auto bad = characteristic_residuals(cs, {parse("y")}, unit_box(), opts);
  EXPECT_FALSE(bad[0].pass);
}

TEST(Superposition, SplitAndHypothesis) {
  FirstOrderPDE pde{{"x", "y", "z"}, "V", {parse("0"), parse("-k1*z"), parse("k2*y")},
                    parse("-m^2*g*z")};
  Domain d = unit_box();
  d.fixed = {{"k1", 1.0}, {"k2", 2.0}, {"m", 1.0}, {"g", 9.81}};
  SampleOptions opts;
  auto r = superposition_check(pde, {parse("x"), parse("k2*y^2 + k1*z^2")}, parse("m^2*g/k1*(y - 0.5)"),
                        d, opts);
  EXPECT_TRUE(r.pass) << r.max_rel;
  FirstOrderPDE bad = pde;
  bad.R = parse("V*x");
  try {
    superposition_check(bad, {}, parse("0"), d, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHypothesisViolated);
  }
}

TEST(Superposition, SuperpositionClosure) {
  FirstOrderPDE pde{{"x", "y"}, "z", {parse("1"), parse("x")}, parse("2*x")};
  Domain d = unit_box({"x", "y"});
  SampleOptions opts;
  Expr hom = parse("y - x^2/2");
  Expr part = parse("x^2");
  ASSERT_TRUE(superposition_check(pde, {hom}, part, d, opts).pass);
  EXPECT_TRUE(check_pde_solution(pde, parse("3*(y - x^2/2) + x^2"), d, opts).pass);
}

TEST(FirstIntegral2d, RecognizerCascade) {
  Domain d = unit_box({"x", "y"});
  d.fixed = {{"c1", 1.0}, {"c2", 1.0}, {"c3", -6.0}};
  SampleOptions opts;
  // Exact.
  auto e = first_integral_2d(parse("y"), parse("x"), "x", "y", d, opts);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->method, "exact");
  // Linear: (c1 x + c2 y + c3) dx - dy = 0, integrating factor exp(-c2 x).
  auto l = first_integral_2d(parse("c1*x + c2*y + c3"), parse("-1"), "x", "y", d, opts);
  ASSERT_TRUE(l);
  Expr S = parse("(c1/c2*x + y + c3/c2 + c1/c2^2)*exp(-c2*x)");
  // Same level sets: gradients parallel.
  Expr cross = differentiate(l->U, "x") * differentiate(S, "y") -
               differentiate(l->U, "y") * differentiate(S, "x");
  EXPECT_TRUE(check_zero("parallel", cross, d, opts).pass);
  // Separable: y dx - x dy.
  auto s = first_integral_2d(parse("y"), parse("-x"), "x", "y", d, opts);
  ASSERT_TRUE(s);
}

TEST(FiveStage, PlanarForm) {
  FiveStageOptions o;
  Domain d = planar_domain();
  SolutionTrace t = five_stage_solve(planar_form(), d, o);
  SampleOptions opts;
  EXPECT_TRUE(check_equal("U", t.U, parse("(4*a*cos(theta) - 2*b)*x + 4*a*sin(theta)*y"), d, opts).pass)
      << to_string(t.U);
  EXPECT_TRUE(check_equal("mu", t.mu, num(1.0), d, opts).pass);
  EXPECT_TRUE(check_equal("K", t.K, parse("2*a*b*sin(theta)"), d, opts).pass);
  EXPECT_TRUE(check_equal("phi", t.phi_arg,
                          parse("(4*a*cos(theta) - 2*b)*x + 4*a*sin(theta)*y - 2*a*b*cos(theta)"), d,
                          opts)
                  .pass)
      << to_string(t.phi_arg);
  EXPECT_TRUE(t.residual_report.pass);
  EXPECT_LE(t.residual_report.max_rel, 1e-8);
}

TEST(FiveStage, SimpleForms) {
  FiveStageOptions o;
  SolutionTrace t = five_stage_solve(form("1", "1", "1"), unit_box(), o);
  EXPECT_EQ(to_string(t.phi_arg), "x + y + z");
  SolutionTrace t2 = five_stage_solve(form("y", "x", "1"), unit_box(), o);
  EXPECT_EQ(to_string(t2.U), "x*y");
  EXPECT_TRUE(t2.mu.is_number(1.0));
  EXPECT_TRUE(t2.K.is_number(1.0));
  EXPECT_EQ(to_string(t2.phi_arg), "x*y + z");
}

TEST(FiveStage, NeedsIntegratingFactor) {
  // x dy - y dx + x^2 dz = 0 ~ d(y/x) + dz after dividing by x^2.
  FiveStageOptions o;
  SolutionTrace t = five_stage_solve(form("-y", "x", "x^2"), unit_box(), o);
  EXPECT_TRUE(t.residual_report.pass);
  EXPECT_NE(t.stage1_method, "exact");
}

TEST(FiveStage, KDependingOnU) {
  // d(xy) + xy dz: K = U after Stage 2, Stage 4 is linear in u.
  FiveStageOptions o;
  SolutionTrace t = five_stage_solve(form("y", "x", "x*y"), unit_box(), o);
  EXPECT_TRUE(t.residual_report.pass);
  EXPECT_TRUE(depends_on(t.K_of_u, kLevelSymbol));
}

TEST(FiveStage, Errors) {
  FiveStageOptions o;
  try {
    five_stage_solve(form("y", "0", "x"), unit_box(), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotIntegrable);
    EXPECT_NE(std::string(e.what()).find("integrability residual -x"), std::string::npos);
  }
  o.hint_u = parse("x + y");
  try {
    five_stage_solve(form("y", "x", "1"), unit_box(), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStage1Unsolvable);
  }
  o.hint_u = parse("2*x*y");
  EXPECT_TRUE(five_stage_solve(form("y", "x", "1"), unit_box(), o).hint_used);
}

TEST(FormFile, ParsesAllLineKinds) {
  FormFile ff = parse_form(
      "# planar\n"
      "vars = x, y, theta\n"
      "P = 4*a*cos(theta) - 2*b\n"
      "Q = 4*a*sin(theta)\n"
      "R = -4*a*sin(theta)*x + 4*a*cos(theta)*y + 2*a*b*sin(theta)\n"
      "exclude = y != 0\n"
      "domain y = -2, -0.3\n"
      "param a = 0.2  # link length\n");
  EXPECT_EQ(ff.form.vars.size(), 3u);
  EXPECT_EQ(ff.domain.exclusions.size(), 1u);
  EXPECT_DOUBLE_EQ(ff.domain.find("y")->lo, -2.0);
  EXPECT_DOUBLE_EQ(ff.domain.fixed.at("a"), 0.2);
  EXPECT_THROW(parse_form("vars = x,y,z\nP = 1\nQ = 1\n"), Error);
  EXPECT_THROW(parse_form("vars = x,y,z\nP = 1\nQ = 1\nR = (\n"), Error);
  EXPECT_THROW(parse_form("bogus line\n"), Error);
}

}  // namespace
}  // namespace pfida

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
#include <functional>

#include "pfida/idapbc.hpp"

namespace pfida {
namespace {

ExprMatrix mat(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ExprVector> out;
  for (const auto& r : rows) out.push_back(parse_vector(r));
  return ExprMatrix::from_rows(out);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

// Magnetic levitation in port-Hamiltonian form, x = (flux, position, momentum).
PCHSystem maglev() {
  PCHSystem s;
  s.x = {"x1", "x2", "x3"};
  s.J = mat({{"0", "0", "0"}, {"0", "0", "1"}, {"0", "-1", "0"}});
  s.R = mat({{"r", "0", "0"}, {"0", "0", "0"}, {"0", "0", "0"}});
  s.H = parse("(1-x2)*x1^2/(2*k) + x3^2/(2*m) + m*g*x2");
  s.g = mat({{"1"}, {"0"}, {"0"}});
  s.g_perp = mat({{"0", "1", "0"}, {"0", "0", "1"}});
  return s;
}

DesiredStructure maglev_desired(const char* Ha) {
  DesiredStructure d;
  d.J_d = mat({{"0", "0", "-alpha"}, {"0", "0", "1"}, {"alpha", "-1", "0"}});
  d.R_d = maglev().R;
  d.H_a = parse(Ha);
  return d;
}

Domain maglev_domain() {
  Domain d;
  d.set("x1", {0.5, 2.0});
  d.set("x2", {-0.5, 0.5});
  d.set("x3", {-1.0, 1.0});
  d.fixed = {{"k", 1.0}, {"m", 1.0}, {"g", 9.81}, {"r", 1.0}};
  return d;
}

MechanicalSystem pendubot() {
  MechanicalSystem s;
  s.q = {"q1", "q2"};
  s.p = {"p1", "p2"};
  s.M = mat({{"c1+c2+2*c3*cos(q2)", "c2+c3*cos(q2)"}, {"c2+c3*cos(q2)", "c2"}});
  s.V = parse("-c4*g*cos(q1)-c5*g*cos(q1+q2)");
  s.G = mat({{"1"}, {"0"}});
  s.G_perp = mat({{"0", "1"}});
  return s;
}

Domain pendubot_domain() {
  Domain d;
  d.set("q1", {-1.0, 1.0});
  d.set("q2", {-1.5, 1.5});
  d.set("p1", {-1.0, 1.0});
  d.set("p2", {-1.0, 1.0});
  d.fixed = {{"c1", 4.0 / 3.0}, {"c2", 1.0 / 3.0}, {"c3", 0.5}, {"c4", 1.5}, {"c5", 0.5},
             {"g", 9.81}, {"l1", 1.0}, {"l2", 0.5}};
  return d;
}

// M_d M^-1 with lambda4 = -lambda3 and lambda2 fixed by symmetry of M_d.
ExprMatrix pendubot_lambda(const std::string& l3) {
  MechanicalSystem s = pendubot();
  Expr L3 = parse(l3);
  Expr L4 = -L3;
  Expr L1 = sym("l1");
  Expr L2 = (L3 * s.M(0, 0) + L4 * s.M(0, 1) - L1 * s.M(0, 1)) / s.M(1, 1);
  return ExprMatrix{{L1, L2}, {L3, L4}};
}

// Spatial cable robot: anchors at the origin and (b, 0, 0).
MechanicalSystem spatial_cdr() {
  MechanicalSystem s;
  s.q = {"x", "y", "z"};
  s.p = {"px", "py", "pz"};
  s.M = mat({{"m", "0", "0"}, {"0", "m", "0"}, {"0", "0", "m"}});
  s.V = parse("m*g*y");
  const char* l1 = "sqrt(x^2+y^2+z^2)";
  const char* l2 = "sqrt((x-b)^2+y^2+z^2)";
  auto c = [](const char* num, const char* den) { return std::string(num) + "/" + den; };
  s.G = mat({{c("x", l1), c("(x-b)", l2)}, {c("y", l1), c("y", l2)}, {c("z", l1), c("z", l2)}});
  s.G_perp = mat({{"0", "-b*z", "b*y"}});
  return s;
}

MechanicalDesired spatial_desired() {
  MechanicalDesired d;
  d.M_d = mat({{"k0", "0", "0"}, {"0", "y^2/2+k1", "y*z/2"}, {"0", "y*z/2", "z^2/2+k2"}});
  d.V_d = parse("m^2*g/k1*(y-ys) + kx/2*(x-xs)^2 + ks/2*(k2*y^2+k1*z^2-k2*ys^2)^2");
  d.alphas = {parse_vector({"0", "0", "0"}), parse_vector({"0", "0", "0"}),
              parse_vector({"0", "-k1*z/(2*m)", "k2*y/(2*m)"})};
  d.K_v = mat({{"1", "0"}, {"0", "1"}});
  return d;
}

Domain spatial_domain() {
  Domain d;
  d.set("x", {0.2, 0.8});
  d.set("y", {-1.5, -0.5});
  d.set("z", {-0.3, 0.3});
  for (const char* p : {"px", "py", "pz"}) d.set(p, {-1.0, 1.0});
  d.fixed = {{"m", 1.0}, {"g", 9.81}, {"b", 1.0}, {"k0", 1.0}, {"k1", 1.0}, {"k2", 1.0},
             {"xs", 0.5}, {"ys", -1.0}, {"kx", 1.0}, {"ks", 1.0}};
  return d;
}

SampleOptions opts(std::size_t points = 200) {
  SampleOptions o;
  o.points = points;
  return o;
}

TEST(Matching, IdenticalStructureGivesZeroResidual) {
  PCHSystem s = maglev();
  DesiredStructure d{s.J, s.R, num(0.0), std::nullopt};
  ExprVector r = matching_residual(s, d);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(check_zero("m", r, maglev_domain(), opts()).pass);
  EXPECT_TRUE(check_zero("u", control_law(s, d, maglev_domain(), opts()), maglev_domain(), opts())
                  .pass);
}

TEST(Matching, MaglevModifiedInterconnectionGivesTwoScalarEquations) {
  PCHSystem s = maglev();
  DesiredStructure d = maglev_desired("K1*x1 + K2*x2 + K3*x3");
  ExprVector r = matching_residual(s, d);
  ASSERT_EQ(r.size(), 2u);
  Domain dom = maglev_domain();
  EXPECT_TRUE(check_equal("row1", r[0], parse("-K3"), dom, opts()).pass);
  EXPECT_TRUE(
      check_equal("row2", r[1], parse("-alpha/k*(1-x2)*x1 - (alpha*K1 - K2)"), dom, opts()).pass);
}

TEST(Matching, DimensionMismatchIsReported) {
  PCHSystem s = maglev();
  DesiredStructure d{mat({{"0"}}), s.R, num(0.0), std::nullopt};
  EXPECT_EQ(code_of([&] { matching_residual(s, d); }), ErrorCode::kDimension);
}

TEST(ControlLaw, MaglevClosedLoopMatchesDesiredField) {
  // Solves alpha K1 - K2 = -(1-x2) x1/k with alpha = 1 along x1 + x2 = const.
  PCHSystem s = maglev();
  DesiredStructure d = maglev_desired("-((1-x1-x2)*x1^2/2 + x1^3/3)/k");
  d.J_d = substitute(d.J_d, {{"alpha", num(1.0)}});
  Domain dom = maglev_domain();
  EXPECT_TRUE(check_zero("matching", matching_residual(s, d), dom, opts()).pass);
  ExprVector u = control_law(s, d, dom, opts());
  ASSERT_EQ(u.size(), 1u);
  EXPECT_TRUE(check_equal("field", open_loop_field(s, u), desired_field(s, d), dom, opts()).pass);
}

TEST(ControlLaw, SingularInputMatrixIsRejected) {
  PCHSystem s = maglev();
  s.g = mat({{"0"}, {"0"}, {"0"}});
  DesiredStructure d{s.J, s.R, num(0.0), std::nullopt};
  EXPECT_EQ(code_of([&] { control_law(s, d, maglev_domain(), opts()); }),
            ErrorCode::kSingularInput);
}

TEST(ToCharacteristics, MaglevSecondEquationGivesTheChain) {
  PCHSystem s = maglev();
  Expr row = matching_residual(s, maglev_desired("K1*x1 + K2*x2 + K3*x3"))[1];
  Domain dom = maglev_domain();
  dom.set("alpha", {0.5, 2.0});
  FirstOrderPDE pde = to_characteristics(row, s.x, {"K1", "K2", "K3"}, "Ha", dom, opts());
  ASSERT_EQ(pde.P.size(), 3u);
  EXPECT_TRUE(check_equal("P", pde.P, parse_vector({"alpha", "-1", "0"}), dom, opts()).pass);
  EXPECT_TRUE(check_equal("R", pde.R, parse("-alpha/k*(1-x2)*x1"), dom, opts()).pass);
  // Dividing by alpha = 1/beta gives dx1/1 = dx2/(-beta) = dHa/(-(1-x2) x1/k).
  std::map<std::string, Expr, std::less<>> beta{{"alpha", parse("1/beta")}};
  Domain bd = dom;
  bd.set("beta", {0.5, 2.0});
  Expr P1 = substitute(pde.P[0], beta);
  EXPECT_TRUE(check_equal("P2/P1", substitute(pde.P[1], beta) / P1, parse("-beta"), bd, opts()).pass);
  EXPECT_TRUE(
      check_equal("R/P1", substitute(pde.R, beta) / P1, parse("-(1-x2)*x1/k"), bd, opts()).pass);
}

TEST(ToCharacteristics, TrivialPde) {
  FirstOrderPDE pde = to_characteristics(parse("-zx"), {"x"}, {"zx"}, "z", Domain{}, opts());
  ASSERT_EQ(pde.P.size(), 1u);
  EXPECT_TRUE(pde.P[0].is_number(1.0));
  EXPECT_TRUE(pde.R.is_number(0.0));
}

TEST(ToCharacteristics, NonAffineResidualIsRejected) {
  EXPECT_EQ(code_of([] { to_characteristics(parse("zx^2 - 1"), {"x"}, {"zx"}, "z", Domain{}, opts()); }),
            ErrorCode::kNotAffine);
  EXPECT_EQ(code_of([] {
              to_characteristics(parse("x*zx*zy"), {"x", "y"}, {"zx", "zy"}, "z", Domain{}, opts());
            }),
            ErrorCode::kNotAffine);
}

TEST(Mechanical, TrivialShapingIsPureDamping) {
  MechanicalSystem s = pendubot();
  MechanicalDesired d;
  d.M_d = s.M;
  d.V_d = s.V;
  d.K_v = mat({{"kv"}});
  Domain dom = pendubot_domain();
  dom.fixed["kv"] = 2.0;
  EXPECT_TRUE(check_zero("ke", ke_pde_residual(s, d), dom, opts()).pass);
  EXPECT_TRUE(check_zero("pe", pe_pde_residual(s, d), dom, opts()).pass);
  ExprVector tau = mechanical_control_law(s, d, dom, opts());
  ExprVector expected = num(-1.0) * (d.K_v * (s.G.transpose() * (s.M_inv() * symbols(s.p))));
  EXPECT_TRUE(check_equal("tau", tau, expected, dom, opts()).pass);
}

TEST(Mechanical, PendubotPotentialPdeVanishes) {
  MechanicalSystem s = pendubot();
  MechanicalDesired d;
  ExprMatrix Lambda = pendubot_lambda("-1/cos(q2)");
  d.M_d = Lambda * s.M;
  d.V_d = parse("c5*g*sin(q1+q2)*sin(q2)");
  d.K_v = mat({{"1"}});
  ExprVector r = pe_pde_residual(s, d);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(check_zero("pe", r, pendubot_domain(), opts()).pass);
  // The other candidate V_d = phi(q1 + q2) alone leaves the forcing term.
  d.V_d = parse("(q1+q2)^2");
  EXPECT_FALSE(check_zero("pe", pe_pde_residual(s, d), pendubot_domain(), opts()).pass);
}

TEST(Mechanical, PendubotRemainingKineticEquationVanishes) {
  // With G_perp = (0, 1) the J2 term only reaches the p~1 terms, so the
  // (2,2) entry of the kinetic system must vanish on its own.
  MechanicalSystem s = pendubot();
  ExprMatrix Md = pendubot_lambda("-1/cos(q2)") * s.M;
  std::vector<ExprVector> zero_alpha{parse_vector({"0", "0"})};
  auto eqs = acosta_ke_system(s, Md, zero_alpha);
  ASSERT_EQ(eqs.size(), 3u);
  EXPECT_EQ(eqs[2].i, 1u);
  EXPECT_EQ(eqs[2].j, 1u);
  EXPECT_TRUE(check_zero("ke22", eqs[2].lhs, pendubot_domain(), opts()).pass);
  EXPECT_TRUE(check_zero("sym", (Md - Md.transpose()).data(), pendubot_domain(), opts()).pass);
  // Any other lambda3 leaves it nonzero.
  ExprMatrix other = pendubot_lambda("-1") * s.M;
  EXPECT_FALSE(check_zero("ke22", acosta_ke_system(s, other, zero_alpha)[2].lhs,
                          pendubot_domain(), opts())
                   .pass);

  // Choosing the alphas from the remaining entries closes the KE-PDE.
  MechanicalDesired d;
  d.M_d = Md;
  d.V_d = num(0.0);
  d.alphas = {ExprVector{eqs[0].lhs / num(2.0), eqs[1].lhs}};
  d.K_v = mat({{"1"}});
  EXPECT_TRUE(check_zero("ke", ke_pde_residual(s, d), pendubot_domain(), opts()).pass);
}

TEST(Mechanical, SpatialCableRobotKineticPdeVanishesWithDerivedAlphas) {
  MechanicalSystem s = spatial_cdr();
  MechanicalDesired d = spatial_desired();
  Domain dom = spatial_domain();
  ExprVector ke = ke_pde_residual(s, d);
  ASSERT_EQ(ke.size(), 1u);
  EXPECT_TRUE(check_zero("ke", ke, dom, opts()).pass);
  EXPECT_TRUE(check_zero("pe", pe_pde_residual(s, d), dom, opts()).pass);
  for (const auto& eq : acosta_ke_system(s, d.M_d, d.alphas)) {
    EXPECT_TRUE(check_equal("eq", eq.lhs, eq.rhs, dom, opts()).pass) << eq.i << eq.j;
  }
}

TEST(Mechanical, OpenLoopInertiaWeightingLeavesKineticResidual) {
  MechanicalSystem s = spatial_cdr();
  MechanicalDesired d = spatial_desired();
  d.weighting = J2Weighting::kOpenLoopInertia;
  // At m = k1 = k2 = 1 the two weightings coincide.
  Domain dom = spatial_domain();
  EXPECT_TRUE(check_zero("ke", ke_pde_residual(s, d), dom, opts()).pass);
  dom.fixed["m"] = 1.5;
  dom.fixed["k1"] = 2.0;
  dom.fixed["k2"] = 0.5;
  EXPECT_FALSE(check_zero("ke", ke_pde_residual(s, d), dom, opts()).pass);
  d.weighting = J2Weighting::kDesiredInertia;
  EXPECT_TRUE(check_zero("ke", ke_pde_residual(s, d), dom, opts()).pass);
}

TEST(Mechanical, KineticResidualIsQuadraticInMomentum) {
  MechanicalSystem s = spatial_cdr();
  MechanicalDesired d = spatial_desired();
  d.weighting = J2Weighting::kOpenLoopInertia;
  Expr r = ke_pde_residual(s, d)[0];
  std::map<std::string, Expr, std::less<>> scale;
  for (const auto& p : s.p) scale[p] = num(2.5) * sym(p);
  EXPECT_TRUE(
      check_equal("scaling", substitute(r, scale), num(6.25) * r, spatial_domain(), opts()).pass);
}

TEST(Mechanical, SpatialClosedLoopMatchesDesiredField) {
  MechanicalSystem s = spatial_cdr();
  MechanicalDesired d = spatial_desired();
  Domain dom = spatial_domain();
  ExprVector tau = mechanical_control_law(s, d, dom, opts());
  ASSERT_EQ(tau.size(), 2u);
  EXPECT_TRUE(check_equal("field", open_loop_field(s.lowered(), tau),
                          mechanical_desired_field(s, d), dom, opts())
                  .pass);
}

TEST(Mechanical, SymbolicAndNumericControlLawsAgree) {
  MechanicalSystem s = spatial_cdr();
  MechanicalDesired d = spatial_desired();
  Domain dom = spatial_domain();
  ExprVector tau = mechanical_control_law(s, d, dom, opts());
  ExprVector via_pch = control_law(s.lowered(), d.lowered(s), dom, opts());
  EXPECT_TRUE(check_equal("pch route", tau, via_pch, dom, opts()).pass);
  std::set<std::string> syms;
  for (const auto& e : tau)
    for (const auto& v : free_symbols(e)) syms.insert(v);
  for (const auto& pt : sample_points(dom, syms, 50, 9)) {
    Eigen::VectorXd numeric = mechanical_control_at(s, d, pt);
    Eigen::VectorXd symbolic = evaluate(tau, pt);
    EXPECT_LE((numeric - symbolic).norm(), 1e-9 * std::max(1.0, symbolic.norm()));
  }
}

TEST(BuildJ2, ZeroAlphasGiveZero) {
  MechanicalSystem s = spatial_cdr();
  std::vector<ExprVector> z(3, parse_vector({"0", "0", "0"}));
  ExprMatrix J2 = build_j2(z, s, s.M);
  for (const auto& e : J2.data()) EXPECT_TRUE(e.is_number(0.0));
}

TEST(BuildJ2, SkewByConstructionAndSparsity) {
  MechanicalSystem s = spatial_cdr();
  std::vector<ExprVector> a{parse_vector({"0", "0", "0"}), parse_vector({"x", "y^2", "sin(z)"}),
                            parse_vector({"1", "x*z", "y"})};
  ExprMatrix J2 = build_j2(a, s, spatial_desired().M_d);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_TRUE(simplify(J2(i, j) + J2(j, i)).is_number(0.0)) << i << j;
    }
  }
  EXPECT_TRUE(J2(0, 1).is_number(0.0));
  EXPECT_FALSE(J2(0, 2).is_number(0.0));
  EXPECT_FALSE(J2(1, 2).is_number(0.0));
  EXPECT_EQ(code_of([&] { build_j2({a[0]}, s, s.M); }), ErrorCode::kDimension);
}

TEST(Acosta, WMatricesForTwoCoordinates) {
  auto W = w_matrices(2);
  ASSERT_EQ(W.size(), 1u);
  Eigen::Matrix2d expected;
  expected << 0, 1, -1, 0;
  EXPECT_EQ(W[0], Eigen::MatrixXd(expected));
  EXPECT_EQ(w_matrices(3).size(), 3u);
}

TEST(Acosta, FullyActuatedSystemHasNoEquations) {
  MechanicalSystem s = pendubot();
  s.G = mat({{"1", "0"}, {"0", "1"}});
  s.G_perp = ExprMatrix();
  EXPECT_TRUE(acosta_ke_system(s, s.M, {parse_vector({"0", "0"})}).empty());
}

TEST(Acosta, SpatialCableRobotEquationsHaveTheDisplayedStructure) {
  // Arbitrary smooth M_d entries and symbolic alphas; the (2,2), (2,3), (3,3)
  // entries scaled by m/b are the three lower-block equations.
  MechanicalSystem s = spatial_cdr();
  ExprMatrix Md = mat({{"k0", "0", "0"},
                       {"0", "y^2+x*z+2", "sin(y*z)"},
                       {"0", "sin(y*z)", "exp(z)+y^2"}});
  std::vector<ExprVector> a{parse_vector({"a11", "a12", "a13"}), parse_vector({"a21", "a22", "a23"}),
                            parse_vector({"a31", "a32", "a33"})};
  auto eqs = acosta_ke_system(s, Md, a);
  ASSERT_EQ(eqs.size(), 6u);
  Domain dom = spatial_domain();
  Expr P1 = parse("-z*(y^2+x*z+2) + y*sin(y*z)");
  Expr P2 = parse("-z*sin(y*z) + y*(exp(z)+y^2)");
  auto lhs = [&](const char* entry) {
    Expr e = parse(entry);
    return P1 * differentiate(e, "y") + P2 * differentiate(e, "z");
  };
  Expr scale = parse("m/b");
  struct Want {
    std::size_t i, j;
    const char* entry;
    const char* rhs;
  } want[] = {{1, 1, "y^2+x*z+2", "2*m*y*a32"},
              {1, 2, "sin(y*z)", "m*y*a33 + m*z*a32"},
              {2, 2, "exp(z)+y^2", "2*m*z*a33"}};
  for (const auto& w : want) {
    auto it = std::find_if(eqs.begin(), eqs.end(), [&](const KEEquation& e) {
      return e.i == w.i && e.j == w.j;
    });
    ASSERT_NE(it, eqs.end());
    EXPECT_TRUE(check_equal("lhs", scale * it->lhs, lhs(w.entry), dom, opts()).pass) << w.entry;
    EXPECT_TRUE(check_equal("rhs", scale * it->rhs, parse(w.rhs), dom, opts()).pass) << w.rhs;
  }
  // Upper-left entry: 2 (-z a11 + y a21) on the right.
  EXPECT_TRUE(check_equal("rhs11", scale * eqs[0].rhs, parse("2*m*(-z*a11 + y*a21)"), dom, opts())
                  .pass);
}

TEST(Equilibrium, QuadraticBowlIsAMinimum) {
  Expr H = parse("((x-1)^2 + (y+2)^2)/2");
  EquilibriumReport r = equilibrium_assignment_check(H, {"x", "y"}, {{"x", 1.0}, {"y", -2.0}}, 1e-8);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.verdict, "minimum");
  EXPECT_NEAR(r.min_eigenvalue, 1.0, 1e-5);
}

TEST(Equilibrium, SaddleIsStationaryOnly) {
  EquilibriumReport r =
      equilibrium_assignment_check(parse("x^2 - y^2"), {"x", "y"}, {{"x", 0.0}, {"y", 0.0}}, 1e-8);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.verdict, "stationary-only");
  r = equilibrium_assignment_check(parse("x^2 + y"), {"x", "y"}, {{"x", 0.0}, {"y", 0.0}}, 1e-8);
  EXPECT_EQ(r.verdict, "not-stationary");
}

TEST(Equilibrium, DomainErrorAtThePoint) {
  EXPECT_EQ(code_of([] {
              equilibrium_assignment_check(parse("ln(x)"), {"x"}, {{"x", 0.0}}, 1e-8);
            }),
            ErrorCode::kDomain);
}

TEST(Calibration, AlreadyStationaryNeedsNoIterations) {
  Calibration c = calibrate_equilibrium(parse("(x-1)^2 + c*(x-1)^2"), {"x"}, {"c"},
                                        {{"x", 1.0}, {"c", 0.5}}, 1e-8);
  EXPECT_EQ(c.iterations, 0);
  EXPECT_TRUE(c.converged);
  EXPECT_DOUBLE_EQ(c.params.at("c"), 0.5);
}

TEST(Calibration, SolvesForLinearCoefficient) {
  // V_d = q(s - s*)^2/2 + c (s - s*) + m g y with s = y^2: d/dy at y* gives
  // 2 y* c + m g = 0.
  Expr V = parse("q*(y^2 - 4)^2/2 + c*(y^2 - 4) + m*g*y + (x - 1)^2");
  Bindings pt{{"x", 1.0}, {"y", -2.0}, {"q", 1.0}, {"m", 1.0}, {"g", 9.81}, {"c", 0.0}};
  Calibration c = calibrate_equilibrium(V, {"x", "y"}, {"c"}, pt, 1e-10);
  EXPECT_TRUE(c.converged);
  EXPECT_NEAR(c.params.at("c"), 9.81 / 4.0, 1e-10);
  EXPECT_LE(c.equilibrium.gradient_norm, 1e-10);
  EXPECT_GT(c.iterations, 0);
}

TEST(Calibration, NoConvergenceIsReportedNotThrown) {
  Calibration c = calibrate_equilibrium(parse("x^2 + c^2 + 1 + 0*x"), {"x"}, {"c"},
                                        {{"x", 1.0}, {"c", 1.0}}, 1e-10);
  EXPECT_FALSE(c.converged);
  EXPECT_LE(c.iterations, 50);
}

TEST(Structure, PortHamiltonianInvariants) {
  for (const auto& r : pch_structure_checks(maglev(), maglev_domain(), opts())) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.note;
  }
  PCHSystem bad = maglev();
  bad.J(0, 1) = num(1.0);
  bad.R(0, 0) = parse("-r");
  auto reps = pch_structure_checks(bad, maglev_domain(), opts());
  EXPECT_FALSE(reps[0].pass);
  EXPECT_FALSE(reps[2].pass);
}

TEST(Structure, MechanicalInvariants) {
  for (const auto& r : mechanical_structure_checks(spatial_cdr(), spatial_domain(), opts())) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.note;
  }
  for (const auto& r : mechanical_desired_checks(spatial_cdr(), spatial_desired(), spatial_domain(),
                                                 opts())) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.note;
  }
}

TEST(Structure, LoweredMechanicalSystemIsPortHamiltonian) {
  MechanicalSystem s = spatial_cdr();
  PCHSystem low = s.lowered();
  EXPECT_EQ(low.n(), 6u);
  EXPECT_EQ(low.m(), 2u);
  for (const auto& r : pch_structure_checks(low, spatial_domain(), opts())) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.note;
  }
  DesiredStructure d = spatial_desired().lowered(s);
  for (const auto& r : desired_structure_checks(d, spatial_domain(), opts())) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.note;
  }
}

}  // namespace
}  // namespace pfida

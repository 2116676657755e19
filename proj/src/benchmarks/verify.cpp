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
#include <cmath>
#include <functional>
#include <limits>

#include "pfida/benchmarks.hpp"

namespace pfida {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::set<std::string> symbols_of(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const auto& e : es) {
    auto s = free_symbols(e);
    out.insert(s.begin(), s.end());
  }
  return out;
}

ExprVector concat(ExprVector a, const ExprVector& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Domain with_params(Domain d, std::initializer_list<std::pair<const char*, double>> values) {
  for (const auto& [n, v] : values) d.fixed[n] = v;
  return d;
}

class Suite {
 public:
  Suite(const BenchmarkCase& c, const SampleOptions& o, VerifyResult& out)
      : c(c), d(c.domain), o(o), out_(out) {}

  std::string name(std::string_view check) const { return c.name + "." + std::string(check); }

  Expr sol(std::string_view n) {
    used.insert(std::string(n));
    return c.solution(n);
  }

  void add(ResidualReport r) { out_.reports.push_back(std::move(r)); }
  void add(ResidualReport r, CheckKind kind, std::string note = {}) {
    r.kind = kind;
    if (!note.empty()) r.note = note;
    add(std::move(r));
  }
  void add_prefixed(std::vector<ResidualReport> rs) {
    for (auto& r : rs) {
      r.name = name(r.name);
      add(std::move(r));
    }
  }

  void guard(std::string_view check, CheckKind kind, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      add(make_verdict(name(check), kind, false, kInf, o.tolerance,
                       std::string(to_string(e.code())) + ": " + e.what()));
    }
  }

  bool last_passed() const { return !out_.reports.empty() && out_.reports.back().pass; }

  const BenchmarkCase& c;
  const Domain& d;
  const SampleOptions& o;
  std::set<std::string> used;

 private:
  VerifyResult& out_;
};

// Matching row `row` read as a first-order PDE in H_a, with dH_a/dx_i as
// placeholder symbols.
FirstOrderPDE matching_pde(const BenchmarkCase& c, std::size_t row, const SampleOptions& o) {
  DesiredStructure des = c.pch_desired;
  des.H_d.reset();
  std::vector<std::string> partials;
  Expr Ha = num(0);
  for (const auto& x : c.pch.x) {
    partials.push_back("Ha_" + x);
    Ha = Ha + sym(partials.back()) * sym(x);
  }
  des.H_a = Ha;
  auto r = matching_residual(c.pch, des);
  return to_characteristics(r.at(row), c.pch.x, partials, "Ha", c.domain, o);
}

ResidualReport compare_pde(const std::string& name, const FirstOrderPDE& pde, const ExprVector& P,
                           const Expr& R, const Domain& d, const SampleOptions& o) {
  return check_equal(name, concat(pde.P, {pde.R}), concat(P, {R}), d, o);
}

ResidualReport numeric_law_check(const std::string& name, const BenchmarkCase& c,
                                 const ExprVector& tau, const SampleOptions& o) {
  auto syms = symbols_of(tau);
  for (const auto& v : c.state()) syms.insert(v);
  double worst = 0.0;
  auto pts = sample_points(c.domain, syms, std::min<std::size_t>(o.points, 50), o.seed);
  for (const auto& b : pts) {
    Eigen::VectorXd n = mechanical_control_at(c.mech, c.mech_desired, b);
    for (std::size_t i = 0; i < tau.size(); ++i) {
      worst = std::max(worst, scaled_residual(eval(tau[i], b), n(static_cast<Eigen::Index>(i))));
    }
  }
  auto r = make_verdict(name, CheckKind::kCheck, worst <= 1e-8, worst, 1e-8,
                        "symbolic law against dense evaluation");
  r.n_points = pts.size();
  r.seed = o.seed;
  return r;
}

void equilibrium_checks(Suite& s) {
  const auto& c = s.c;
  if (!c.has_equilibrium()) return;
  s.guard("equilibrium", CheckKind::kCheck, [&] {
    BenchmarkCase cal = c;
    auto cc = calibrate_case(cal);
    if (cc.attempted) {
      std::string note = "iterations " + std::to_string(cc.result.iterations);
      for (const auto& p : cal.calibrate) note += ", " + p + " = " + std::to_string(cal.param(p));
      s.add(make_verdict(s.name("calibration"), CheckKind::kCheck, cc.result.converged,
                         cc.result.residual, 1e-8, note));
    }
    const auto& eq = cc.result.equilibrium;
    s.add(make_verdict(s.name("equilibrium"), CheckKind::kCheck, eq.pass, eq.gradient_norm, 1e-8,
                       eq.verdict + ", smallest Hessian eigenvalue " +
                           std::to_string(eq.min_eigenvalue)));
  });
}

void pch_generic(Suite& s) {
  const auto& c = s.c;
  s.guard("model", CheckKind::kCheck,
          [&] { s.add_prefixed(pch_structure_checks(c.pch, s.d, s.o, "model")); });
  s.guard("desired", CheckKind::kCheck,
          [&] { s.add_prefixed(desired_structure_checks(c.pch_desired, s.d, s.o, "desired")); });
  bool matched = false;
  s.guard("matching", CheckKind::kCheck, [&] {
    s.add(check_zero(s.name("matching"), matching_residual(c.pch, c.pch_desired), s.d, s.o));
    matched = s.last_passed();
  });
  auto kind = matched ? CheckKind::kCheck : CheckKind::kVerdict;
  s.guard("closed_loop", kind, [&] {
    auto u = control_law(c.pch, c.pch_desired, s.d, s.o);
    s.add(check_equal(s.name("closed_loop"), open_loop_field(c.pch, u),
                      desired_field(c.pch, c.pch_desired), s.d, s.o),
          kind, matched ? "" : "matching fails, so the identity is not expected");
  });
}

void mechanical_generic(Suite& s) {
  const auto& c = s.c;
  const auto& des = c.mech_desired;
  s.guard("model", CheckKind::kCheck,
          [&] { s.add_prefixed(mechanical_structure_checks(c.mech, s.d, s.o)); });
  s.guard("desired", CheckKind::kCheck,
          [&] { s.add_prefixed(mechanical_desired_checks(c.mech, des, s.d, s.o)); });
  bool matched = true;
  s.guard("ke.residual", CheckKind::kCheck, [&] {
    auto ke = ke_pde_residual(c.mech, des);
    s.add(check_zero(s.name("ke.residual"), ke, s.d, s.o));
    matched = matched && s.last_passed();
    std::map<std::string, Expr, std::less<>> scale;
    for (const auto& p : c.mech.p) scale[p] = num(2) * sym(p);
    s.add(check_equal(s.name("ke.quadratic_in_p"), substitute(ke, scale), num(4) * ke, s.d, s.o));
  });
  s.guard("pe.residual", CheckKind::kCheck, [&] {
    s.add(check_zero(s.name("pe.residual"), pe_pde_residual(c.mech, des), s.d, s.o));
    matched = matched && s.last_passed();
  });
  auto kind = matched ? CheckKind::kCheck : CheckKind::kVerdict;
  s.guard("closed_loop", kind, [&] {
    auto tau = mechanical_control_law(c.mech, des, s.d, s.o);
    s.add(check_equal(s.name("closed_loop"), open_loop_field(c.mech.lowered(), tau),
                      mechanical_desired_field(c.mech, des), s.d, s.o),
          kind, matched ? "" : "a matching equation fails, so the identity is not expected");
    s.add(numeric_law_check(s.name("closed_loop.numeric"), c, tau, s.o));
  });
}

void maglev_suite(Suite& s) {
  const auto& d = s.d;
  const auto& o = s.o;
  Expr alpha = s.sol("alpha");
  Expr lin = parse("c1*x1 + c2*x2 + c3");
  Expr src = parse("-(1 - x2)*x1/k");

  s.guard("matching.first", CheckKind::kCheck, [&] {
    s.add(compare_pde(s.name("matching.first"), matching_pde(s.c, 0, o), {num(0), num(0), num(1)},
                      num(0), d, o));
  });
  s.guard("chain", CheckKind::kCheck, [&] {
    auto pde = matching_pde(s.c, 1, o);
    s.add(compare_pde(s.name("chain.alpha"), pde, {alpha, num(-1), num(0)}, alpha * src, d, o));
    ExprVector scaled{pde.P[0] / alpha, pde.P[1] / alpha, pde.P[2] / alpha, pde.R / alpha};
    s.add(check_equal(s.name("chain.beta"), scaled, {num(1), num(-1) / alpha, num(0), src}, d, o));
    s.add(check_equal(s.name("chain.linear_beta"), pde.P[1] / pde.P[0], lin, d, o));
  });

  PfaffianForm form{{"x1", "x2", "Ha"},
                    parse_vector({"-x2/(c2*k) + x1/k + c1*x1^2/(c2*k) + c3*x1/(c2*k) - "
                                  "c1*x1/(c2^2*k) - c3/(c2^2*k)",
                                  "-x1/(c2*k) + 1/(c2^2*k)", "1"})};
  s.guard("form", CheckKind::kCheck, [&] {
    s.add(integrability_check(form, d, o, s.name("form.integrability")));
    s.add(check_zero(s.name("form.exact"), exactness_defect(form), d, o));
    s.add(check_zero(s.name("form.annihilates_chain"),
                     form.coeffs[0] + form.coeffs[1] * lin + form.coeffs[2] * src, d, o));
  });

  FirstOrderPDE chain{{"x1", "x2"}, "Ha", {num(1), lin}, src};
  auto potential = [&](const Expr& N) {
    return check_equal("", gradient(N, std::vector<std::string>{"x1", "x2"}),
                       {-form.coeffs[0], -form.coeffs[1]}, d, o);
  };
  s.guard("nonhom_printed", CheckKind::kCheck, [&] {
    Expr N = s.sol("nonhom_printed");
    s.add(check_pde_solution(chain, N, d, o, s.name("nonhom_printed.pde")));
    Expr lhs = differentiate(N, "x1") + lin * differentiate(N, "x2") - src;
    s.add(check_equal(s.name("nonhom_printed.residual"), lhs, parse("-2*c3/(c2^2*k)"), d, o),
          CheckKind::kCheck, "constant defect left by the sign of the last term");
    auto r = potential(N);
    r.name = s.name("nonhom_printed.form");
    s.add(r, CheckKind::kVerdict);
  });
  s.guard("nonhom_corrected", CheckKind::kCheck, [&] {
    Expr N = s.sol("nonhom_corrected");
    s.add(check_pde_solution(chain, N, d, o, s.name("nonhom_corrected.pde")));
    auto r = potential(N);
    r.name = s.name("nonhom_corrected.form");
    s.add(r);
  });

  s.guard("hom", CheckKind::kCheck, [&] {
    Expr mu = s.sol("mu");
    s.add(check_equal(s.name("hom.integrating_factor"), differentiate(mu * lin, "x2"),
                      differentiate(-mu, "x1"), d, o));
    FirstOrderPDE mu_pde{{"x1", "x2"}, "mu", {num(1), lin}, parse("-c2*mu")};
    s.add(check_pde_solution(mu_pde, mu, d, o, s.name("hom.mu_pde")));
    Expr S = s.sol("S");
    s.add(superposition_check(chain, {S}, s.sol("nonhom_corrected"), d, o,
                              s.name("hom.superposition")));
    auto fi = first_integral_2d(lin, num(-1), "x1", "x2", d, o);
    if (!fi) {
      s.add(make_verdict(s.name("hom.first_integral"), CheckKind::kCheck, false, kInf,
                         o.tolerance, "no first integral found"));
      return;
    }
    Expr jac = differentiate(fi->U, "x1") * differentiate(S, "x2") -
               differentiate(fi->U, "x2") * differentiate(S, "x1");
    s.add(check_zero(s.name("hom.first_integral"), jac, d, o), CheckKind::kCheck,
          "found by " + fi->method + ": " + to_string(fi->U));
  });
  s.used.insert("phi");
}

void mems_suite(Suite& s) {
  const auto& d = s.d;
  const auto& o = s.o;
  Expr alpha = s.sol("alpha");
  Expr x1 = sym("x1");
  Expr beta = sym("beta");
  Expr printed_src = parse("-x3/(c1*(x1 + c0))") * alpha;

  s.guard("matching.first", CheckKind::kCheck, [&] {
    s.add(compare_pde(s.name("matching.first"), matching_pde(s.c, 0, o), {num(0), num(1), num(0)},
                      num(0), d, o));
  });
  s.guard("chain", CheckKind::kCheck, [&] {
    auto pde = matching_pde(s.c, 1, o);
    s.add(compare_pde(s.name("matching.second"), pde, {num(-1), -sym("b"), alpha}, printed_src,
                      d, o));
    s.add(check_equal(s.name("chain.alpha"), {pde.P[0], pde.P[2], pde.R},
                      {num(-1), alpha, printed_src}, d, o));
    s.add(check_equal(s.name("chain.beta"), {x1 * pde.P[0], x1 * pde.P[2], x1 * pde.R},
                      {-x1, beta * (x1 + sym("c0")), parse("-beta*x3/c1")}, d, o));
  });

  FirstOrderPDE chain{{"x1", "x3"}, "Ha", {-x1, beta * (x1 + sym("c0"))}, parse("-beta*x3/c1")};
  PfaffianForm form{{"x1", "x3", "Ha"},
                    parse_vector({"beta*x3/(c0*c1) + beta*x1/(c0*c1) + beta/c1",
                                  "(x3 + beta*x1)/(c0*c1)", "1"})};
  Expr along = form.coeffs[0] * chain.P[0] + form.coeffs[1] * chain.P[1] + chain.R;
  s.guard("form", CheckKind::kCheck, [&] {
    s.add(integrability_check(form, d, o, s.name("form.integrability")));
    s.add(check_equal(s.name("form.potential"),
                      gradient(s.sol("nonhom_printed"), std::vector<std::string>{"x1", "x3"}),
                      {-form.coeffs[0], -form.coeffs[1]}, d, o));
    s.add(check_zero(s.name("form.annihilates_chain"), along, d, o));
    s.add(check_zero(s.name("form.annihilates_chain.beta=2"), along,
                     with_params(d, {{"beta", 2.0}}), o),
          CheckKind::kVerdict, "the added term matches the chain only for beta = 1");
  });

  s.guard("nonhom_printed", CheckKind::kCheck, [&] {
    Expr N = s.sol("nonhom_printed");
    s.add(check_pde_solution(chain, N, d, o, s.name("nonhom_printed.pde")));
    for (double b : {0.5, 2.0}) {
      auto tag = b == 0.5 ? std::string("0.5") : std::string("2");
      s.add(check_pde_solution(chain, N, with_params(d, {{"beta", b}}), o,
                               s.name("nonhom_printed.pde.beta=" + tag)),
            CheckKind::kVerdict);
    }
  });
  s.guard("nonhom_beta2", CheckKind::kCheck, [&] {
    Expr N = s.sol("nonhom_beta2");
    for (double b : {0.5, 1.0, 2.0}) {
      auto tag = b == 0.5 ? std::string("0.5") : b == 1.0 ? std::string("1") : std::string("2");
      s.add(check_pde_solution(chain, N, with_params(d, {{"beta", b}}), o,
                               s.name("nonhom_beta2.pde.beta=" + tag)));
    }
  });
  s.guard("hom.superposition", CheckKind::kCheck, [&] {
    s.add(superposition_check(chain, {s.sol("hom")}, s.sol("nonhom_beta2"), d, o,
                              s.name("hom.superposition")));
  });
  s.guard("phi_x2", CheckKind::kVerdict, [&] {
    DesiredStructure des = s.c.pch_desired;
    des.H_a = des.H_a + sym("x2");
    s.add(check_zero(s.name("phi_x2"), matching_residual(s.c.pch, des).at(0), d, o),
          CheckKind::kVerdict, "dependence on x2 violates the first matching equation");
  });
  s.used.insert("phi");
}

void food_chain_suite(Suite& s) {
  const auto& c = s.c;
  const auto& d = s.d;
  const auto& o = s.o;
  FirstOrderPDE pde1;
  s.guard("chain1.pde", CheckKind::kCheck, [&] {
    pde1 = matching_pde(c, 0, o);
    s.add(compare_pde(s.name("chain1.pde"), pde1, {num(-1), num(0), sym("f")},
                      parse("-x1 + x1*x2 + 1 - f"), d, o));
  });
  s.guard("chain2.pde", CheckKind::kCheck, [&] {
    s.add(compare_pde(s.name("chain2.pde"), matching_pde(c, 1, o), {num(0), num(-1), sym("g3")},
                      parse("-x2 - x1*x2 + x2*x3 + 1"), d, o));
  });
  s.guard("chain1.superposition", CheckKind::kCheck, [&] {
    if (pde1.P.empty()) pde1 = matching_pde(c, 0, o);
    s.add(superposition_check(pde1, {sym("x2"), s.sol("chain1_arg")}, s.sol("chain1_nonhom"), d, o,
                       s.name("chain1.superposition")));
  });
  s.guard("matching.rows", CheckKind::kCheck, [&] {
    auto r = matching_residual(c.pch, c.pch_desired);
    s.add(check_zero(s.name("matching.row1"), r.at(0), d, o), CheckKind::kVerdict);
    s.add(check_zero(s.name("matching.row2"), r.at(1), d, o));
    s.add(check_equal(s.name("row1_defect"), r.at(0), parse("x1*x2 - x1 + 2"), d, o),
          CheckKind::kCheck, "row-1 residual left by the final H_a");
    s.add(check_zero(s.name("f_negated.matching"), r, with_params(d, {{"f", 1.0}}), o),
          CheckKind::kVerdict);
  });
  s.used.insert("Ha_printed");
}

// M_d for lambda3 = l3, lambda4 = -l3 and lambda2 from symmetry.
ExprMatrix pendubot_md(const MechanicalSystem& mech, const Expr& l1, const Expr& l3) {
  const auto& M = mech.M;
  Expr l4 = -l3;
  Expr l2 = (l3 * M(0, 0) + l4 * M(0, 1) - l1 * M(0, 1)) / M(1, 1);
  ExprMatrix L{{l1, l2}, {l3, l4}};
  return L * M;
}

void pendubot_suite(Suite& s) {
  const auto& c = s.c;
  const auto& d = s.d;
  const auto& o = s.o;
  Expr l3 = s.sol("lambda3");
  Expr l4 = s.sol("lambda4");
  Expr q2 = sym("q2");
  auto ke_printed_residual = [&](const Expr& a, const Expr& b) {
    return parse("2*c3*sin(q2)") * (a * a + a * b) +
           b * differentiate(a * parse("c2 + c3*cos(q2)") + b * sym("c2"), "q2");
  };
  auto alpha_free = [&](const ExprMatrix& Md) {
    auto n = c.mech.n() * (c.mech.n() - 1) / 2;
    std::vector<ExprVector> zero(n, ExprVector(c.mech.n(), num(0)));
    std::vector<ExprVector> marker(n, ExprVector(c.mech.n(), sym("alpha_mark")));
    ExprVector lhs, rhs;
    auto eqs = acosta_ke_system(c.mech, Md, marker);
    auto eqs0 = acosta_ke_system(c.mech, Md, zero);
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      if (depends_on(eqs[k].rhs, "alpha_mark")) continue;
      lhs.push_back(eqs0[k].lhs);
      rhs.push_back(eqs0[k].rhs);
    }
    return std::make_pair(lhs, rhs);
  };

  s.guard("ke.printed", CheckKind::kCheck,
          [&] { s.add(check_zero(s.name("ke.printed"), ke_printed_residual(l3, l4), d, o)); });
  s.guard("ke.coefficient", CheckKind::kCheck, [&] {
    auto [lhs, rhs] = alpha_free(c.mech_desired.M_d);
    s.add(check_equal(s.name("ke.coefficient"), lhs, rhs, d, o), CheckKind::kCheck,
          "kinetic equation entry free of the J2 parameters");
  });
  s.guard("lambda_constant", CheckKind::kVerdict, [&] {
    Expr l3c = num(-1);
    s.add(check_zero(s.name("lambda_constant.ke.printed"), ke_printed_residual(l3c, -l3c), d, o),
          CheckKind::kVerdict);
    auto [lhs, rhs] = alpha_free(pendubot_md(c.mech, s.sol("lambda1"), l3c));
    s.add(check_equal(s.name("lambda_constant.ke.coefficient"), lhs, rhs, d, o),
          CheckKind::kVerdict);
  });
  s.guard("lambda3", CheckKind::kCheck, [&] {
    s.add(check_equal(s.name("lambda3"), differentiate(l3, "q2"), l3 * apply(Function::kTan, q2),
                      d, o));
  });

  const Expr& Vd = c.mech_desired.V_d;
  auto lie = [&](const Expr& f) {
    return l3 * differentiate(f, "q1") + l4 * differentiate(f, "q2");
  };
  s.guard("pe.printed", CheckKind::kCheck, [&] {
    s.add(check_equal(s.name("pe.printed"), lie(Vd), parse("c5*g*sin(q1 + q2)"), d, o));
  });
  s.guard("pe.hom", CheckKind::kCheck,
          [&] { s.add(check_zero(s.name("pe.hom"), lie(parse("q1 + q2")), d, o)); });
  Expr f1 = s.sol("f1");
  Expr f2 = s.sol("f2");
  s.guard("pe.f2", CheckKind::kCheck, [&] {
    s.add(check_equal(s.name("pe.f2"), differentiate(f2, "q1") - differentiate(f2, "q2"),
                      parse("-c5*g*cos(q1 + 2*q2)"), d, o));
    s.add(check_equal(s.name("pe.f2.difference"), f2 - f1, parse("c5*g*cos(q2)*sin(q1 + q2)"), d,
                      o));
  });
  s.guard("pe.form", CheckKind::kCheck, [&] {
    PfaffianForm form{{"q1", "q2", "Vd"}, {f1, f2, num(-1)}};
    s.add(integrability_check(form, d, o, s.name("pe.form.integrability")));
    s.add(check_equal(s.name("pe.form.rewritten"), {f1, f2},
                      parse_vector({"c5*g*sin(q2)*cos(q1 + q2)",
                                    "c5*g*sin(q2)*cos(q1 + q2) + c5*g*cos(q2)*sin(q1 + q2)"}),
                      d, o));
    s.add(check_equal(s.name("pe.form.potential"),
                      gradient(s.sol("Vd_nonhom"), std::vector<std::string>{"q1", "q2"}), {f1, f2},
                      d, o));
  });
  s.guard("pe.superposition", CheckKind::kCheck, [&] {
    FirstOrderPDE chain{{"q1", "q2"}, "Vd", {num(-1), num(1)},
                        parse("c5*g*cos(q2)*sin(q1 + q2)")};
    s.add(superposition_check(chain, {parse("q1 + q2")}, s.sol("Vd_nonhom"), d, o,
                              s.name("pe.superposition")));
  });
}

void cdr_spatial_suite(Suite& s) {
  const auto& c = s.c;
  const auto& d = s.d;
  const auto& o = s.o;
  const auto& Md = c.mech_desired.M_d;
  const auto& al = c.mech_desired.alphas;
  Expr y = sym("y"), z = sym("z"), m = sym("m");
  Expr P1 = -z * Md(1, 1) + y * Md(1, 2);
  Expr P2 = -z * Md(1, 2) + y * Md(2, 2);

  s.guard("ke.acosta", CheckKind::kCheck, [&] {
    ExprVector lhs, rhs;
    for (const auto& e : acosta_ke_system(c.mech, Md, al)) {
      lhs.push_back(e.lhs);
      rhs.push_back(e.rhs);
    }
    s.add(check_equal(s.name("ke.acosta"), lhs, rhs, d, o));
  });
  s.guard("ke.displayed", CheckKind::kCheck, [&] {
    auto a = [&](int k, int i) { return al.at(k - 1).at(i - 1); };
    ExprMatrix R(3, 3);
    R(0, 0) = num(2) * (-z * a(1, 1) + y * a(2, 1));
    R(1, 0) = -z * a(2, 1) + y * (a(2, 2) + a(3, 1));
    R(1, 1) = num(2) * y * a(3, 2);
    R(2, 0) = y * a(2, 3) + z * (a(3, 1) - a(1, 3));
    R(2, 1) = y * a(3, 3) + z * a(3, 2);
    R(2, 2) = num(2) * z * a(3, 3);
    ExprVector got, want;
    Expr scale = m / sym("b");
    for (const auto& e : acosta_ke_system(c.mech, Md, al)) {
      auto i = std::max(e.i, e.j), j = std::min(e.i, e.j);
      got.push_back(scale * e.lhs);
      want.push_back(P1 * differentiate(Md(i, j), "y") + P2 * differentiate(Md(i, j), "z"));
      got.push_back(scale * e.rhs);
      want.push_back(m * R(i, j));
    }
    s.add(check_equal(s.name("ke.displayed"), got, want, d, o));
  });

  s.guard("ke.md23_chain", CheckKind::kCheck, [&] {
    Expr W = sym("Md23");
    Expr A = Md(1, 1), B = Md(2, 2);
    auto dA = [&](const char* v) { return differentiate(A, v); };
    auto dB = [&](const char* v) { return differentiate(B, v); };
    Expr R = -(y / num(2) * dB("z") + z * z / (num(2) * y) * dA("z") -
               y * y / (num(2) * z) * dB("y") - z / num(2) * dA("y")) *
                 W +
             y / (num(2) * z) * (-z * A * dB("y") + y * B * dB("z")) +
             z / (num(2) * y) * (-z * A * dA("y") + y * B * dA("z"));
    Domain dw = d;
    dw.set("Md23", {-1.0, 1.0});
    dw.exclusions.push_back(y);
    dw.exclusions.push_back(z);
    CharacteristicSystem cs{{"y", "z"}, "Md23", {-z * A + y * W, -z * W + y * B}, R};
    Expr phi = W - y * z / num(2);
    auto r = characteristic_residuals(cs, {phi}, dw, o).at(0);
    r.name = s.name("ke.md23_chain");
    s.add(r);
    cs.rhs = parse("k2*y^2 - k1*z^2");
    auto v = characteristic_residuals(cs, {phi}, dw, o).at(0);
    v.name = s.name("md23_chain_simplified");
    s.add(v, CheckKind::kVerdict, "right denominator without the factor 1/2");
  });

  const Expr& Vd = c.mech_desired.V_d;
  s.guard("pe.printed", CheckKind::kCheck, [&] {
    s.add(check_equal(s.name("pe.printed"), parse("-m^2*g*z"),
                      parse("-k1*z") * differentiate(Vd, "y") + parse("k2*y") * differentiate(Vd, "z"),
                      d, o));
    s.add(check_equal(s.name("pe.printed.general"), parse("-b*m*g*z"),
                      sym("b") / m * (P1 * differentiate(Vd, "y") + P2 * differentiate(Vd, "z")), d,
                      o));
  });
  FirstOrderPDE pe{{"x", "y", "z"}, "Vd", parse_vector({"0", "-k1*z", "k2*y"}), parse("-m^2*g*z")};
  s.guard("pe.chain", CheckKind::kCheck, [&] {
    auto cs = CharacteristicSystem::from_pde(pe);
    auto rs = characteristic_residuals(
        cs, {sym("x"), s.sol("s"), sym("Vd") - s.sol("Vd_nonhom")}, d, o);
    const char* tags[] = {"pe.chain.x", "pe.chain.s", "pe.chain.nonhom"};
    for (std::size_t i = 0; i < rs.size(); ++i) {
      rs[i].name = s.name(tags[i]);
      s.add(rs[i]);
    }
  });
  s.guard("pe.superposition", CheckKind::kCheck, [&] {
    s.add(superposition_check(pe, {sym("x"), s.sol("s")}, s.sol("Vd_nonhom"), d, o,
                       s.name("pe.superposition")));
  });
  s.guard("natural_equilibrium", CheckKind::kCheck, [&] {
    double r = natural_equilibria_residual(c, {{"x", c.param("xs")}, {"y", c.param("ys")}, {"z", 0.0}});
    s.add(make_verdict(s.name("natural_equilibrium"), CheckKind::kCheck, std::fabs(r) <= 1e-12,
                       std::fabs(r), 1e-12, "G_perp grad V at (xs, ys, 0)"));
  });
  s.guard("calibration.cs_value", CheckKind::kCheck, [&] {
    BenchmarkCase cal = c;
    auto cc = calibrate_case(cal);
    double want = eval(s.sol("cs_analytic"), c.domain.fixed);
    double got = cal.param("cs");
    double r = scaled_residual(got, want);
    s.add(make_verdict(s.name("calibration.cs_value"), CheckKind::kCheck,
                       cc.result.converged && r <= 1e-8, r, 1e-8,
                       "calibrated " + std::to_string(got) + ", closed form " + std::to_string(want)));
  });
  s.guard("j2_open_loop_weighting", CheckKind::kVerdict, [&] {
    MechanicalDesired des = c.mech_desired;
    des.weighting = J2Weighting::kOpenLoopInertia;
    s.add(check_zero(s.name("j2_open_loop_weighting"), ke_pde_residual(c.mech, des),
                     with_params(d, {{"m", 1.5}, {"k1", 2.0}, {"k2", 0.5}}), o),
          CheckKind::kVerdict, "J2 weighted by M^-1 p");
  });
  s.used.insert("Vd_hom");
}

void cdr_planar_suite(Suite& s) {
  const auto& c = s.c;
  const auto& d = s.d;
  const auto& o = s.o;
  Expr P1 = s.sol("P1"), P2 = s.sol("P2"), P3 = s.sol("P3");
  ExprVector P{P1, P2, P3};
  Expr mg = parse("m*g");
  const Expr& Vd = c.mech_desired.V_d;
  std::vector<std::string> q{"x", "y", "theta"};

  s.guard("manifold", CheckKind::kCheck, [&] {
    auto r = c.mech.G_perp * grad(c.mech.V, q);
    s.add(check_equal(s.name("manifold"), r.at(0), parse("a*m*g") * s.sol("manifold"), d, o));
  });
  s.guard("natural_equilibrium", CheckKind::kCheck, [&] {
    double r = natural_equilibria_residual(
        c, {{"x", c.param("xs")}, {"y", c.param("ys")}, {"theta", c.param("ths")}});
    s.add(make_verdict(s.name("natural_equilibrium"), CheckKind::kCheck, std::fabs(r) <= 1e-12,
                       std::fabs(r), 1e-12, "printed manifold at the target"));
  });
  s.guard("pe.printed", CheckKind::kCheck, [&] {
    s.add(check_equal(s.name("pe.printed"), s.sol("manifold") * parse("m*g*a"),
                      dot(P, grad(Vd, q)), d, o));
  });

  FirstOrderPDE pe{q, "Vd", P, mg * P2};
  auto cs = CharacteristicSystem::from_pde(pe);
  auto first_integral = [&](const std::string& check, const Expr& phi, CheckKind kind) {
    s.guard(check, kind, [&] {
      auto r = characteristic_residuals(cs, {phi}, d, o).at(0);
      r.name = s.name(check);
      s.add(r, kind);
    });
  };
  first_integral("chain.U1", s.sol("U1"), CheckKind::kCheck);
  first_integral("chain.nonhom", sym("Vd") - mg * sym("y"), CheckKind::kCheck);
  first_integral("U2_printed", s.sol("U2_printed"), CheckKind::kCheck);
  first_integral("U2_derived", s.sol("U2_derived"), CheckKind::kCheck);

  PfaffianForm combined_form{q, parse_vector({"4*a*cos(theta) - 2*b", "4*a*sin(theta)",
                                       "-4*a*sin(theta)*x + 4*a*cos(theta)*y + 2*a*b*sin(theta)"})};
  s.guard("combined_form", CheckKind::kCheck, [&] {
    s.add(integrability_check(combined_form, d, o, s.name("combined_form.integrability")));
    s.add(check_zero(s.name("combined_form.annihilates_chain"), dot(combined_form.coeffs, P), d, o));
  });
  s.guard("five_stage", CheckKind::kCheck, [&] {
    FiveStageOptions fo;
    fo.sample = o;
    auto t = five_stage_solve(combined_form, d, fo);
    Expr U = s.sol("U");
    Expr jac = differentiate(t.U, "x") * differentiate(U, "y") -
               differentiate(t.U, "y") * differentiate(U, "x");
    s.add(check_zero(s.name("five_stage.U"), jac, d, o), CheckKind::kCheck,
          "found " + to_string(t.U) + " (" + t.stage1_method + ")");
    s.add(check_equal(s.name("five_stage.mu"), t.mu, num(1), d, o));
    s.add(check_equal(s.name("five_stage.K_printed"),
                      combined_form.coeffs[2] + parse("4*a*sin(theta)*x - 4*a*cos(theta)*y"),
                      parse("2*a*b*sin(theta)"), d, o));
    auto r = t.residual_report;
    r.name = s.name("five_stage.parallel");
    s.add(r);
    Expr jac_arg = differentiate(t.phi_arg, "x") * differentiate(s.sol("U1"), "theta") -
                   differentiate(t.phi_arg, "theta") * differentiate(s.sol("U1"), "x");
    s.add(check_zero(s.name("five_stage.phi_arg"), jac_arg, d, o), CheckKind::kCheck,
          "argument " + to_string(t.phi_arg));
  });
  PfaffianForm separable_form{q, parse_vector({"x - b/2", "y", "a*b/2*sin(theta)"})};
  s.guard("separable_form", CheckKind::kCheck, [&] {
    s.add(integrability_check(separable_form, d, o, s.name("separable_form.integrability")));
    s.add(check_zero(s.name("separable_form.annihilates_chain"), dot(separable_form.coeffs, P), d, o));
    s.add(check_equal(s.name("separable_form.potential"), gradient(s.sol("U2_derived") / num(2), q),
                      separable_form.coeffs, d, o));
  });
  s.guard("pe.superposition", CheckKind::kCheck, [&] {
    s.add(superposition_check(pe, {s.sol("U1"), s.sol("U2_derived")}, mg * sym("y"), d, o,
                       s.name("pe.superposition")));
  });
}

}  // namespace

bool VerifyResult::pass() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.kind != CheckKind::kCheck || r.pass; });
}

std::vector<ExprVector> solve_alphas(const MechanicalSystem& mech, const ExprMatrix& M_d,
                                     const Domain& domain, const SampleOptions& opts) {
  std::size_t n = mech.n();
  std::size_t n0 = n * (n - 1) / 2;
  std::vector<ExprVector> marks(n0, ExprVector(n));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n0; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("alpha_" + std::to_string(k + 1) + "_" + std::to_string(i + 1));
      marks[k][i] = sym(names.back());
    }
  }
  auto eqs = acosta_ke_system(mech, M_d, marks);
  std::vector<KEEquation> rows;
  std::set<std::string> present;
  for (const auto& e : eqs) {
    bool involved = false;
    for (const auto& nm : names) {
      if (depends_on(e.rhs, nm)) {
        present.insert(nm);
        involved = true;
      }
    }
    if (involved) rows.push_back(e);
  }
  std::vector<std::string> unknowns;
  for (const auto& nm : names) {
    if (present.count(nm)) unknowns.push_back(nm);
  }
  if (rows.empty() || rows.size() != unknowns.size()) {
    fail(ErrorCode::kDimension, "kinetic equations give " + std::to_string(rows.size()) +
                                    " equations in " + std::to_string(unknowns.size()) +
                                    " alpha entries");
  }
  std::map<std::string, Expr, std::less<>> zero;
  for (const auto& nm : names) zero[nm] = num(0);
  ExprMatrix C(rows.size(), unknowns.size());
  ExprVector b;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      C(r, j) = simplify(differentiate(rows[r].rhs, unknowns[j]));
      for (const auto& nm : names) {
        if (depends_on(C(r, j), nm)) fail(ErrorCode::kNotAffine, "alphas enter nonlinearly");
      }
    }
    b.push_back(simplify(rows[r].lhs - substitute(rows[r].rhs, zero)));
  }
  Expr det = determinant(C);
  for (const auto& pt : sample_points(domain, free_symbols(det), 20, opts.seed)) {
    if (std::fabs(eval(det, pt)) < 1e-12) {
      fail(ErrorCode::kSingularInput, "alpha coefficient matrix is singular");
    }
  }
  ExprVector x = simplify(inverse(C) * b);
  std::vector<ExprVector> out(n0, ExprVector(n, num(0)));
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    auto it = std::find(names.begin(), names.end(), unknowns[j]);
    auto idx = static_cast<std::size_t>(it - names.begin());
    out[idx / n][idx % n] = x[j];
  }
  return out;
}

CaseCalibration calibrate_case(BenchmarkCase& c, double tol) {
  CaseCalibration out;
  Expr Hd = c.desired_energy();
  auto vars = c.state();
  auto xs = c.equilibrium_state();
  Bindings point = c.domain.fixed;
  for (std::size_t i = 0; i < vars.size(); ++i) point[vars[i]] = xs[i];
  if (!c.calibrate.empty()) {
    out.attempted = true;
    out.result = calibrate_equilibrium(Hd, vars, c.calibrate, point, tol);
    if (out.result.converged) {
      for (const auto& p : c.calibrate) {
        auto it = out.result.params.find(p);
        if (it != out.result.params.end()) {
          c.set_param(p, it->second);
          point[p] = it->second;
        }
      }
    }
  } else {
    out.result.converged = true;
  }
  out.result.equilibrium = equilibrium_assignment_check(Hd, vars, point, 1e-8);
  return out;
}

VerifyResult verify_case(const BenchmarkCase& c, const SampleOptions& opts) {
  VerifyResult out;
  Suite s(c, opts, out);
  if (c.kind == ModelKind::kPortHamiltonian) {
    pch_generic(s);
  } else {
    mechanical_generic(s);
  }
  equilibrium_checks(s);
  if (c.suite == "maglev") {
    maglev_suite(s);
  } else if (c.suite == "mems_switch") {
    mems_suite(s);
  } else if (c.suite == "food_chain") {
    food_chain_suite(s);
  } else if (c.suite == "pendubot") {
    pendubot_suite(s);
  } else if (c.suite == "cdr_spatial") {
    cdr_spatial_suite(s);
  } else if (c.suite == "cdr_planar") {
    cdr_planar_suite(s);
  }

  std::set<std::string> reached = s.used;
  reached.insert(c.model_references.begin(), c.model_references.end());
  for (const auto& n : std::set<std::string>(reached)) {
    auto it = c.solution_deps.find(n);
    if (it != c.solution_deps.end()) reached.insert(it->second.begin(), it->second.end());
  }
  for (const auto& [n, e] : c.solutions) {
    if (!reached.count(n)) out.unused_solutions.push_back(n);
  }
  return out;
}

double natural_equilibria_residual(const BenchmarkCase& c, const Bindings& q) {
  if (c.kind != ModelKind::kMechanical) {
    fail(ErrorCode::kDimension, "case " + c.name + " is not a mechanical system");
  }
  Bindings b = c.domain.fixed;
  for (const auto& [k, v] : q) b[k] = v;
  if (c.has_solution("manifold")) return eval(c.solution("manifold"), b);
  double worst = 0.0;
  for (const auto& e : c.mech.G_perp * grad(c.mech.V, c.mech.q)) {
    double v = eval(e, b);
    if (std::fabs(v) > std::fabs(worst)) worst = v;
  }
  return worst;
}

std::vector<std::pair<Expr, Domain>> expression_corpus() {
  std::vector<std::pair<Expr, Domain>> out;
  for (const auto& n : case_names()) {
    auto c = load_case(n);
    auto add = [&](const Expr& e) {
      if (!free_symbols(e).empty()) out.emplace_back(e, c.domain);
    };
    auto add_m = [&](const ExprMatrix& m) {
      for (const auto& e : m.data()) add(e);
    };
    if (c.kind == ModelKind::kPortHamiltonian) {
      add_m(c.pch.J);
      add_m(c.pch.R);
      add(c.pch.H);
      add_m(c.pch.g);
      add_m(c.pch_desired.J_d);
      add(c.pch_desired.H_a);
    } else {
      add_m(c.mech.M);
      add(c.mech.V);
      add_m(c.mech.G);
      add_m(c.mech.G_perp);
      add_m(c.mech_desired.M_d);
      add(c.mech_desired.V_d);
      for (const auto& a : c.mech_desired.alphas) {
        for (const auto& e : a) add(e);
      }
    }
    for (const auto& [k, e] : c.solutions) add(e);
  }
  return out;
}

}  // namespace pfida

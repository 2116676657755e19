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

#include "pfida/pfaffian.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pfida/program.hpp"

namespace pfida {

namespace {

void require_three(const PfaffianForm& f) {
  f.validate();
  if (f.vars.size() != 3) {
    fail(ErrorCode::kDimension, "operation requires a 3-variable form, got " +
                                    std::to_string(f.vars.size()));
  }
}

Expr norm(const ExprVector& v) {
  Expr acc = num(0.0);
  for (const auto& e : v) acc = acc + e * e;
  return apply(Function::kSqrt, acc);
}

ExprVector curl(const PfaffianForm& f) {
  const auto& x = f.vars;
  const Expr& P = f.coeffs[0];
  const Expr& Q = f.coeffs[1];
  const Expr& R = f.coeffs[2];
  return {differentiate(R, x[1]) - differentiate(Q, x[2]),
          differentiate(P, x[2]) - differentiate(R, x[0]),
          differentiate(Q, x[0]) - differentiate(P, x[1])};
}

Expr sum_partials(const ExprVector& P, const std::vector<std::string>& vars, const Expr& phi) {
  Expr acc = num(0.0);
  for (std::size_t i = 0; i < vars.size(); ++i) acc = acc + P[i] * differentiate(phi, vars[i]);
  return acc;
}

}  // namespace

void PfaffianForm::validate() const {
  if (vars.size() < 2) fail(ErrorCode::kDimension, "a Pfaffian form needs at least 2 variables");
  if (coeffs.size() != vars.size()) {
    fail(ErrorCode::kDimension, "form has " + std::to_string(vars.size()) + " variables but " +
                                    std::to_string(coeffs.size()) + " coefficients");
  }
}

void FirstOrderPDE::validate() const {
  if (vars.empty() || P.size() != vars.size()) {
    fail(ErrorCode::kDimension, "PDE needs one coefficient per independent variable");
  }
}

CharacteristicSystem CharacteristicSystem::from_pde(const FirstOrderPDE& pde) {
  pde.validate();
  return CharacteristicSystem{pde.vars, pde.unknown, pde.P, pde.R};
}

Expr integrability_residual(const PfaffianForm& f) {
  require_three(f);
  return dot(f.coeffs, curl(f));
}

ResidualReport integrability_check(const PfaffianForm& f, const Domain& domain,
                                   const SampleOptions& opts, const std::string& name) {
  require_three(f);
  ExprVector c = curl(f);
  Expr res = dot(f.coeffs, c);
  ResidualReport rep = check_scaled(name, {res}, {norm(f.coeffs) * norm(c)}, domain, opts);
  if (node_count(res) <= 2000 && simplify(res).is_number(0.0)) rep.method = "symbolic+sampled";
  return rep;
}

bool is_integrable(const PfaffianForm& f, const Domain& domain, const SampleOptions& opts,
                   ResidualReport* report) {
  ResidualReport rep = integrability_check(f, domain, opts);
  bool ok = rep.pass;
  if (report) *report = std::move(rep);
  return ok;
}

ExprVector exactness_defect(const PfaffianForm& f) {
  require_three(f);
  const auto& x = f.vars;
  const auto& c = f.coeffs;
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  ExprVector out;
  for (auto [i, j] : pairs) out.push_back(differentiate(c[j], x[i]) - differentiate(c[i], x[j]));
  return out;
}

double reconstruct_potential(const PfaffianForm& f, const std::vector<double>& base,
                             const std::vector<double>& target, const Domain& domain,
                             std::array<int, 3> order) {
  require_three(f);
  if (base.size() != 3 || target.size() != 3) {
    fail(ErrorCode::kDimension, "base and target must have 3 coordinates");
  }

  // Exactness on the box spanned by the two points.
  Domain local = domain;
  local.box.clear();
  for (int k = 0; k < 3; ++k) {
    local.set(f.vars[k], {std::min(base[k], target[k]), std::max(base[k], target[k])});
  }
  local.exclusions.clear();
  local.free_range = {0.0, 0.0};
  ExprVector defect = exactness_defect(f);
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  ExprVector scales;
  for (auto [i, j] : pairs) {
    scales.push_back(apply(Function::kAbs, differentiate(f.coeffs[j], f.vars[i])) +
                     apply(Function::kAbs, differentiate(f.coeffs[i], f.vars[j])));
  }
  SampleOptions check_opts{64, 1e-8, 7};
  for (const auto& e : f.coeffs) {
    for (const auto& s : free_symbols(e)) {
      if (!domain.fixed.count(s) && s != f.vars[0] && s != f.vars[1] && s != f.vars[2]) {
        fail(ErrorCode::kUnboundSymbol, "unbound parameter '" + s + "' in form");
      }
    }
  }
  ResidualReport rep = check_scaled("exactness", defect, scales, local, check_opts);
  if (!rep.pass) {
    fail(ErrorCode::kNotExact, "form is not exact between the given points (defect " +
                                   std::to_string(rep.max_rel) + ")");
  }

  std::vector<std::string> slots(f.vars.begin(), f.vars.end());
  for (const auto& [k, v] : domain.fixed) {
    if (k != f.vars[0] && k != f.vars[1] && k != f.vars[2]) slots.push_back(k);
  }
  std::vector<double> point(slots.size());
  for (std::size_t k = 3; k < slots.size(); ++k) point[k] = domain.fixed.at(slots[k]);
  for (int k = 0; k < 3; ++k) point[k] = base[k];

  Program excl(domain.exclusions, slots);
  double margin = 1e-3 * domain.max_width();
  std::vector<double> ev(domain.exclusions.size()), ev0(domain.exclusions.size());

  double total = 0.0;
  for (int axis : order) {
    double a = point[axis];
    double b = target[axis];
    if (a == b) continue;
    // Exclusion crossings along the segment.
    if (!domain.exclusions.empty()) {
      std::vector<double> probe = point;
      for (int s = 0; s <= 256; ++s) {
        probe[axis] = a + (b - a) * s / 256.0;
        try {
          excl.run(probe, ev);
        } catch (const Error&) {
          fail(ErrorCode::kDomain, "integration path leaves the domain");
        }
        for (std::size_t e = 0; e < ev.size(); ++e) {
          bool crossed = s > 0 && ((ev[e] > 0) != (ev0[e] > 0));
          if (std::fabs(ev[e]) < margin || crossed) {
            fail(ErrorCode::kDomain, "integration path crosses the exclusion " +
                                         to_string(domain.exclusions[e]) + " != 0");
          }
        }
        ev0 = ev;
      }
    }
    Program integrand(std::vector<Expr>{f.coeffs[axis]}, slots);
    std::vector<double> probe = point;
    auto fn = [&](double t) {
      probe[axis] = t;
      double out = 0.0;
      integrand.run(probe, std::span<double>(&out, 1));
      return out;
    };
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 15, 1e-13);
    point[axis] = b;
  }
  return total;
}

ResidualReport check_pde_solution(const FirstOrderPDE& pde, const Expr& candidate,
                                  const Domain& domain, const SampleOptions& opts,
                                  const std::string& name) {
  pde.validate();
  std::map<std::string, Expr, std::less<>> rep{{pde.unknown, candidate}};
  ExprVector P = substitute(pde.P, rep);
  Expr R = substitute(pde.R, rep);
  return check_equal(name, sum_partials(P, pde.vars, candidate), R, domain, opts);
}

std::vector<ResidualReport> characteristic_residuals(const CharacteristicSystem& cs,
                                                     const ExprVector& phis, const Domain& domain,
                                                     const SampleOptions& opts,
                                                     const std::string& name) {
  std::vector<ResidualReport> out;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    Expr lhs = sum_partials(cs.directions, cs.vars, phis[i]);
    Expr rhs = -(cs.rhs * differentiate(phis[i], cs.unknown));
    out.push_back(check_equal(name + "[" + std::to_string(i) + "]", lhs, rhs, domain, opts));
  }
  return out;
}

ResidualReport superposition_check(const FirstOrderPDE& pde, const ExprVector& hom,
                                   const Expr& nonhom, const Domain& domain,
                                   const SampleOptions& opts,
                                   const std::string& name) {
  pde.validate();
  for (const auto& p : pde.P) {
    if (depends_on(p, pde.unknown)) {
      fail(ErrorCode::kHypothesisViolated, "coefficient " + to_string(p) + " depends on " +
                                               pde.unknown);
    }
  }
  if (depends_on(pde.R, pde.unknown)) {
    fail(ErrorCode::kHypothesisViolated, "right-hand side depends on " + pde.unknown);
  }
  ExprVector lhs, rhs;
  Expr total = nonhom;
  for (const auto& h : hom) {
    lhs.push_back(sum_partials(pde.P, pde.vars, h));
    rhs.push_back(num(0.0));
    total = total + h;
  }
  lhs.push_back(sum_partials(pde.P, pde.vars, nonhom));
  rhs.push_back(pde.R);
  lhs.push_back(sum_partials(pde.P, pde.vars, total));
  rhs.push_back(pde.R);
  return check_equal(name, lhs, rhs, domain, opts);
}

}  // namespace pfida

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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pfida/matrix.hpp"
#include "pfida/sampling.hpp"

namespace pfida {

/// sum_i f_i dx_i = 0
struct PfaffianForm {
  std::vector<std::string> vars;
  ExprVector coeffs;

  void validate() const;
};

/// sum_i P_i dz/dx_i = R, where P_i and R may reference z.
struct FirstOrderPDE {
  std::vector<std::string> vars;
  std::string unknown = "z";
  ExprVector P;
  Expr R;

  void validate() const;
};

/// dx_1/P_1 = ... = dx_n/P_n = dz/R. A zero direction means the variable is
/// constant along characteristics.
struct CharacteristicSystem {
  std::vector<std::string> vars;
  std::string unknown = "z";
  ExprVector directions;
  Expr rhs;

  static CharacteristicSystem from_pde(const FirstOrderPDE& pde);
};

/// P (R_y - Q_z) + Q (P_z - R_x) + R (Q_x - P_y) for a 3-variable form.
Expr integrability_residual(const PfaffianForm& f);

/// Hybrid zero test of the integrability residual, scaled by |X| |curl X|.
ResidualReport integrability_check(const PfaffianForm& f, const Domain& domain,
                                   const SampleOptions& opts, const std::string& name = "integrability");
bool is_integrable(const PfaffianForm& f, const Domain& domain, const SampleOptions& opts,
                   ResidualReport* report = nullptr);

/// Components d f_j/d x_i - d f_i/d x_j ordered (1,2), (1,3), (2,3).
ExprVector exactness_defect(const PfaffianForm& f);

/// Line integral of the form along the axis-aligned polyline from base to
/// target, moving the coordinates in `order`. `domain` supplies parameter
/// values and singular sets.
double reconstruct_potential(const PfaffianForm& f, const std::vector<double>& base,
                             const std::vector<double>& target, const Domain& domain,
                             std::array<int, 3> order = {0, 1, 2});

/// Residual of sum_i P_i d(candidate)/dx_i against R with z replaced by the
/// candidate.
ResidualReport check_pde_solution(const FirstOrderPDE& pde, const Expr& candidate,
                                  const Domain& domain, const SampleOptions& opts,
                                  const std::string& name = "pde_solution");

/// One report per candidate first integral phi(x, z).
std::vector<ResidualReport> characteristic_residuals(const CharacteristicSystem& cs,
                                                     const ExprVector& phis, const Domain& domain,
                                                     const SampleOptions& opts,
                                                     const std::string& name = "characteristic");

/// Homogeneous/particular split: every hom candidate is annihilated by
/// sum_i P_i d/dx_i, nonhom solves the full PDE, and so does their sum.
/// ErrorCode::kHypothesisViolated when P or R depends on z.
ResidualReport superposition_check(const FirstOrderPDE& pde, const ExprVector& hom,
                                   const Expr& nonhom, const Domain& domain,
                                   const SampleOptions& opts,
                                   const std::string& name = "superposition");

/// First integral U(x, y) of P dx + Q dy = 0, i.e. P U_y - Q U_x = 0, found
/// by the recognizer cascade: exact, integrating factor (exp of a one-variable
/// integral, or a power product), separable, linear in one variable. Other
/// symbols are constants. Returns nullopt when the cascade is exhausted.
struct FirstIntegral {
  Expr U;
  std::string method;
};
std::optional<FirstIntegral> first_integral_2d(const Expr& P, const Expr& Q, const std::string& x,
                                               const std::string& y, const Domain& domain,
                                               const SampleOptions& opts);

struct SolutionTrace {
  Expr U;
  Expr mu;
  Expr K;
  Expr K_of_u;  // K rewritten over (u, x3)
  Expr phi_arg;
  std::string stage1_method;
  std::string stage4_method;
  bool hint_used = false;
  std::vector<ResidualReport> stage_reports;
  ResidualReport residual_report;  // grad(phi_arg) parallel to X
};

struct FiveStageOptions {
  std::optional<Expr> hint_u;
  SampleOptions sample;
};

/// Name of the stand-in symbol for U in K(u, x3).
inline constexpr const char* kLevelSymbol = "u_";

SolutionTrace five_stage_solve(const PfaffianForm& f, const Domain& domain,
                               const FiveStageOptions& options);

struct FormFile {
  PfaffianForm form;
  Domain domain;
};

/// Line format: `vars = x,y,z`, `P = ...`, `Q = ...`, `R = ...`,
/// `exclude = <expr> != 0`, `domain <var> = <lo>,<hi>`,
/// `param <name> = <value>`; `#` starts a comment.
FormFile parse_form(std::string_view text);
FormFile load_form(const std::string& path);

}  // namespace pfida

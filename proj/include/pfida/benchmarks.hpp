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

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfida/idapbc.hpp"

namespace pfida {

enum class ModelKind { kPortHamiltonian, kMechanical };

struct CaseVariant {
  std::string name;
  std::string note;
};

/// One displayed relation of a worked example: the check-name prefixes that
/// exercise it, or a note explaining why it is not checked.
struct CoverageItem {
  std::string label;
  std::vector<std::string> checks;
  std::string note;
};

using NamedExprs = std::vector<std::pair<std::string, Expr>>;

struct BenchmarkCase {
  std::string name;
  std::string suite;
  std::string description;
  ModelKind kind = ModelKind::kPortHamiltonian;

  PCHSystem pch;
  DesiredStructure pch_desired;
  MechanicalSystem mech;
  MechanicalDesired mech_desired;
  /// Mechanical cases whose alphas come from solve_alphas.
  bool derive_alphas = false;

  /// Named closed forms, each already expanded over earlier entries.
  NamedExprs solutions;
  /// Solutions each solution refers to, transitively.
  std::map<std::string, std::set<std::string>> solution_deps;
  /// Solutions the model, desired structure or equilibrium refer to.
  std::set<std::string> model_references;
  /// Parameter defaults in declaration order; also bound in domain.fixed.
  std::vector<std::pair<std::string, double>> params;
  Domain domain;
  NamedExprs equilibrium;
  std::vector<std::string> calibrate;
  std::vector<CaseVariant> variants;
  std::vector<CoverageItem> coverage;

  bool has_solution(std::string_view name) const;
  /// ErrorCode::kInvalidArgument when absent.
  const Expr& solution(std::string_view name) const;
  double param(std::string_view name) const;
  void set_param(const std::string& name, double value);

  /// The model the simulator runs: the PCH model, or the lowered mechanical one.
  PCHSystem state_model() const;
  Expr desired_energy() const;
  std::vector<std::string> state() const;
  /// Feedback law over the state; mechanical cases use the torque law.
  ExprVector controller(const SampleOptions& opts) const;
  /// Equilibrium state with parameters bound; momenta default to 0.
  std::vector<double> equilibrium_state() const;
  bool has_equilibrium() const { return !equilibrium.empty(); }
};

/// Sections [case] [params] [solutions] [system] [desired] [domain]
/// [equilibrium]; `name = value` lines, matrices `[[e, e], [e, e]]`, vectors
/// `[e, e]`, intervals `(lo, hi)`, `exclude = <expr> != 0`. A value with
/// unbalanced brackets continues on the next line. ErrorCode::kSyntax on
/// malformed input.
BenchmarkCase parse_case(std::string_view text);
BenchmarkCase load_case_file(const std::string& path);

/// The six shipped cases; ErrorCode::kUnknownCase otherwise.
BenchmarkCase load_case(std::string_view name);
/// Embedded source text of a shipped case.
std::string_view case_text(std::string_view name);
std::vector<std::string> case_names();

/// Case name, or a path to a case file when one exists there.
BenchmarkCase resolve_case(const std::string& name_or_path);

struct CaseCalibration {
  Calibration result;
  bool attempted = false;
};

/// Solves for the case's `calibrate` parameters so that grad H_d vanishes at
/// the equilibrium; on convergence the parameters are stored in the case.
CaseCalibration calibrate_case(BenchmarkCase& c, double tol = 1e-10);

struct VerifyResult {
  std::vector<ResidualReport> reports;
  std::vector<std::string> unused_solutions;

  bool pass() const;
};

/// Structural invariants, matching or kinetic/potential residuals, closed-loop
/// identity, equilibrium after calibration, and the case-specific suite.
/// Failing checks are reported, never thrown.
VerifyResult verify_case(const BenchmarkCase& c, const SampleOptions& opts);

/// G_perp grad_q V at q, or the case's printed `manifold` expression when it
/// has one. ErrorCode::kDimension for non-mechanical cases.
double natural_equilibria_residual(const BenchmarkCase& c, const Bindings& q);

/// Every expression appearing in the shipped cases, with the domain that
/// binds it.
std::vector<std::pair<Expr, Domain>> expression_corpus();

/// Alphas solving the equations of acosta_ke_system that involve them, when
/// those form a square linear system. ErrorCode::kDimension otherwise.
std::vector<ExprVector> solve_alphas(const MechanicalSystem& mech, const ExprMatrix& M_d,
                                     const Domain& domain, const SampleOptions& opts);

}  // namespace pfida

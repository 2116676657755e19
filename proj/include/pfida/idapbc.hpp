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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pfida/matrix.hpp"
#include "pfida/pfaffian.hpp"
#include "pfida/sampling.hpp"

namespace pfida {

/// x' = (J - R) grad H + g u
struct PCHSystem {
  std::vector<std::string> x;
  ExprMatrix J;
  ExprMatrix R;
  Expr H;
  ExprMatrix g;
  ExprMatrix g_perp;

  std::size_t n() const { return x.size(); }
  std::size_t m() const { return g.cols(); }
  /// ErrorCode::kDimension on inconsistent shapes.
  void validate() const;
};

/// H_d = H + H_a unless H_d is given directly.
struct DesiredStructure {
  ExprMatrix J_d;
  ExprMatrix R_d;
  Expr H_a;
  std::optional<Expr> H_d;

  Expr desired_energy(const PCHSystem& sys) const;
};

/// H = 1/2 p^T M^-1 p + V, always regenerated from M and V.
struct MechanicalSystem {
  std::vector<std::string> q;
  std::vector<std::string> p;
  ExprMatrix M;
  Expr V;
  ExprMatrix G;
  ExprMatrix G_perp;

  std::size_t n() const { return q.size(); }
  std::size_t m() const { return G.cols(); }
  void validate() const;

  ExprMatrix M_inv() const;
  Expr kinetic() const;
  Expr hamiltonian() const;
  /// State (q, p), J = [0 I; -I 0], R = 0, g = [0; G], g_perp = diag(I, G_perp).
  PCHSystem lowered() const;
  std::vector<std::string> state() const;
};

/// Momentum weighting used inside J2 = [p~^T alpha_k].
enum class J2Weighting { kDesiredInertia, kOpenLoopInertia };

struct MechanicalDesired {
  ExprMatrix M_d;
  Expr V_d;
  std::optional<ExprMatrix> J2;
  std::vector<ExprVector> alphas;
  ExprMatrix K_v;
  J2Weighting weighting = J2Weighting::kDesiredInertia;

  ExprMatrix M_d_inv() const;
  Expr kinetic(const MechanicalSystem& mech) const;
  Expr energy(const MechanicalSystem& mech) const;
  /// The explicit J2 if present, otherwise build_j2 over the alphas, otherwise 0.
  ExprMatrix j2(const MechanicalSystem& mech) const;
  /// Closed-loop structure in the lowered coordinates.
  DesiredStructure lowered(const MechanicalSystem& mech) const;
};

ExprVector grad(const Expr& e, const std::vector<std::string>& vars);

/// g_perp [(J - R) grad H - (J_d - R_d) grad H_d]
ExprVector matching_residual(const PCHSystem& sys, const DesiredStructure& des);

/// (J - R) grad H + g u
ExprVector open_loop_field(const PCHSystem& sys, const ExprVector& u);
/// (J_d - R_d) grad H_d
ExprVector desired_field(const PCHSystem& sys, const DesiredStructure& des);

/// u = (g^T g)^-1 g^T [(J_d - R_d) grad H_d - (J - R) grad H]. The domain
/// is sampled for det(g^T g); ErrorCode::kSingularInput below 1e-12.
ExprVector control_law(const PCHSystem& sys, const DesiredStructure& des, const Domain& domain,
                       const SampleOptions& opts);

/// tau = (G^T G)^-1 G^T (grad_q H - M_d M^-1 grad_q H_d + (J2 - G K_v G^T) M_d^-1 p)
ExprVector mechanical_control_law(const MechanicalSystem& mech, const MechanicalDesired& des,
                                  const Domain& domain, const SampleOptions& opts);

/// Same law evaluated with dense linear algebra at one point; any n.
Eigen::VectorXd mechanical_control_at(const MechanicalSystem& mech, const MechanicalDesired& des,
                                      const Bindings& point);

/// Desired closed-loop field [M^-1 M_d grad_q H_d; -M_d M^-1 grad_q H_d + (J2 - G K_v G^T) grad_p H_d].
ExprVector mechanical_desired_field(const MechanicalSystem& mech, const MechanicalDesired& des);

/// G_perp {grad_q(p^T M^-1 p) - M_d M^-1 grad_q(p^T M_d^-1 p) + 2 J2 M_d^-1 p}
ExprVector ke_pde_residual(const MechanicalSystem& mech, const MechanicalDesired& des);
/// G_perp {grad_q V - M_d M^-1 grad_q V_d}
ExprVector pe_pde_residual(const MechanicalSystem& mech, const MechanicalDesired& des);

/// Reads `residual` as b - sum_i a_i v_i, where v_i are the symbols in
/// `partials` standing for dz/dx_i, and returns sum_i a_i dz/dx_i = b.
/// ErrorCode::kNotAffine when the residual is not affine in `partials`.
FirstOrderPDE to_characteristics(const Expr& residual, const std::vector<std::string>& vars,
                                 const std::vector<std::string>& partials,
                                 const std::string& unknown, const Domain& domain,
                                 const SampleOptions& opts);

/// Upper triangle filled row by row with p~^T alpha_k, skew-completed.
ExprMatrix build_j2(const std::vector<ExprVector>& alphas, const MechanicalSystem& mech,
                    const ExprMatrix& M_d, J2Weighting weighting = J2Weighting::kDesiredInertia);

/// W_k = F^{ij} - (F^{ij})^T for the k-th pair i < j in row order.
std::vector<Eigen::MatrixXd> w_matrices(std::size_t n);

/// One entry (i <= j) of sum_i gamma_i dM_d/dq_i + sum_j G_perp_j M_d (dM^-1/dq_j) M_d
/// = -(JA^T + AJ^T) for one row of G_perp.
struct KEEquation {
  std::size_t row = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  Expr lhs;
  Expr rhs;
};
std::vector<KEEquation> acosta_ke_system(const MechanicalSystem& mech, const ExprMatrix& M_d,
                                         const std::vector<ExprVector>& alphas);

struct EquilibriumReport {
  double gradient_norm = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<double> eigenvalues;
  std::string verdict;  // "minimum", "stationary-only" or "not-stationary"
  bool pass = false;
};

/// Exact gradient and central-difference Hessian of H_d at `point`, which
/// binds every symbol of H_d.
EquilibriumReport equilibrium_assignment_check(const Expr& H_d, const std::vector<std::string>& vars,
                                               const Bindings& point, double tol);

struct Calibration {
  Bindings params;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  EquilibriumReport equilibrium;
};

/// Solves grad_vars H_d = 0 at `point` for `free_params` (initial values in
/// `point`) by Levenberg-Marquardt damped Newton, at most 50 iterations.
Calibration calibrate_equilibrium(const Expr& H_d, const std::vector<std::string>& vars,
                                  const std::vector<std::string>& free_params,
                                  const Bindings& point, double tol);

/// Sampled structural checks; kind is kCheck for the invariants of the model
/// and kVerdict for positivity of designer-chosen matrices.
std::vector<ResidualReport> pch_structure_checks(const PCHSystem& sys, const Domain& domain,
                                                 const SampleOptions& opts,
                                                 const std::string& prefix = "model");
std::vector<ResidualReport> desired_structure_checks(const DesiredStructure& des,
                                                     const Domain& domain,
                                                     const SampleOptions& opts,
                                                     const std::string& prefix = "desired");
std::vector<ResidualReport> mechanical_structure_checks(const MechanicalSystem& mech,
                                                        const Domain& domain,
                                                        const SampleOptions& opts);
std::vector<ResidualReport> mechanical_desired_checks(const MechanicalSystem& mech,
                                                      const MechanicalDesired& des,
                                                      const Domain& domain,
                                                      const SampleOptions& opts);

/// Smallest eigenvalue of the symmetric part over sampled points.
ResidualReport psd_check(const std::string& name, const ExprMatrix& A, const Domain& domain,
                         const SampleOptions& opts, bool strict, CheckKind kind);

}  // namespace pfida

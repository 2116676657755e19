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

#include "pfida/idapbc.hpp"

#include <cmath>
#include <limits>

namespace pfida {

namespace {

void require_shape(const ExprMatrix& a, std::size_t rows, std::size_t cols, const char* what) {
  if (a.rows() != rows || a.cols() != cols) {
    fail(ErrorCode::kDimension, std::string(what) + " must be " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + ", got " + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()));
  }
}

ExprMatrix zeros(std::size_t r, std::size_t c) {
  ExprMatrix z(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) z(i, j) = num(0.0);
  return z;
}

Expr quadratic(const ExprVector& v, const ExprMatrix& A) { return dot(v, A * v); }

std::set<std::string> symbols_of(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const auto& e : es) {
    auto s = free_symbols(e);
    out.insert(s.begin(), s.end());
  }
  return out;
}

ExprVector flatten(const ExprMatrix& a) { return a.data(); }

/// Sampled determinant guard for g^T g.
void require_invertible(const ExprMatrix& gtg, const Domain& domain, const SampleOptions& opts) {
  Expr det = determinant(gtg);
  std::size_t n = std::min<std::size_t>(opts.points, 64);
  for (const auto& b : sample_points(domain, free_symbols(det), n, opts.seed)) {
    double d = 0.0;
    try {
      d = eval(det, b);
    } catch (const Error&) {
      continue;
    }
    if (!(std::fabs(d) > 1e-12)) {
      fail(ErrorCode::kSingularInput, "input matrix g^T g is singular at a sampled point (det " +
                                          std::to_string(d) + ")");
    }
  }
}

ExprMatrix block(const ExprMatrix& a, const ExprMatrix& b, const ExprMatrix& c,
                 const ExprMatrix& d) {
  ExprMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      bool top = i < a.rows();
      bool left = j < a.cols();
      std::size_t r = top ? i : i - a.rows();
      std::size_t k = left ? j : j - a.cols();
      out(i, j) = top ? (left ? a(r, k) : b(r, k)) : (left ? c(r, k) : d(r, k));
    }
  }
  return out;
}

ExprMatrix negate(const ExprMatrix& a) { return num(-1.0) * a; }

}  // namespace

ExprVector grad(const Expr& e, const std::vector<std::string>& vars) {
  return gradient(e, std::span<const std::string>(vars));
}

void PCHSystem::validate() const {
  std::size_t nn = n();
  if (nn == 0) fail(ErrorCode::kDimension, "PCH system has no states");
  require_shape(J, nn, nn, "J");
  require_shape(R, nn, nn, "R");
  if (g.rows() != nn) fail(ErrorCode::kDimension, "g must have one row per state");
  if (!g_perp.empty() && g_perp.cols() != nn) {
    fail(ErrorCode::kDimension, "g_perp must have one column per state");
  }
}

Expr DesiredStructure::desired_energy(const PCHSystem& sys) const {
  return H_d ? *H_d : sys.H + H_a;
}

void MechanicalSystem::validate() const {
  std::size_t nn = n();
  if (nn == 0 || p.size() != nn) {
    fail(ErrorCode::kDimension, "mechanical system needs matching q and p symbol lists");
  }
  require_shape(M, nn, nn, "M");
  if (G.rows() != nn) fail(ErrorCode::kDimension, "G must have one row per coordinate");
  if (!G_perp.empty() && G_perp.cols() != nn) {
    fail(ErrorCode::kDimension, "G_perp must have one column per coordinate");
  }
}

ExprMatrix MechanicalSystem::M_inv() const { return simplify(inverse(M)); }

Expr MechanicalSystem::kinetic() const { return num(0.5) * quadratic(symbols(p), M_inv()); }

Expr MechanicalSystem::hamiltonian() const { return kinetic() + V; }

std::vector<std::string> MechanicalSystem::state() const {
  std::vector<std::string> s = q;
  s.insert(s.end(), p.begin(), p.end());
  return s;
}

PCHSystem MechanicalSystem::lowered() const {
  validate();
  std::size_t nn = n();
  std::size_t mm = m();
  PCHSystem out;
  out.x = state();
  ExprMatrix I = ExprMatrix::identity(nn);
  out.J = block(zeros(nn, nn), I, negate(I), zeros(nn, nn));
  out.R = zeros(2 * nn, 2 * nn);
  out.H = hamiltonian();
  out.g = zeros(2 * nn, mm);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < mm; ++j) out.g(nn + i, j) = G(i, j);
  std::size_t k = G_perp.rows();
  out.g_perp = zeros(nn + k, 2 * nn);
  for (std::size_t i = 0; i < nn; ++i) out.g_perp(i, i) = num(1.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < nn; ++j) out.g_perp(nn + r, nn + j) = G_perp(r, j);
  return out;
}

ExprMatrix MechanicalDesired::M_d_inv() const { return simplify(inverse(M_d)); }

Expr MechanicalDesired::kinetic(const MechanicalSystem& mech) const {
  return num(0.5) * quadratic(symbols(mech.p), M_d_inv());
}

Expr MechanicalDesired::energy(const MechanicalSystem& mech) const {
  return kinetic(mech) + V_d;
}

ExprMatrix MechanicalDesired::j2(const MechanicalSystem& mech) const {
  if (J2) return *J2;
  if (!alphas.empty()) return build_j2(alphas, mech, M_d, weighting);
  return zeros(mech.n(), mech.n());
}

DesiredStructure MechanicalDesired::lowered(const MechanicalSystem& mech) const {
  std::size_t nn = mech.n();
  ExprMatrix Minv = mech.M_inv();
  ExprMatrix damping = mech.G * K_v * mech.G.transpose();
  DesiredStructure out;
  out.J_d = block(zeros(nn, nn), Minv * M_d, negate(M_d * Minv), j2(mech));
  out.R_d = block(zeros(nn, nn), zeros(nn, nn), zeros(nn, nn), damping);
  out.H_d = energy(mech);
  return out;
}

ExprVector matching_residual(const PCHSystem& sys, const DesiredStructure& des) {
  sys.validate();
  std::size_t n = sys.n();
  require_shape(des.J_d, n, n, "J_d");
  require_shape(des.R_d, n, n, "R_d");
  if (sys.g_perp.empty()) return {};
  return sys.g_perp * (open_loop_field(sys, {}) - desired_field(sys, des));
}

ExprVector open_loop_field(const PCHSystem& sys, const ExprVector& u) {
  ExprVector f = (sys.J - sys.R) * grad(sys.H, sys.x);
  if (u.empty()) return f;
  if (u.size() != sys.m()) fail(ErrorCode::kDimension, "input vector has the wrong length");
  return f + sys.g * u;
}

ExprVector desired_field(const PCHSystem& sys, const DesiredStructure& des) {
  return (des.J_d - des.R_d) * grad(des.desired_energy(sys), sys.x);
}

ExprVector control_law(const PCHSystem& sys, const DesiredStructure& des, const Domain& domain,
                       const SampleOptions& opts) {
  sys.validate();
  require_shape(des.J_d, sys.n(), sys.n(), "J_d");
  require_shape(des.R_d, sys.n(), sys.n(), "R_d");
  ExprMatrix gt = sys.g.transpose();
  ExprMatrix gtg = simplify(gt * sys.g);
  require_invertible(gtg, domain, opts);
  return inverse(gtg) * (gt * (desired_field(sys, des) - open_loop_field(sys, {})));
}

ExprVector mechanical_desired_field(const MechanicalSystem& mech, const MechanicalDesired& des) {
  return desired_field(mech.lowered(), des.lowered(mech));
}

ExprVector mechanical_control_law(const MechanicalSystem& mech, const MechanicalDesired& des,
                                  const Domain& domain, const SampleOptions& opts) {
  mech.validate();
  std::size_t n = mech.n();
  require_shape(des.M_d, n, n, "M_d");
  require_shape(des.K_v, mech.m(), mech.m(), "K_v");
  ExprMatrix Gt = mech.G.transpose();
  ExprMatrix gtg = simplify(Gt * mech.G);
  require_invertible(gtg, domain, opts);

  ExprMatrix Minv = mech.M_inv();
  ExprMatrix Mdinv = des.M_d_inv();
  ExprVector p = symbols(mech.p);
  Expr H = mech.hamiltonian();
  Expr Hd = des.energy(mech);
  ExprVector ptilde = Mdinv * p;
  ExprMatrix shaping = des.j2(mech) - mech.G * des.K_v * Gt;
  ExprVector inner =
      grad(H, mech.q) - (des.M_d * Minv) * grad(Hd, mech.q) + shaping * ptilde;
  return inverse(gtg) * (Gt * inner);
}

Eigen::VectorXd mechanical_control_at(const MechanicalSystem& mech, const MechanicalDesired& des,
                                      const Bindings& point) {
  mech.validate();
  std::size_t n = mech.n();
  Eigen::MatrixXd M = evaluate(mech.M, point);
  Eigen::MatrixXd Md = evaluate(des.M_d, point);
  Eigen::MatrixXd G = evaluate(mech.G, point);
  Eigen::MatrixXd Kv = evaluate(des.K_v, point);
  Eigen::VectorXd p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = point.at(mech.p[i]);

  Eigen::VectorXd v = M.partialPivLu().solve(p);
  Eigen::VectorXd vd = Md.partialPivLu().solve(p);
  Eigen::VectorXd dV = evaluate(grad(mech.V, mech.q), point);
  Eigen::VectorXd dVd = evaluate(grad(des.V_d, mech.q), point);
  Eigen::VectorXd dK(n), dKd(n);
  for (std::size_t i = 0; i < n; ++i) {
    dK[i] = -0.5 * v.dot(evaluate(differentiate(mech.M, mech.q[i]), point) * v);
    dKd[i] = -0.5 * vd.dot(evaluate(differentiate(des.M_d, mech.q[i]), point) * vd);
  }

  Eigen::MatrixXd J2 = Eigen::MatrixXd::Zero(n, n);
  if (des.J2) {
    J2 = evaluate(*des.J2, point);
  } else if (!des.alphas.empty()) {
    Eigen::VectorXd pt = des.weighting == J2Weighting::kDesiredInertia ? vd : v;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        double e = pt.dot(evaluate(des.alphas.at(k), point));
        J2(i, j) = e;
        J2(j, i) = -e;
      }
    }
  }

  Eigen::MatrixXd MdMinv = M.transpose().partialPivLu().solve(Md.transpose()).transpose();
  Eigen::VectorXd inner = dV + dK - MdMinv * (dVd + dKd) + (J2 - G * Kv * G.transpose()) * vd;
  return (G.transpose() * G).ldlt().solve(G.transpose() * inner);
}

ExprVector ke_pde_residual(const MechanicalSystem& mech, const MechanicalDesired& des) {
  mech.validate();
  require_shape(des.M_d, mech.n(), mech.n(), "M_d");
  if (mech.G_perp.empty()) return {};
  ExprVector p = symbols(mech.p);
  ExprMatrix Minv = mech.M_inv();
  ExprMatrix Mdinv = des.M_d_inv();
  ExprVector inner = grad(quadratic(p, Minv), mech.q) -
                     (des.M_d * Minv) * grad(quadratic(p, Mdinv), mech.q) +
                     num(2.0) * (des.j2(mech) * (Mdinv * p));
  return mech.G_perp * inner;
}

ExprVector pe_pde_residual(const MechanicalSystem& mech, const MechanicalDesired& des) {
  mech.validate();
  require_shape(des.M_d, mech.n(), mech.n(), "M_d");
  if (mech.G_perp.empty()) return {};
  ExprVector inner = grad(mech.V, mech.q) - (des.M_d * mech.M_inv()) * grad(des.V_d, mech.q);
  return mech.G_perp * inner;
}

FirstOrderPDE to_characteristics(const Expr& residual, const std::vector<std::string>& vars,
                                 const std::vector<std::string>& partials,
                                 const std::string& unknown, const Domain& domain,
                                 const SampleOptions& opts) {
  if (vars.size() != partials.size() || vars.empty()) {
    fail(ErrorCode::kDimension, "need one gradient symbol per independent variable");
  }
  std::map<std::string, Expr, std::less<>> clear;
  for (const auto& v : partials) clear[v] = num(0.0);

  FirstOrderPDE pde;
  pde.vars = vars;
  pde.unknown = unknown;
  for (const auto& v : partials) {
    Expr a = -differentiate(residual, v);
    for (const auto& w : partials) {
      if (!depends_on(a, w)) continue;
      ResidualReport rep = check_zero("affine", differentiate(a, w), domain, opts);
      if (!rep.pass) {
        fail(ErrorCode::kNotAffine, "residual is not affine in " + w + " (coefficient of " + v +
                                        " is " + to_string(a) + ")");
      }
    }
    pde.P.push_back(simplify(substitute(a, clear)));
  }
  pde.R = simplify(substitute(residual, clear));
  return pde;
}

ExprMatrix build_j2(const std::vector<ExprVector>& alphas, const MechanicalSystem& mech,
                    const ExprMatrix& M_d, J2Weighting weighting) {
  std::size_t n = mech.n();
  std::size_t n0 = n * (n - 1) / 2;
  if (alphas.size() != n0) {
    fail(ErrorCode::kDimension, "J2 needs " + std::to_string(n0) + " alpha vectors, got " +
                                    std::to_string(alphas.size()));
  }
  for (const auto& a : alphas) {
    if (a.size() != n) fail(ErrorCode::kDimension, "alpha vectors must have length n");
  }
  ExprVector p = symbols(mech.p);
  ExprMatrix W = weighting == J2Weighting::kDesiredInertia ? simplify(inverse(M_d)) : mech.M_inv();
  ExprVector pt = W * p;
  ExprMatrix J2 = zeros(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      Expr e = dot(pt, alphas[k]);
      J2(i, j) = e;
      J2(j, i) = -e;
    }
  }
  return J2;
}

std::vector<Eigen::MatrixXd> w_matrices(std::size_t n) {
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
      F(i, j) = 1.0;
      out.push_back(F - F.transpose());
    }
  }
  return out;
}

std::vector<KEEquation> acosta_ke_system(const MechanicalSystem& mech, const ExprMatrix& M_d,
                                         const std::vector<ExprVector>& alphas) {
  mech.validate();
  std::size_t n = mech.n();
  require_shape(M_d, n, n, "M_d");
  std::vector<KEEquation> out;
  if (mech.G_perp.empty()) return out;
  std::size_t n0 = n * (n - 1) / 2;
  if (alphas.size() != n0) {
    fail(ErrorCode::kDimension, "need " + std::to_string(n0) + " alpha vectors");
  }
  ExprMatrix Minv = mech.M_inv();
  ExprMatrix MdMinv = M_d * Minv;
  std::vector<Eigen::MatrixXd> W = w_matrices(n);

  ExprMatrix Jcal(n, n0);
  for (std::size_t k = 0; k < n0; ++k) {
    if (alphas[k].size() != n) fail(ErrorCode::kDimension, "alpha vectors must have length n");
    for (std::size_t i = 0; i < n; ++i) Jcal(i, k) = alphas[k][i];
  }

  for (std::size_t r = 0; r < mech.G_perp.rows(); ++r) {
    ExprVector gp = mech.G_perp.row(r);
    ExprMatrix L = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      Expr gamma = num(0.0);
      for (std::size_t k = 0; k < n; ++k) gamma = gamma + gp[k] * MdMinv(k, i);
      L = L + gamma * differentiate(M_d, mech.q[i]);
      ExprMatrix dMinv = differentiate(Minv, mech.q[i]);
      bool constant = true;
      for (const auto& e : dMinv.data()) constant = constant && simplify(e).is_number(0.0);
      if (!constant) L = L + gp[i] * (M_d * dMinv * M_d);
    }
    ExprMatrix A(n, n0);
    for (std::size_t k = 0; k < n0; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        Expr a = num(0.0);
        for (std::size_t j = 0; j < n; ++j) a = a - num(W[k](i, j)) * gp[j];
        A(i, k) = a;
      }
    }
    ExprMatrix S = Jcal * A.transpose() + A * Jcal.transpose();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        Expr lhs = i == j ? L(i, j) : num(0.5) * (L(i, j) + L(j, i));
        out.push_back({r, i, j, simplify(lhs), simplify(-S(i, j))});
      }
    }
  }
  return out;
}

EquilibriumReport equilibrium_assignment_check(const Expr& H_d, const std::vector<std::string>& vars,
                                               const Bindings& point, double tol) {
  std::size_t n = vars.size();
  EquilibriumReport rep;
  Eigen::VectorXd g = evaluate(grad(H_d, vars), point);
  rep.gradient_norm = g.norm();

  Bindings b = point;
  auto f = [&](std::size_t i, double di, std::size_t j, double dj) {
    b = point;
    b[vars[i]] += di;
    b[vars[j]] += dj;
    return eval(H_d, b);
  };
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = 1e-4 * std::max(1.0, std::fabs(point.at(vars[i])));
  double f0 = eval(H_d, point);
  Eigen::MatrixXd Hs(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Hs(i, i) = (f(i, h[i], i, 0.0) - 2.0 * f0 + f(i, -h[i], i, 0.0)) / (h[i] * h[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (f(i, h[i], j, h[j]) - f(i, h[i], j, -h[j]) - f(i, -h[i], j, h[j]) +
                  f(i, -h[i], j, -h[j])) /
                 (4.0 * h[i] * h[j]);
      Hs(i, j) = v;
      Hs(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
  Eigen::VectorXd ev = es.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  rep.min_eigenvalue = n ? ev.minCoeff() : 0.0;
  double scale = n ? std::max(1.0, ev.cwiseAbs().maxCoeff()) : 1.0;
  bool stationary = rep.gradient_norm <= tol;
  bool positive = rep.min_eigenvalue > 1e-6 * scale;
  rep.verdict = !stationary ? "not-stationary" : positive ? "minimum" : "stationary-only";
  rep.pass = stationary && positive;
  return rep;
}

Calibration calibrate_equilibrium(const Expr& H_d, const std::vector<std::string>& vars,
                                  const std::vector<std::string>& free_params,
                                  const Bindings& point, double tol) {
  ExprVector r = grad(H_d, vars);
  std::size_t k = free_params.size();
  ExprMatrix Jr(r.size(), k);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) Jr(i, j) = differentiate(r[i], free_params[j]);

  Calibration out;
  Bindings b = point;
  for (const auto& name : free_params) {
    if (!b.count(name)) b[name] = 0.0;
  }
  Eigen::VectorXd res = evaluate(r, b);
  double lambda = 1e-3;
  while (res.norm() > tol && out.iterations < 50 && k > 0) {
    Eigen::MatrixXd J = evaluate(Jr, b);
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd rhs = -J.transpose() * res;
    bool improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
      Eigen::MatrixXd Ad = A;
      Ad.diagonal().array() += lambda * (1.0 + A.diagonal().array());
      Eigen::VectorXd step = Ad.ldlt().solve(rhs);
      Bindings trial = b;
      for (std::size_t j = 0; j < k; ++j) trial[free_params[j]] += step[j];
      Eigen::VectorXd tres = evaluate(r, trial);
      if (tres.allFinite() && tres.norm() < res.norm()) {
        b = std::move(trial);
        res = tres;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
      } else {
        lambda *= 10.0;
      }
    }
    ++out.iterations;
    if (!improved) break;
  }
  out.residual = res.norm();
  out.converged = out.residual <= tol;
  for (const auto& name : free_params) out.params[name] = b.at(name);
  out.equilibrium = equilibrium_assignment_check(H_d, vars, b, tol);
  return out;
}

ResidualReport psd_check(const std::string& name, const ExprMatrix& A, const Domain& domain,
                         const SampleOptions& opts, bool strict, CheckKind kind) {
  ResidualReport rep;
  rep.name = name;
  rep.kind = kind;
  rep.seed = opts.seed;
  rep.tolerance = strict ? 0.0 : 1e-10;
  rep.method = "sampled-eigenvalues";
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : sample_points(domain, symbols_of(flatten(A)), opts.points, opts.seed)) {
    Eigen::MatrixXd m;
    try {
      m = evaluate(A, b);
    } catch (const Error&) {
      continue;
    }
    Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    double e = s.rows() ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().minCoeff()
                        : 0.0;
    worst = std::min(worst, e);
    ++rep.n_points;
  }
  if (rep.n_points == 0) {
    rep.note = "no sample point could be evaluated";
    return rep;
  }
  rep.max_abs = worst < 0 ? -worst : 0.0;
  rep.max_rel = rep.max_abs;
  rep.pass = strict ? worst > 1e-10 : worst >= -1e-10;
  rep.note = "smallest eigenvalue " + std::to_string(worst);
  return rep;
}

namespace {

ResidualReport rank_check(const std::string& name, const ExprMatrix& A, std::size_t rank,
                          const Domain& domain, const SampleOptions& opts) {
  ResidualReport rep;
  rep.name = name;
  rep.seed = opts.seed;
  rep.tolerance = 1e-9;
  rep.method = "sampled-svd";
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : sample_points(domain, symbols_of(flatten(A)), opts.points, opts.seed)) {
    Eigen::MatrixXd m;
    try {
      m = evaluate(A, b);
    } catch (const Error&) {
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    auto sv = svd.singularValues();
    double ratio = rank == 0 ? 1.0 : rank > static_cast<std::size_t>(sv.size())
                                         ? 0.0
                                         : sv[rank - 1] / std::max(sv[0], 1e-300);
    worst = std::min(worst, ratio);
    ++rep.n_points;
  }
  rep.pass = rep.n_points > 0 && worst > rep.tolerance;
  rep.max_abs = rep.n_points ? worst : 0.0;
  rep.max_rel = rep.max_abs;
  rep.note = "smallest relative singular value " + std::to_string(rep.max_abs);
  return rep;
}

ExprVector skew_defect(const ExprMatrix& A) { return flatten(A + A.transpose()); }
ExprVector symmetry_defect(const ExprMatrix& A) { return flatten(A - A.transpose()); }

}  // namespace

std::vector<ResidualReport> pch_structure_checks(const PCHSystem& sys, const Domain& domain,
                                                 const SampleOptions& opts,
                                                 const std::string& prefix) {
  sys.validate();
  std::vector<ResidualReport> out;
  out.push_back(check_zero(prefix + ".J_skew", skew_defect(sys.J), domain, opts));
  out.push_back(check_zero(prefix + ".R_symmetric", symmetry_defect(sys.R), domain, opts));
  out.push_back(psd_check(prefix + ".R_psd", sys.R, domain, opts, false, CheckKind::kCheck));
  if (!sys.g_perp.empty()) {
    out.push_back(check_zero(prefix + ".g_perp_annihilates_g", flatten(sys.g_perp * sys.g),
                             domain, opts));
    out.push_back(rank_check(prefix + ".g_perp_rank", sys.g_perp, sys.n() - sys.m(), domain, opts));
  }
  return out;
}

std::vector<ResidualReport> desired_structure_checks(const DesiredStructure& des,
                                                     const Domain& domain,
                                                     const SampleOptions& opts,
                                                     const std::string& prefix) {
  std::vector<ResidualReport> out;
  out.push_back(check_zero(prefix + ".J_d_skew", skew_defect(des.J_d), domain, opts));
  out.push_back(check_zero(prefix + ".R_d_symmetric", symmetry_defect(des.R_d), domain, opts));
  out.push_back(psd_check(prefix + ".R_d_psd", des.R_d, domain, opts, false, CheckKind::kCheck));
  return out;
}

std::vector<ResidualReport> mechanical_structure_checks(const MechanicalSystem& mech,
                                                        const Domain& domain,
                                                        const SampleOptions& opts) {
  mech.validate();
  std::vector<ResidualReport> out;
  out.push_back(check_zero("model.M_symmetric", symmetry_defect(mech.M), domain, opts));
  out.push_back(psd_check("model.M_pd", mech.M, domain, opts, true, CheckKind::kCheck));
  if (!mech.G_perp.empty()) {
    out.push_back(check_zero("model.G_perp_annihilates_G", flatten(mech.G_perp * mech.G), domain,
                             opts));
    out.push_back(rank_check("model.G_perp_rank", mech.G_perp, mech.n() - mech.m(), domain, opts));
  }
  out.push_back(psd_check("model.GtG_nonsingular", mech.G.transpose() * mech.G, domain, opts,
                          true, CheckKind::kCheck));
  return out;
}

std::vector<ResidualReport> mechanical_desired_checks(const MechanicalSystem& mech,
                                                      const MechanicalDesired& des,
                                                      const Domain& domain,
                                                      const SampleOptions& opts) {
  std::vector<ResidualReport> out;
  ResidualReport sym = check_zero("desired.M_d_symmetric", symmetry_defect(des.M_d), domain, opts);
  sym.kind = CheckKind::kVerdict;
  out.push_back(sym);
  out.push_back(psd_check("desired.M_d_pd", des.M_d, domain, opts, true, CheckKind::kVerdict));
  out.push_back(check_zero("desired.J2_skew", skew_defect(des.j2(mech)), domain, opts));
  if (!des.K_v.empty()) {
    out.push_back(psd_check("desired.K_v_pd", des.K_v, domain, opts, true, CheckKind::kCheck));
  }
  return out;
}

}  // namespace pfida

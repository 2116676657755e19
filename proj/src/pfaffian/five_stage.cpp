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
#include <random>

#include "pfida/pfaffian.hpp"
#include "pfida/program.hpp"

namespace pfida {

namespace {

using Replacements = std::map<std::string, Expr, std::less<>>;

SampleOptions internal_opts(const SampleOptions& opts) { return {64, 1e-9, opts.seed}; }

Interval range_of(const Domain& d, const std::string& name) {
  if (const Interval* iv = d.find(name)) return *iv;
  return d.free_range;
}

// A representative in-domain value, deliberately off-centre so that
// symmetric singular sets are avoided.
double probe_value(const Domain& d, const std::string& name) {
  if (auto it = d.fixed.find(name); it != d.fixed.end()) return it->second;
  Interval iv = range_of(d, name);
  return iv.lo + 0.381966011250105 * (iv.hi - iv.lo);
}

Expr abs_sum(const Expr& a, const Expr& b) {
  return apply(Function::kAbs, a) + apply(Function::kAbs, b);
}

bool vanishes(const Expr& value, const Expr& scale, const Domain& d, const SampleOptions& opts) {
  try {
    return check_scaled("internal", {value}, {scale}, d, internal_opts(opts)).pass;
  } catch (const Error&) {
    return false;
  }
}

bool independent_of(const Expr& e, const std::string& var, const Domain& d,
                    const SampleOptions& opts) {
  if (!depends_on(e, var)) return true;
  Expr de = differentiate(e, var);
  return vanishes(de, num(1.0), d, opts);
}

bool verify_first_integral(const Expr& U, const Expr& P, const Expr& Q, const std::string& x,
                           const std::string& y, const Domain& d, const SampleOptions& opts) {
  if (!depends_on(U, x) && !depends_on(U, y)) return false;
  Expr ux = differentiate(U, x);
  Expr uy = differentiate(U, y);
  Expr res = P * uy - Q * ux;
  if (!vanishes(res, abs_sum(P * uy, Q * ux), d, opts)) return false;
  // Reject a U whose gradient vanishes identically in the (x, y) plane.
  try {
    ResidualReport g = check_scaled("internal", {abs_sum(ux, uy)}, {num(1.0)}, d,
                                    internal_opts(opts));
    return g.max_abs > 0.0;
  } catch (const Error&) {
    return false;
  }
}

std::optional<Expr> try_exact(const Expr& P, const Expr& Q, const std::string& x,
                              const std::string& y, const Domain& d, const SampleOptions& opts) {
  Expr py = differentiate(P, y);
  Expr qx = differentiate(Q, x);
  if (!vanishes(py - qx, abs_sum(py, qx), d, opts)) return std::nullopt;
  try {
    Expr F = integrate_catalog(P, x);
    Expr h = simplify(Q - differentiate(F, y));
    if (depends_on(h, x)) {
      if (!independent_of(h, x, d, opts)) return std::nullopt;
      h = simplify(substitute(h, Replacements{{x, num(probe_value(d, x))}}));
    }
    Expr G = integrate_catalog(h, y);
    return simplify(F + G);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Expr> try_factor(const Expr& mu, const Expr& P, const Expr& Q, const std::string& x,
                               const std::string& y, const Domain& d, const SampleOptions& opts) {
  return try_exact(simplify(mu * P), simplify(mu * Q), x, y, d, opts);
}

std::optional<Expr> try_linear(const Expr& P, const Expr& Q, const std::string& x,
                               const std::string& y, const Domain& d, const SampleOptions& opts) {
  // dy/dx = -P/Q = a(x) y + b(x)
  if (simplify(Q).is_number(0.0)) return std::nullopt;
  Expr s = simplify(-P / Q);
  Expr a = simplify(differentiate(s, y));
  if (!independent_of(a, y, d, opts)) return std::nullopt;
  try {
    double y0 = probe_value(d, y);
    Expr a0 = simplify(substitute(a, Replacements{{y, num(y0)}}));
    Expr b0 = simplify(substitute(s, Replacements{{y, num(y0)}}) - a0 * num(y0));
    Expr A = integrate_catalog(a0, x);
    Expr E = simplify(apply(Function::kExp, -A));
    Expr U = sym(y) * E;
    if (!simplify(b0).is_number(0.0)) U = U - integrate_catalog(simplify(b0 * E), x);
    return simplify(U);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Expr> try_separable(const Expr& P, const Expr& Q, const std::string& x,
                                  const std::string& y, const Domain& d,
                                  const SampleOptions& opts) {
  if (simplify(Q).is_number(0.0)) return std::nullopt;
  Expr r = P / Q;
  double x0 = probe_value(d, x);
  double y0 = probe_value(d, y);
  Expr rx = substitute(r, Replacements{{y, num(y0)}});   // r(x, y0)
  Expr ry = substitute(r, Replacements{{x, num(x0)}});   // r(x0, y)
  Expr r00 = substitute(rx, Replacements{{x, num(x0)}});  // r(x0, y0)
  Expr lhs = r * r00;
  Expr rhs = rx * ry;
  if (!vanishes(lhs - rhs, abs_sum(lhs, rhs), d, opts)) return std::nullopt;
  try {
    // r dx + dy = 0 with r = f(x) g(y), f = r(x, y0), g = r(x0, y)/r(x0, y0)
    Expr f = simplify(rx);
    Expr inv_g = simplify(r00 / ry);
    return simplify(integrate_catalog(f, x) + integrate_catalog(inv_g, y));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<FirstIntegral> first_integral_2d(const Expr& P_in, const Expr& Q_in,
                                               const std::string& x, const std::string& y,
                                               const Domain& d, const SampleOptions& opts) {
  Expr P = simplify(P_in);
  Expr Q = simplify(Q_in);
  auto accept = [&](std::optional<Expr> U, const char* method) -> std::optional<FirstIntegral> {
    if (U && verify_first_integral(*U, P, Q, x, y, d, opts)) return FirstIntegral{*U, method};
    return std::nullopt;
  };
  if (P.is_number(0.0) && Q.is_number(0.0)) return std::nullopt;
  if (P.is_number(0.0)) return accept(sym(y), "trivial");
  if (Q.is_number(0.0)) return accept(sym(x), "trivial");

  if (auto r = accept(try_exact(P, Q, x, y, d, opts), "exact")) return r;

  Expr py = differentiate(P, y);
  Expr qx = differentiate(Q, x);
  {
    Expr ratio = simplify((py - qx) / Q);
    if (independent_of(ratio, y, d, opts)) {
      try {
        Expr rx = simplify(substitute(ratio, Replacements{{y, num(probe_value(d, y))}}));
        Expr mu = simplify(apply(Function::kExp, integrate_catalog(rx, x)));
        if (auto r = accept(try_factor(mu, P, Q, x, y, d, opts), "integrating factor")) return r;
      } catch (const Error&) {
      }
    }
  }
  {
    Expr ratio = simplify((qx - py) / P);
    if (independent_of(ratio, x, d, opts)) {
      try {
        Expr ry = simplify(substitute(ratio, Replacements{{x, num(probe_value(d, x))}}));
        Expr mu = simplify(apply(Function::kExp, integrate_catalog(ry, y)));
        if (auto r = accept(try_factor(mu, P, Q, x, y, d, opts), "integrating factor")) return r;
      } catch (const Error&) {
      }
    }
  }
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      Expr mu = pow(sym(x), num(a)) * pow(sym(y), num(b));
      if (auto r = accept(try_factor(mu, P, Q, x, y, d, opts), "integrating factor")) return r;
    }
  }
  if (auto r = accept(try_separable(P, Q, x, y, d, opts), "separable")) return r;
  if (auto r = accept(try_linear(P, Q, x, y, d, opts), "linear")) return r;
  if (auto r = accept(try_linear(Q, P, y, x, d, opts), "linear")) return r;
  return std::nullopt;
}

namespace {

// Stage 3: K must be constant on level sets of U at fixed x3. Pairs of
// points with equal U are found by bisection along coordinate lines.
ResidualReport level_set_check(const Expr& U, const Expr& K, const std::vector<std::string>& v,
                               const Domain& d, const SampleOptions& opts) {
  ResidualReport rep;
  rep.name = "stage3.level_sets";
  rep.tolerance = 1e-8;
  rep.seed = opts.seed;
  rep.method = "sampled";

  std::set<std::string> syms = free_symbols(U);
  for (const auto& s : free_symbols(K)) syms.insert(s);
  for (const auto& s : v) syms.insert(s);
  std::vector<Bindings> pts = sample_points(d, syms, opts.points, opts.seed);
  std::vector<std::string> slots;
  for (const auto& [k, val] : pts.front()) slots.push_back(k);
  Program prog(std::vector<Expr>{U, K}, slots);
  auto index_of = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), n) - slots.begin());
  };
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<double> in(slots.size()), out(2);
  auto eval_at = [&](const std::vector<double>& p, double& u, double& k) {
    try {
      prog.run(p, out);
    } catch (const Error&) {
      return false;
    }
    u = out[0];
    k = out[1];
    return std::isfinite(u) && std::isfinite(k);
  };

  for (const auto& b : pts) {
    std::size_t idx = 0;
    for (const auto& [key, val] : b) in[idx++] = val;
    double u0, k0;
    if (!eval_at(in, u0, k0)) continue;
    for (int role = 0; role < 2; ++role) {
      const std::string& moved = v[role];
      const std::string& solved = v[1 - role];
      Interval mi = range_of(d, moved);
      Interval si = range_of(d, solved);
      std::vector<double> p = in;
      p[index_of(moved)] = mi.lo + (mi.hi - mi.lo) * unit_uniform(rng());
      std::size_t js = index_of(solved);
      // Bracket a root of U(p) - u0 along the solved coordinate.
      const int grid = 32;
      double prev_t = si.lo, prev_g = NAN;
      bool found = false;
      double lo = 0, hi = 0;
      for (int g = 0; g <= grid && !found; ++g) {
        double t = si.lo + (si.hi - si.lo) * g / grid;
        p[js] = t;
        double u, k;
        if (!eval_at(p, u, k)) {
          prev_g = NAN;
          continue;
        }
        double gv = u - u0;
        if (std::isfinite(prev_g) && (gv == 0.0 || (gv > 0) != (prev_g > 0))) {
          lo = prev_t;
          hi = t;
          found = true;
        }
        prev_t = t;
        prev_g = gv;
      }
      if (!found) continue;
      p[js] = lo;
      double ulo, kk;
      if (!eval_at(p, ulo, kk)) continue;
      bool ok = true;
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        p[js] = mid;
        double um;
        if (!eval_at(p, um, kk)) {
          ok = false;
          break;
        }
        if ((um - u0 > 0) == (ulo - u0 > 0)) {
          lo = mid;
          ulo = um;
        } else {
          hi = mid;
        }
      }
      if (!ok) continue;
      p[js] = lo;
      Bindings pb;
      for (std::size_t i = 0; i < slots.size(); ++i) pb[slots[i]] = p[i];
      if (!d.contains(pb)) continue;
      double u1, k1;
      if (!eval_at(p, u1, k1)) continue;
      double r = std::fabs(k1 - k0) / std::max(1.0, std::fabs(k0));
      rep.max_abs = std::max(rep.max_abs, std::fabs(k1 - k0));
      rep.max_rel = std::max(rep.max_rel, r);
      ++rep.n_points;
    }
  }
  rep.pass = rep.max_rel <= rep.tolerance;
  rep.note = std::to_string(rep.n_points) + " level-set pairs";
  return rep;
}

// K(x) rewritten as K(u, x3) by solving U = u for a coordinate in which U is
// linear.
std::optional<Expr> reparameterize(const Expr& U, const Expr& K, const std::vector<std::string>& v,
                                   const Domain& d, const SampleOptions& opts) {
  if (!depends_on(K, v[0]) && !depends_on(K, v[1])) return K;
  Expr u = sym(kLevelSymbol);
  for (int role = 1; role >= 0; --role) {
    const std::string& solved = v[role];
    const std::string& other = v[1 - role];
    Expr a = simplify(differentiate(U, solved));
    if (a.is_number(0.0) || !independent_of(a, solved, d, opts)) continue;
    double s0 = probe_value(d, solved);
    a = simplify(substitute(a, Replacements{{solved, num(s0)}}));
    Expr b = simplify(substitute(U, Replacements{{solved, num(s0)}}) - a * num(s0));
    Expr sol = (u - b) / a;
    Expr k_sub = simplify(substitute(K, Replacements{{solved, sol}}));
    if (depends_on(k_sub, other)) {
      k_sub = simplify(substitute(k_sub, Replacements{{other, num(probe_value(d, other))}}));
    }
    Expr back = substitute(k_sub, Replacements{{kLevelSymbol, U}});
    if (vanishes(back - K, abs_sum(back, K), d, opts)) return k_sub;
  }
  return std::nullopt;
}

Expr cross_norm(const ExprVector& a, const ExprVector& b) {
  Expr c0 = a[1] * b[2] - a[2] * b[1];
  Expr c1 = a[2] * b[0] - a[0] * b[2];
  Expr c2 = a[0] * b[1] - a[1] * b[0];
  return apply(Function::kSqrt, c0 * c0 + c1 * c1 + c2 * c2);
}

Expr vec_norm(const ExprVector& a) {
  Expr acc = num(0.0);
  for (const auto& e : a) acc = acc + e * e;
  return apply(Function::kSqrt, acc);
}

}  // namespace

SolutionTrace five_stage_solve(const PfaffianForm& f, const Domain& domain,
                               const FiveStageOptions& options) {
  f.validate();
  if (f.vars.size() != 3) fail(ErrorCode::kDimension, "the five-stage procedure needs 3 variables");
  const auto& v = f.vars;
  const SampleOptions& opts = options.sample;
  SolutionTrace trace;

  ResidualReport integ = integrability_check(f, domain, opts);
  trace.stage_reports.push_back(integ);
  if (!integ.pass) {
    fail(ErrorCode::kNotIntegrable,
         "integrability residual " + to_string(simplify(integrability_residual(f))));
  }

  const Expr P = simplify(f.coeffs[0]);
  const Expr Q = simplify(f.coeffs[1]);
  const Expr R = simplify(f.coeffs[2]);

  // Stage 1
  if (options.hint_u) {
    trace.hint_used = true;
    Expr U = simplify(*options.hint_u);
    if (!verify_first_integral(U, P, Q, v[0], v[1], domain, opts)) {
      fail(ErrorCode::kStage1Unsolvable,
           "stage 1: hint U = " + to_string(U) + " fails verification (P dU/d" + v[1] + " - Q dU/d" +
               v[0] + " != 0)");
    }
    trace.U = U;
    trace.stage1_method = "hint";
  } else {
    auto fi = first_integral_2d(P, Q, v[0], v[1], domain, opts);
    if (!fi) fail(ErrorCode::kStage1Unsolvable, "stage 1: recognizer cascade exhausted");
    trace.U = fi->U;
    trace.stage1_method = fi->method;
  }
  Expr ux1 = differentiate(trace.U, v[0]);
  Expr ux2 = differentiate(trace.U, v[1]);
  if (!P.is_number(0.0)) {
    trace.mu = simplify(ux1 / P);
    if (!Q.is_number(0.0)) {
      ResidualReport cross = check_equal("stage1.mu_cross_check", trace.mu, ux2 / Q, domain, opts);
      trace.stage_reports.push_back(cross);
      if (!cross.pass) fail(ErrorCode::kStage1Unsolvable, "stage 1: (1/P) dU/dx1 != (1/Q) dU/dx2");
    }
  } else {
    trace.mu = simplify(ux2 / Q);
  }

  // Stage 2
  trace.K = simplify(trace.mu * R - differentiate(trace.U, v[2]));

  // Stage 3
  ResidualReport level = level_set_check(trace.U, trace.K, v, domain, opts);
  trace.stage_reports.push_back(level);
  if (!level.pass) {
    fail(ErrorCode::kParameterizationFailed, "stage 3: K varies on level sets of U (max " +
                                                 std::to_string(level.max_rel) + ")");
  }
  auto k_of_u = reparameterize(trace.U, trace.K, v, domain, opts);
  if (!k_of_u) fail(ErrorCode::kStage4Unsolvable, "stage 4: K could not be written over (U, x3)");
  trace.K_of_u = *k_of_u;

  // Stage 4: du + K(u, x3) dx3 = 0
  Domain d4;
  d4.fixed = domain.fixed;
  d4.free_range = domain.free_range;
  {
    std::set<std::string> syms = free_symbols(trace.U);
    auto pts = sample_points(domain, syms, 256, opts.seed);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& b : pts) {
      try {
        double u = eval(trace.U, b);
        if (std::isfinite(u)) {
          lo = std::min(lo, u);
          hi = std::max(hi, u);
        }
      } catch (const Error&) {
      }
    }
    if (!(lo < hi)) {
      lo = std::isfinite(lo) ? lo - 1 : 0;
      hi = lo + 2;
    }
    d4.set(kLevelSymbol, {lo, hi});
    d4.set(v[2], range_of(domain, v[2]));
    for (const auto& ex : domain.exclusions) {
      if (!depends_on(ex, v[0]) && !depends_on(ex, v[1])) d4.exclusions.push_back(ex);
    }
  }
  auto fi4 = first_integral_2d(num(1.0), trace.K_of_u, kLevelSymbol, v[2], d4, opts);
  if (!fi4) fail(ErrorCode::kStage4Unsolvable, "stage 4: recognizer cascade exhausted");
  trace.stage4_method = fi4->method;
  trace.phi_arg = simplify(substitute(fi4->U, Replacements{{kLevelSymbol, trace.U}}));

  // Stage 5
  ExprVector grad = gradient(trace.phi_arg, v);
  SampleOptions final_opts = opts;
  final_opts.tolerance = 1e-8;
  trace.residual_report = check_scaled("stage5.parallel", {cross_norm(grad, f.coeffs)},
                                       {vec_norm(grad) * vec_norm(f.coeffs)}, domain, final_opts,
                                       1e-300);
  trace.stage_reports.push_back(trace.residual_report);
  if (!trace.residual_report.pass) {
    fail(ErrorCode::kStage4Unsolvable, "stage 5: gradient of the solution is not parallel to the form");
  }
  return trace;
}

}  // namespace pfida

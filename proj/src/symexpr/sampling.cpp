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

#include "pfida/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pfida/program.hpp"

namespace pfida {

namespace {

constexpr std::size_t kSymbolicNodeLimit = 2000;
constexpr std::size_t kMaxDrawFactor = 50;

}  // namespace

const Interval* Domain::find(std::string_view name) const {
  for (const auto& [n, iv] : box) {
    if (n == name) return &iv;
  }
  return nullptr;
}

void Domain::set(const std::string& name, Interval iv) {
  for (auto& [n, cur] : box) {
    if (n == name) {
      cur = iv;
      return;
    }
  }
  box.emplace_back(name, iv);
}

double Domain::max_width() const {
  double w = 0.0;
  for (const auto& [n, iv] : box) w = std::max(w, iv.hi - iv.lo);
  return w > 0 ? w : 1.0;
}

bool Domain::contains(const Bindings& point) const {
  for (const auto& [n, iv] : box) {
    auto it = point.find(n);
    if (it == point.end()) continue;
    if (!(it->second >= iv.lo && it->second <= iv.hi)) return false;
  }
  Bindings full = fixed;
  for (const auto& [k, v] : point) full[k] = v;
  double margin = 1e-3 * max_width();
  for (const auto& ex : exclusions) {
    try {
      if (std::fabs(eval(ex, full)) < margin) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

class PointSampler {
 public:
  PointSampler(const Domain& domain, const std::set<std::string>& symbols, std::uint64_t seed)
      : domain_(domain), rng_(seed) {
    for (const auto& [n, iv] : domain.box) {
      if (!domain.fixed.count(n)) names_.emplace_back(n, iv);
    }
    std::set<std::string> extra = symbols;
    for (const auto& ex : domain.exclusions) {
      for (const auto& s : free_symbols(ex)) extra.insert(s);
    }
    for (const auto& s : extra) {
      if (domain.fixed.count(s) || domain.find(s)) continue;
      names_.emplace_back(s, domain.free_range);
    }
    margin_ = 1e-3 * domain.max_width();
  }

  /// Next point outside the exclusion margins; nullopt-like false when the
  /// draw was rejected.
  bool draw(Bindings& out) {
    out = domain_.fixed;
    for (const auto& [n, iv] : names_) out[n] = iv.lo + (iv.hi - iv.lo) * unit_uniform(rng_());
    for (const auto& ex : domain_.exclusions) {
      try {
        if (!(std::fabs(eval(ex, out)) >= margin_)) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  }

 private:
  const Domain& domain_;
  std::mt19937_64 rng_;
  std::vector<std::pair<std::string, Interval>> names_;
  double margin_ = 0.0;
};

std::set<std::string> symbols_of(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  std::set<std::string> out;
  for (const auto& e : a) {
    for (auto& s : free_symbols(e)) out.insert(s);
  }
  for (const auto& e : b) {
    for (auto& s : free_symbols(e)) out.insert(s);
  }
  return out;
}

}  // namespace

std::vector<Bindings> sample_points(const Domain& domain, const std::set<std::string>& symbols,
                                    std::size_t n, std::uint64_t seed) {
  PointSampler sampler(domain, symbols, seed);
  std::vector<Bindings> out;
  Bindings b;
  for (std::size_t attempts = 0; out.size() < n; ++attempts) {
    if (attempts > kMaxDrawFactor * n + 100) {
      fail(ErrorCode::kDomain, "sampling could not avoid the declared exclusions");
    }
    if (sampler.draw(b)) out.push_back(b);
  }
  return out;
}

double scaled_residual(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

ResidualReport check_equal(const std::string& name, const std::vector<Expr>& lhs,
                           const std::vector<Expr>& rhs, const Domain& domain,
                           const SampleOptions& opts) {
  if (lhs.size() != rhs.size()) {
    fail(ErrorCode::kDimension, name + ": sides have different lengths");
  }
  ResidualReport rep;
  rep.name = name;
  rep.tolerance = opts.tolerance;
  rep.seed = opts.seed;

  bool symbolic_zero = true;
  for (std::size_t i = 0; i < lhs.size() && symbolic_zero; ++i) {
    Expr diff = lhs[i] - rhs[i];
    if (node_count(diff) > kSymbolicNodeLimit || !simplify(diff).is_number(0.0)) {
      symbolic_zero = false;
    }
  }

  std::set<std::string> symbols = symbols_of(lhs, rhs);
  PointSampler sampler(domain, symbols, opts.seed);
  Bindings point;
  std::vector<std::string> slots;
  Program pl, pr;
  bool compiled = false;
  std::vector<double> inputs, vl(lhs.size()), vr(rhs.size());
  std::size_t skipped = 0;

  for (std::size_t attempts = 0; rep.n_points < opts.points; ++attempts) {
    if (attempts > kMaxDrawFactor * opts.points + 100) {
      fail(ErrorCode::kDomain, name + ": sampling could not avoid singular points");
    }
    if (!sampler.draw(point)) continue;
    if (!compiled) {
      for (const auto& [k, v] : point) slots.push_back(k);
      pl = Program(lhs, slots);
      pr = Program(rhs, slots);
      inputs.resize(slots.size());
      compiled = true;
    }
    std::size_t k = 0;
    for (const auto& [key, v] : point) inputs[k++] = v;
    try {
      pl.run(inputs, vl);
      pr.run(inputs, vr);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      ++skipped;
      continue;
    }
    ++rep.n_points;
    for (std::size_t i = 0; i < vl.size(); ++i) {
      double a = std::fabs(vl[i] - vr[i]);
      double r = scaled_residual(vl[i], vr[i]);
      if (!std::isfinite(vl[i]) || !std::isfinite(vr[i])) a = r = INFINITY;
      rep.max_abs = std::max(rep.max_abs, a);
      rep.max_rel = std::max(rep.max_rel, r);
    }
  }
  rep.pass = rep.max_rel <= opts.tolerance;
  rep.method = symbolic_zero ? "symbolic+sampled" : "sampled";
  if (skipped > 0) rep.note = std::to_string(skipped) + " undefined points redrawn";
  return rep;
}

ResidualReport check_equal(const std::string& name, const Expr& lhs, const Expr& rhs,
                           const Domain& domain, const SampleOptions& opts) {
  return check_equal(name, std::vector<Expr>{lhs}, std::vector<Expr>{rhs}, domain, opts);
}

ResidualReport check_zero(const std::string& name, const std::vector<Expr>& residuals,
                          const Domain& domain, const SampleOptions& opts) {
  return check_equal(name, residuals, std::vector<Expr>(residuals.size(), num(0.0)), domain, opts);
}

ResidualReport check_zero(const std::string& name, const Expr& residual, const Domain& domain,
                          const SampleOptions& opts) {
  return check_equal(name, std::vector<Expr>{residual}, std::vector<Expr>{num(0.0)}, domain, opts);
}

ResidualReport check_scaled(const std::string& name, const std::vector<Expr>& values,
                            const std::vector<Expr>& scales, const Domain& domain,
                            const SampleOptions& opts, double floor) {
  if (values.size() != scales.size()) {
    fail(ErrorCode::kDimension, name + ": values and scales differ in length");
  }
  ResidualReport rep;
  rep.name = name;
  rep.tolerance = opts.tolerance;
  rep.seed = opts.seed;
  rep.method = "sampled";
  PointSampler sampler(domain, symbols_of(values, scales), opts.seed);
  Bindings point;
  std::vector<std::string> slots;
  Program pv, ps;
  bool compiled = false;
  std::vector<double> inputs, vv(values.size()), vs(scales.size());
  std::size_t skipped = 0;
  for (std::size_t attempts = 0; rep.n_points < opts.points; ++attempts) {
    if (attempts > kMaxDrawFactor * opts.points + 100) {
      fail(ErrorCode::kDomain, name + ": sampling could not avoid singular points");
    }
    if (!sampler.draw(point)) continue;
    if (!compiled) {
      for (const auto& [k, v] : point) slots.push_back(k);
      pv = Program(values, slots);
      ps = Program(scales, slots);
      inputs.resize(slots.size());
      compiled = true;
    }
    std::size_t k = 0;
    for (const auto& [key, v] : point) inputs[k++] = v;
    try {
      pv.run(inputs, vv);
      ps.run(inputs, vs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      ++skipped;
      continue;
    }
    ++rep.n_points;
    for (std::size_t i = 0; i < vv.size(); ++i) {
      double a = std::fabs(vv[i]);
      double r = a / std::max(floor, std::fabs(vs[i]));
      if (!std::isfinite(vv[i]) || !std::isfinite(vs[i])) a = r = INFINITY;
      rep.max_abs = std::max(rep.max_abs, a);
      rep.max_rel = std::max(rep.max_rel, r);
    }
  }
  rep.pass = rep.max_rel <= opts.tolerance;
  if (skipped > 0) rep.note = std::to_string(skipped) + " undefined points redrawn";
  return rep;
}

bool equiv_numeric(const Expr& e1, const Expr& e2, const Domain& domain, std::size_t n, double tol,
                   std::uint64_t seed) {
  std::set<std::string> symbols = free_symbols(e1);
  for (const auto& s : free_symbols(e2)) symbols.insert(s);
  for (const auto& b : sample_points(domain, symbols, n, seed)) {
    if (scaled_residual(eval(e1, b), eval(e2, b)) > tol) return false;
  }
  return true;
}

ResidualReport make_verdict(const std::string& name, CheckKind kind, bool pass, double residual,
                            double tolerance, std::string note) {
  ResidualReport r;
  r.name = name;
  r.kind = kind;
  r.n_points = 1;
  r.max_abs = residual;
  r.max_rel = residual;
  r.tolerance = tolerance;
  r.pass = pass;
  r.method = "direct";
  r.note = std::move(note);
  return r;
}

}  // namespace pfida

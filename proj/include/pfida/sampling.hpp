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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pfida/expr.hpp"

namespace pfida {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Sampling region: a box over named variables, singular sets to avoid
/// (each `expr != 0`) and fixed parameter values. Symbols that are in
/// neither the box nor `fixed` are drawn from `free_range`.
struct Domain {
  std::vector<std::pair<std::string, Interval>> box;
  std::vector<Expr> exclusions;
  Bindings fixed;
  Interval free_range{0.5, 1.5};

  const Interval* find(std::string_view name) const;
  void set(const std::string& name, Interval iv);
  double max_width() const;
  /// True when every boxed variable present in `point` lies in its interval
  /// and no exclusion is within the sampling margin.
  bool contains(const Bindings& point) const;
};

struct SampleOptions {
  std::size_t points = 200;
  double tolerance = 1e-9;
  std::uint64_t seed = 42;
};

/// Uniform double in [0, 1) from 53 high bits; identical on every platform.
double unit_uniform(std::uint64_t bits);

/// Seeded points over `symbols` (plus fixed values). Points closer to an
/// exclusion than 1e-3 box widths are redrawn; ErrorCode::kDomain if too
/// many draws are rejected.
std::vector<Bindings> sample_points(const Domain& domain, const std::set<std::string>& symbols,
                                    std::size_t n, std::uint64_t seed);

enum class CheckKind { kCheck, kVerdict };

struct ResidualReport {
  std::string name;
  CheckKind kind = CheckKind::kCheck;
  std::size_t n_points = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string method;
  std::string note;
};

/// |a - b| / max(1, |a|, |b|)
double scaled_residual(double a, double b);

/// Hybrid equality test of lhs[i] == rhs[i] for all i: a symbolic attempt
/// (simplify the difference to literal 0) plus seeded sampling, which always
/// runs and decides the verdict. Points where either side is undefined are
/// skipped and redrawn.
ResidualReport check_equal(const std::string& name, const std::vector<Expr>& lhs,
                           const std::vector<Expr>& rhs, const Domain& domain,
                           const SampleOptions& opts);
ResidualReport check_equal(const std::string& name, const Expr& lhs, const Expr& rhs,
                           const Domain& domain, const SampleOptions& opts);
ResidualReport check_zero(const std::string& name, const std::vector<Expr>& residuals,
                          const Domain& domain, const SampleOptions& opts);
ResidualReport check_zero(const std::string& name, const Expr& residual, const Domain& domain,
                          const SampleOptions& opts);

/// Sampled test of values[i] ~ 0 with residual |values[i]| / max(floor,
/// |scales[i]|); use when the natural magnitude of a residual is known.
ResidualReport check_scaled(const std::string& name, const std::vector<Expr>& values,
                            const std::vector<Expr>& scales, const Domain& domain,
                            const SampleOptions& opts, double floor = 1.0);

bool equiv_numeric(const Expr& e1, const Expr& e2, const Domain& domain, std::size_t n, double tol,
                   std::uint64_t seed);

/// A verdict built from a pass flag and a single residual value.
ResidualReport make_verdict(const std::string& name, CheckKind kind, bool pass, double residual,
                            double tolerance, std::string note);

}  // namespace pfida

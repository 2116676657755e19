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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfida/idapbc.hpp"

namespace pfida {

struct SimConfig {
  std::vector<double> x0;
  double dt = 1e-3;
  double t_final = 20.0;
  int record_every = 1;
  std::uint64_t seed = 42;

  void validate(std::size_t n) const;
};

struct Trajectory {
  std::vector<std::string> state_names;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> inputs;
  std::vector<double> H;
  std::vector<double> Hd;
  /// Set when the run stopped early: kDomainEscape or kNonFinite.
  std::optional<ErrorCode> stopped;
  std::string message;

  std::size_t size() const { return times.size(); }
};

/// Fixed-step RK4 on x' = (J - R) grad H + g u, u from `controller` (zero
/// when empty). `domain` supplies parameter values and the region the state
/// must stay in; leaving it ends the run with the partial trajectory.
/// `H_d` fills the Hd column (H when absent).
Trajectory simulate(const PCHSystem& sys, const ExprVector& controller,
                    const std::optional<Expr>& H_d, const Domain& domain, const SimConfig& cfg);

enum class EnergyColumn { kH, kHd };

struct MonotoneResult {
  bool monotone = true;
  double worst_increase = 0.0;
};

/// E(t_{k+1}) <= E(t_k) + slack for every recorded step.
MonotoneResult energy_monotone(const Trajectory& traj, EnergyColumn which, double slack);

struct ConvergenceMetric {
  double final_error = 0.0;
  double excess_energy_ratio = 0.0;
};

/// |x(T) - x*| and (Hd(T) - Hd*) / (Hd(0) - Hd*), the ratio taken as 0 when
/// the initial excess is below 1e-14.
ConvergenceMetric convergence_metric(const Trajectory& traj, const std::vector<double>& x_star,
                                     double hd_star);

/// Header `t,x1..xn,u1..um,H,Hd`; 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace pfida

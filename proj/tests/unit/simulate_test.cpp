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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pfida/simulate.hpp"

namespace pfida {
namespace {

ExprMatrix mat(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ExprVector> out;
  for (const auto& r : rows) out.push_back(parse_vector(r));
  return ExprMatrix::from_rows(out);
}

PCHSystem oscillator() {
  PCHSystem s;
  s.x = {"q", "p"};
  s.J = mat({{"0", "1"}, {"-1", "0"}});
  s.R = mat({{"0", "0"}, {"0", "0"}});
  s.H = parse("q^2/2 + p^2/2");
  s.g = mat({{"0"}, {"1"}});
  s.g_perp = mat({{"1", "0"}});
  return s;
}

SimConfig config(std::vector<double> x0, double dt, double T) {
  SimConfig c;
  c.x0 = std::move(x0);
  c.dt = dt;
  c.t_final = T;
  return c;
}

TEST(Simulate, OscillatorConservesEnergy) {
  auto T = 20.0 * std::numbers::pi;
  auto traj = simulate(oscillator(), {}, std::nullopt, Domain{}, config({1.0, 0.0}, 1e-3, T));
  ASSERT_FALSE(traj.stopped);
  double worst = 0.0;
  for (double H : traj.H) worst = std::max(worst, std::fabs(H - 0.5));
  EXPECT_LT(worst, 1e-8);
  EXPECT_NEAR(traj.states.back()[0], std::cos(traj.times.back()), 1e-8);
}

TEST(Simulate, FourthOrderConvergence) {
  auto error = [](double dt) {
    auto traj = simulate(oscillator(), {}, std::nullopt, Domain{}, config({1.0, 0.0}, dt, 1.0));
    return std::fabs(traj.states.back()[0] - std::cos(1.0));
  };
  double ratio = error(0.1) / error(0.05);
  EXPECT_GE(ratio, 8.0);
  EXPECT_LE(ratio, 32.0);
}

TEST(Simulate, Deterministic) {
  auto c = config({0.3, -0.2}, 1e-2, 5.0);
  auto a = simulate(oscillator(), {parse("-p")}, std::nullopt, Domain{}, c);
  auto b = simulate(oscillator(), {parse("-p")}, std::nullopt, Domain{}, c);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.inputs, b.inputs);
}

TEST(Simulate, EquilibriumStaysPut) {
  auto traj = simulate(oscillator(), {parse("-p")}, std::nullopt, Domain{},
                       config({0.0, 0.0}, 1e-2, 2.0));
  for (const auto& x : traj.states) {
    EXPECT_EQ(x[0], 0.0);
    EXPECT_EQ(x[1], 0.0);
  }
}

TEST(Simulate, DampingInjectionDecreasesEnergy) {
  auto traj = simulate(oscillator(), {parse("-p")}, parse("q^2/2 + p^2/2"), Domain{},
                       config({1.0, 0.0}, 1e-2, 20.0));
  auto mono = energy_monotone(traj, EnergyColumn::kHd, 1e-12);
  EXPECT_TRUE(mono.monotone);
  auto metric = convergence_metric(traj, {0.0, 0.0}, 0.0);
  EXPECT_LT(metric.excess_energy_ratio, 1e-3);
  EXPECT_LT(metric.final_error, 0.05);
  EXPECT_DOUBLE_EQ(traj.inputs.back()[0], -traj.states.back()[1]);
}

TEST(Simulate, ConvergenceRatioGuard) {
  auto traj = simulate(oscillator(), {}, std::nullopt, Domain{}, config({0.0, 0.0}, 0.1, 1.0));
  EXPECT_EQ(convergence_metric(traj, {0.0, 0.0}, 0.0).excess_energy_ratio, 0.0);
}

TEST(Simulate, DomainEscapeKeepsPartialTrajectory) {
  Domain d;
  d.set("q", {-0.5, 0.5});
  auto traj = simulate(oscillator(), {}, std::nullopt, d, config({0.4, 1.0}, 1e-2, 10.0));
  ASSERT_TRUE(traj.stopped);
  EXPECT_EQ(*traj.stopped, ErrorCode::kDomainEscape);
  EXPECT_GT(traj.size(), 1u);
  EXPECT_LT(traj.times.back(), 1.0);
  for (const auto& x : traj.states) EXPECT_LE(x[0], 0.5);
}

TEST(Simulate, ExclusionEndsRun) {
  Domain d;
  d.exclusions.push_back(parse("q - 0.5"));
  d.set("p", {-2.0, 2.0});
  auto traj = simulate(oscillator(), {}, std::nullopt, d, config({0.0, 1.0}, 1e-2, 10.0));
  ASSERT_TRUE(traj.stopped);
  EXPECT_EQ(*traj.stopped, ErrorCode::kDomainEscape);
}

TEST(Simulate, BlowUpIsNonFinite) {
  PCHSystem s;
  s.x = {"a", "b"};
  s.J = mat({{"0", "0"}, {"0", "0"}});
  s.R = mat({{"-1", "0"}, {"0", "0"}});
  s.H = parse("a^3/3 + b^2/2");
  s.g = mat({{"0"}, {"1"}});
  s.g_perp = mat({{"1", "0"}});
  auto traj = simulate(s, {}, std::nullopt, Domain{}, config({1.0, 0.0}, 1e-2, 3.0));
  ASSERT_TRUE(traj.stopped);
  EXPECT_EQ(*traj.stopped, ErrorCode::kNonFinite);
  EXPECT_LT(traj.times.back(), 1.2);
}

TEST(Simulate, ParametersComeFromDomain) {
  auto s = oscillator();
  s.H = parse("w*q^2/2 + p^2/2");
  Domain d;
  d.fixed = {{"w", 4.0}};
  auto traj = simulate(s, {}, std::nullopt, d, config({1.0, 0.0}, 1e-3, 1.0));
  EXPECT_NEAR(traj.states.back()[0], std::cos(2.0), 1e-9);
}

TEST(Simulate, RejectsBadConfig) {
  auto code = [](const SimConfig& c) {
    try {
      simulate(oscillator(), {}, std::nullopt, Domain{}, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code(config({1.0}, 1e-2, 1.0)), ErrorCode::kDimension);
  EXPECT_EQ(code(config({1.0, 0.0}, 0.0, 1.0)), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code(config({1.0, 0.0}, 1e-2, 0.0)), ErrorCode::kInvalidArgument);
  Domain d;
  d.set("q", {-0.5, 0.5});
  try {
    simulate(oscillator(), {}, std::nullopt, d, config({1.0, 0.0}, 1e-2, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(Simulate, RecordEvery) {
  auto c = config({1.0, 0.0}, 1e-2, 1.0);
  c.record_every = 10;
  auto traj = simulate(oscillator(), {}, std::nullopt, Domain{}, c);
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_DOUBLE_EQ(traj.times[1], 0.1);
}

TEST(Simulate, CsvLayout) {
  auto c = config({1.0, 0.0}, 0.5, 1.0);
  auto traj = simulate(oscillator(), {parse("-p")}, std::nullopt, Domain{}, c);
  std::ostringstream out;
  write_csv(traj, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,u1,H,Hd");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,0,0,0.5,0.5");
  std::getline(in, line);
  auto comma = line.find(',');
  auto q = line.substr(comma + 1, line.find(',', comma + 1) - comma - 1);
  EXPECT_EQ(std::stod(q), traj.states[1][0]);
  int lines = 2;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST(EnergyMonotone, ReportsWorstIncrease) {
  Trajectory t;
  t.H = {1.0, 0.9, 0.95, 0.5};
  auto r = energy_monotone(t, EnergyColumn::kH, 0.01);
  EXPECT_FALSE(r.monotone);
  EXPECT_NEAR(r.worst_increase, 0.05, 1e-15);
  EXPECT_TRUE(energy_monotone(t, EnergyColumn::kH, 0.1).monotone);
}

}  // namespace
}  // namespace pfida

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

#include "pfida/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>

#include "pfida/program.hpp"

namespace pfida {

namespace {

struct Escape {
  ErrorCode code;
  std::string message;
};

class Dynamics {
 public:
  Dynamics(const PCHSystem& sys, const ExprVector& controller, const Expr& Hd,
           const Domain& domain)
      : n_(sys.n()), m_(controller.empty() ? 0 : sys.m()) {
    std::vector<std::string> slots = sys.x;
    std::vector<std::string> u_slots;
    for (std::size_t j = 0; j < m_; ++j) u_slots.push_back("u__" + std::to_string(j));
    for (const auto& [name, value] : domain.fixed) {
      if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
        params_.push_back(value);
        param_names_.push_back(name);
      }
    }
    std::vector<std::string> base = slots;
    base.insert(base.end(), param_names_.begin(), param_names_.end());
    std::vector<std::string> with_u = slots;
    with_u.insert(with_u.end(), u_slots.begin(), u_slots.end());
    with_u.insert(with_u.end(), param_names_.begin(), param_names_.end());

    ExprVector u_syms;
    for (const auto& s : u_slots) u_syms.push_back(sym(s));
    field_ = Program(open_loop_field(sys, m_ ? u_syms : ExprVector{}), with_u);
    if (m_) control_ = Program(controller, base);
    ExprVector energies{sys.H, Hd};
    energy_ = Program(energies, base);
    for (const auto& e : domain.exclusions) exclusions_.push_back(e);
    exclusion_prog_ = Program(exclusions_, base);
    margin_ = 1e-3 * domain.max_width();
    for (std::size_t i = 0; i < n_; ++i) {
      const Interval* iv = domain.find(sys.x[i]);
      boxes_.push_back(iv ? std::optional<Interval>(*iv) : std::nullopt);
    }
    in_base_.resize(base.size());
    in_u_.resize(with_u.size());
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  void check(const std::vector<double>& x) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(x[i])) throw Escape{ErrorCode::kNonFinite, "state became non-finite"};
      if (boxes_[i] && (x[i] < boxes_[i]->lo || x[i] > boxes_[i]->hi)) {
        throw Escape{ErrorCode::kDomainEscape,
                     "state component " + std::to_string(i + 1) + " left its interval"};
      }
    }
    if (exclusions_.empty()) return;
    load_base(x);
    std::vector<double> ev(exclusions_.size());
    run(exclusion_prog_, in_base_, ev);
    for (std::size_t e = 0; e < ev.size(); ++e) {
      if (std::fabs(ev[e]) < margin_) {
        throw Escape{ErrorCode::kDomainEscape,
                     "state reached the singular set " + to_string(exclusions_[e]) + " = 0"};
      }
    }
  }

  void input(const std::vector<double>& x, std::vector<double>& u) {
    u.assign(m_, 0.0);
    if (!m_) return;
    load_base(x);
    run(control_, in_base_, u);
  }

  void rhs(const std::vector<double>& x, std::vector<double>& dx) {
    std::vector<double> u;
    input(x, u);
    std::copy(x.begin(), x.end(), in_u_.begin());
    std::copy(u.begin(), u.end(), in_u_.begin() + n_);
    std::copy(params_.begin(), params_.end(), in_u_.begin() + n_ + m_);
    dx.resize(n_);
    run(field_, in_u_, dx);
  }

  void energies(const std::vector<double>& x, double& H, double& Hd) {
    load_base(x);
    double out[2];
    run(energy_, in_base_, std::span<double>(out, 2));
    H = out[0];
    Hd = out[1];
  }

 private:
  void load_base(const std::vector<double>& x) {
    std::copy(x.begin(), x.end(), in_base_.begin());
    std::copy(params_.begin(), params_.end(), in_base_.begin() + n_);
  }

  static void run(const Program& p, std::span<const double> in, std::span<double> out) {
    try {
      p.run(in, out);
    } catch (const Error& e) {
      throw Escape{ErrorCode::kDomainEscape, std::string("evaluation failed: ") + e.what()};
    }
    for (double v : out) {
      if (!std::isfinite(v)) throw Escape{ErrorCode::kNonFinite, "non-finite value in the dynamics"};
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<double> params_;
  std::vector<std::string> param_names_;
  Program field_, control_, energy_, exclusion_prog_;
  std::vector<Expr> exclusions_;
  double margin_ = 0.0;
  std::vector<std::optional<Interval>> boxes_;
  std::vector<double> in_base_, in_u_;
};

}  // namespace

void SimConfig::validate(std::size_t n) const {
  if (!(dt > 0.0)) fail(ErrorCode::kInvalidArgument, "time step must be positive");
  if (!(t_final >= dt)) fail(ErrorCode::kInvalidArgument, "final time must be at least one step");
  if (record_every < 1) fail(ErrorCode::kInvalidArgument, "record_every must be at least 1");
  if (x0.size() != n) {
    fail(ErrorCode::kDimension, "initial state has " + std::to_string(x0.size()) +
                                    " entries, system has " + std::to_string(n));
  }
}

Trajectory simulate(const PCHSystem& sys, const ExprVector& controller,
                    const std::optional<Expr>& H_d, const Domain& domain, const SimConfig& cfg) {
  sys.validate();
  cfg.validate(sys.n());
  if (!controller.empty() && controller.size() != sys.m()) {
    fail(ErrorCode::kDimension, "controller has the wrong number of inputs");
  }
  Dynamics dyn(sys, controller, H_d ? *H_d : sys.H, domain);
  std::size_t n = dyn.n();

  Trajectory traj;
  traj.state_names = sys.x;
  auto record = [&](double t, const std::vector<double>& x) {
    std::vector<double> u;
    dyn.input(x, u);
    double H = 0.0, Hd = 0.0;
    dyn.energies(x, H, Hd);
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.inputs.push_back(std::move(u));
    traj.H.push_back(H);
    traj.Hd.push_back(Hd);
  };

  std::vector<double> x = cfg.x0;
  try {
    dyn.check(x);
  } catch (const Escape& e) {
    fail(ErrorCode::kDomain, "initial state is outside the domain: " + e.message);
  }
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  long steps = std::lround(cfg.t_final / cfg.dt);
  const double h = cfg.dt;
  try {
    record(0.0, x);
    for (long s = 1; s <= steps; ++s) {
      dyn.rhs(x, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      dyn.rhs(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      dyn.rhs(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
      dyn.rhs(tmp, k4);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      dyn.check(x);
      if (s % cfg.record_every == 0 || s == steps) record(static_cast<double>(s) * h, x);
    }
  } catch (const Escape& e) {
    traj.stopped = e.code;
    traj.message = e.message;
  }
  return traj;
}

MonotoneResult energy_monotone(const Trajectory& traj, EnergyColumn which, double slack) {
  const auto& E = which == EnergyColumn::kH ? traj.H : traj.Hd;
  MonotoneResult r;
  for (std::size_t k = 1; k < E.size(); ++k) {
    double inc = E[k] - E[k - 1];
    r.worst_increase = std::max(r.worst_increase, inc);
    if (inc > slack) r.monotone = false;
  }
  return r;
}

ConvergenceMetric convergence_metric(const Trajectory& traj, const std::vector<double>& x_star,
                                     double hd_star) {
  ConvergenceMetric m;
  if (traj.size() == 0) fail(ErrorCode::kInvalidArgument, "empty trajectory");
  const auto& xT = traj.states.back();
  if (xT.size() != x_star.size()) fail(ErrorCode::kDimension, "target has the wrong dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < xT.size(); ++i) s += (xT[i] - x_star[i]) * (xT[i] - x_star[i]);
  m.final_error = std::sqrt(s);
  double initial = traj.Hd.front() - hd_star;
  m.excess_energy_ratio = initial < 1e-14 ? 0.0 : (traj.Hd.back() - hd_star) / initial;
  return m;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  std::size_t n = traj.state_names.size();
  std::size_t m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  for (std::size_t j = 1; j <= m; ++j) out << ",u" << j;
  out << ",H,Hd\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    out << buf;
  };
  for (std::size_t k = 0; k < traj.size(); ++k) {
    put(traj.times[k]);
    for (double v : traj.states[k]) out << ',', put(v);
    for (double v : traj.inputs[k]) out << ',', put(v);
    out << ',';
    put(traj.H[k]);
    out << ',';
    put(traj.Hd[k]);
    out << '\n';
  }
}

}  // namespace pfida

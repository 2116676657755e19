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

// Command-line front end over the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfida/pfida.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

// Solver and run failures are results; everything else is bad input.
int exit_code(pfida_status s) {
  switch (s) {
    case PFIDA_OK:
      return kExitPass;
    case PFIDA_E_NOT_EXACT:
    case PFIDA_E_NOT_INTEGRABLE:
    case PFIDA_E_STAGE1_UNSOLVABLE:
    case PFIDA_E_STAGE4_UNSOLVABLE:
    case PFIDA_E_PARAMETERIZATION_FAILED:
    case PFIDA_E_HYPOTHESIS_VIOLATED:
    case PFIDA_E_NOT_AFFINE:
    case PFIDA_E_SINGULAR_INPUT:
    case PFIDA_E_NO_CONVERGENCE:
    case PFIDA_E_DOMAIN_ESCAPE:
    case PFIDA_E_NON_FINITE:
      return kExitFail;
    default:
      return kExitInput;
  }
}

int report_error(pfida_status s, const std::string& context = {}) {
  std::cerr << "pfida: " << (context.empty() ? "" : context + ": ") << pfida_status_name(s)
            << ": " << pfida_last_error() << "\n";
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pfida_string_free(s);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void print_records(std::ostream& out, const std::vector<pfida_record>& rs) {
  std::size_t width = 4;
  for (const auto& r : rs) width = std::max(width, std::string(r.name).size());
  out << std::left << std::setw(static_cast<int>(width)) << "name"
      << "  kind     result  max_abs    max_rel    points  note\n";
  for (const auto& r : rs) {
    out << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
        << std::setw(7) << (r.gating ? "check" : "verdict") << "  "
        << std::setw(6) << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(9)
        << fmt(r.max_abs_residual) << "  " << std::setw(9) << fmt(r.max_rel_residual) << "  "
        << std::setw(6) << r.n_points << "  " << r.note << "\n";
  }
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream s;
  s << in.rdbuf();
  text = s.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

struct CaseHandle {
  pfida_case* c = nullptr;
  ~CaseHandle() { pfida_case_free(c); }
};

int load_case(const std::string& name, const std::string& params_path, CaseHandle& h) {
  if (auto s = pfida_case_load(name.c_str(), &h.c); s != PFIDA_OK) return report_error(s);
  if (!params_path.empty()) {
    std::string text;
    if (!read_file(params_path, text)) {
      std::cerr << "pfida: cannot read parameter file " << params_path << "\n";
      return kExitInput;
    }
    if (auto s = pfida_case_apply_params(h.c, text.c_str()); s != PFIDA_OK) {
      return report_error(s, params_path);
    }
  }
  return kExitPass;
}

struct CheckArgs {
  std::string target;
  std::size_t points = 200;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::string json;
};

int cmd_check(const CheckArgs& a) {
  CaseHandle h;
  if (int rc = load_case(a.target, "", h); rc != kExitPass) return rc;
  pfida_report* rep = nullptr;
  if (auto s = pfida_check(h.c, a.points, a.tol, a.seed, &rep); s != PFIDA_OK) {
    return report_error(s, a.target);
  }
  std::vector<pfida_record> rs(pfida_report_size(rep));
  for (std::size_t i = 0; i < rs.size(); ++i) pfida_report_record(rep, i, &rs[i]);
  std::cout << "case " << pfida_case_name(h.c) << "  seed " << a.seed << "  points " << a.points
            << "  tol " << a.tol << "\n";
  print_records(std::cout, rs);
  bool pass = pfida_report_pass(rep);
  std::size_t failed = 0;
  for (const auto& r : rs) failed += r.gating && !r.pass;
  std::cout << (pass ? "PASS" : "FAIL") << " (" << failed << " failing checks, "
            << fmt(pfida_report_seconds(rep)) << " s)\n";
  int rc = pass ? kExitPass : kExitFail;
  if (!a.json.empty()) {
    char* text = nullptr;
    if (auto s = pfida_report_json(rep, 0, &text); s != PFIDA_OK) {
      rc = report_error(s);
    } else if (!write_file(a.json, take(text))) {
      std::cerr << "pfida: cannot write " << a.json << "\n";
      rc = kExitInput;
    }
  }
  pfida_report_free(rep);
  return rc;
}

struct SolveArgs {
  std::string form;
  std::string hint_u;
  bool trace = false;
  std::uint64_t seed = 42;
};

int cmd_solve(const SolveArgs& a) {
  pfida_form* f = nullptr;
  if (auto s = pfida_form_load(a.form.c_str(), &f); s != PFIDA_OK) return report_error(s, a.form);
  pfida_record integ{};
  char* residual = nullptr;
  if (auto s = pfida_form_integrability(f, a.seed, &integ, &residual); s != PFIDA_OK) {
    pfida_form_free(f);
    return report_error(s, a.form);
  }
  std::cout << "integrability residual " << take(residual) << "  ("
            << (integ.pass ? "PASS" : "FAIL") << ", max_rel " << fmt(integ.max_rel_residual)
            << ")\n";
  pfida_trace* t = nullptr;
  auto s = pfida_form_solve(f, a.hint_u.empty() ? nullptr : a.hint_u.c_str(), a.seed, &t);
  pfida_form_free(f);
  if (s != PFIDA_OK) {
    return report_error(s, s == PFIDA_E_NOT_INTEGRABLE ? "integrability test" : "");
  }
  std::cout << "U       = " << pfida_trace_get(t, PFIDA_TRACE_U) << "\n"
            << "mu      = " << pfida_trace_get(t, PFIDA_TRACE_MU) << "\n"
            << "K       = " << pfida_trace_get(t, PFIDA_TRACE_K) << "\n"
            << "K(U)    = " << pfida_trace_get(t, PFIDA_TRACE_K_OF_U) << "\n"
            << "phi_arg = " << pfida_trace_get(t, PFIDA_TRACE_PHI_ARG) << "\n";
  if (a.trace) {
    std::cout << "stage 1 method: " << pfida_trace_get(t, PFIDA_TRACE_STAGE1_METHOD)
              << (pfida_trace_hint_used(t) ? " (hint)" : "") << "\n"
              << "stage 4 method: " << pfida_trace_get(t, PFIDA_TRACE_STAGE4_METHOD) << "\n";
  }
  std::vector<pfida_record> rs(pfida_trace_size(t));
  for (std::size_t i = 0; i < rs.size(); ++i) pfida_trace_record(t, i, &rs[i]);
  if (!a.trace && !rs.empty()) rs.erase(rs.begin(), rs.end() - 1);
  print_records(std::cout, rs);
  bool pass = true;
  for (const auto& r : rs) pass = pass && (!r.gating || r.pass);
  pfida_trace_free(t);
  return pass ? kExitPass : kExitFail;
}

struct SimulateArgs {
  std::string target;
  std::string x0;
  std::string params;
  std::string out;
  bool open_loop = false;
  double dt = 1e-3;
  double t_final = 20.0;
};

bool parse_vector(const std::string& text, std::vector<double>& out) {
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const char* b = item.c_str();
    char* end = nullptr;
    double v = std::strtod(b, &end);
    while (end && (*end == ' ' || *end == '\t')) ++end;
    if (end == b || *end != '\0' || !std::isfinite(v)) return false;
    out.push_back(v);
  }
  return !out.empty() && text.back() != ',';
}

int cmd_simulate(const SimulateArgs& a) {
  CaseHandle h;
  if (int rc = load_case(a.target, a.params, h); rc != kExitPass) return rc;
  std::vector<double> x0;
  if (!parse_vector(a.x0, x0)) {
    std::cerr << "pfida: malformed --x0 '" << a.x0 << "'\n";
    return kExitInput;
  }
  char* calibrated = nullptr;
  if (auto s = pfida_case_calibrate(h.c, &calibrated); s != PFIDA_OK) {
    return report_error(s, "calibration");
  }
  pfida_string_free(calibrated);
  pfida_sim_options o = pfida_sim_defaults();
  o.dt = a.dt;
  o.t_final = a.t_final;
  o.open_loop = a.open_loop;
  pfida_trajectory* t = nullptr;
  if (auto s = pfida_simulate(h.c, x0.data(), x0.size(), &o, &t); s != PFIDA_OK) {
    return report_error(s);
  }
  int rc = kExitPass;
  if (!a.out.empty()) {
    char* csv = nullptr;
    if (auto s = pfida_trajectory_csv(t, &csv); s != PFIDA_OK) {
      rc = report_error(s);
    } else if (!write_file(a.out, take(csv))) {
      std::cerr << "pfida: cannot write " << a.out << "\n";
      rc = kExitInput;
    }
  }
  std::size_t n = pfida_trajectory_size(t);
  std::cout << "case " << pfida_case_name(h.c) << (a.open_loop ? "  open loop" : "  closed loop")
            << "  steps " << (n ? n - 1 : 0) << "  t_end " << pfida_trajectory_time(t, n - 1)
            << "\n";
  double h0 = 0.0, drift = 0.0;
  pfida_trajectory_energy(t, 0, &h0, nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    double hi = 0.0;
    pfida_trajectory_energy(t, i, &hi, nullptr);
    drift = std::max(drift, std::abs(hi - h0));
  }
  std::cout << "H_drift             " << fmt(drift) << "\n";
  pfida_sim_metrics m{};
  if (pfida_trajectory_metrics(t, h.c, 1e-8, &m) == PFIDA_OK) {
    std::cout << "final_error         " << fmt(m.final_error) << "\n"
              << "excess_energy_ratio " << fmt(m.excess_energy_ratio) << "\n"
              << "energy_monotone     " << (m.hd_monotone ? "PASS" : "FAIL")
              << " (worst increase " << fmt(m.worst_increase) << ")\n";
  } else {
    std::cout << "convergence metrics unavailable: " << pfida_last_error() << "\n";
  }
  const char* msg = nullptr;
  if (auto s = pfida_trajectory_stopped(t, &msg); s != PFIDA_OK) {
    std::cerr << "pfida: run stopped: " << pfida_status_name(s) << ": " << msg << "\n";
    rc = exit_code(s);
  }
  pfida_trajectory_free(t);
  return rc;
}

struct CalibrateArgs {
  std::string target;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& a) {
  CaseHandle h;
  if (int rc = load_case(a.target, "", h); rc != kExitPass) return rc;
  char* text = nullptr;
  if (auto s = pfida_case_calibrate(h.c, &text); s != PFIDA_OK) return report_error(s, a.target);
  std::string body = take(text);
  std::string path = a.out.empty() ? std::string(pfida_case_name(h.c)) + ".params" : a.out;
  if (!write_file(path, body)) {
    std::cerr << "pfida: cannot write " << path << "\n";
    return kExitInput;
  }
  std::cout << body << "written to " << path << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pfaffian-form IDA-PBC toolkit"};
  app.set_version_flag("--version", std::string(pfida_version()));
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "verify the shipped derivations of a case");
  c->add_option("case", check.target, "case name or case file")->required();
  c->add_option("--points", check.points, "sample points per check")->check(CLI::PositiveNumber);
  c->add_option("--tol", check.tol, "relative tolerance")->check(CLI::PositiveNumber);
  c->add_option("--seed", check.seed, "sampling seed")->envname("PFIDA_SEED");
  c->add_option("--json", check.json, "write the report as JSON");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "integrate a Pfaffian form in five stages");
  s->add_option("form", solve.form, ".pf form file")->required();
  s->add_option("--hint-u", solve.hint_u, "candidate first integral for stage 1");
  s->add_flag("--trace", solve.trace, "print every stage");
  s->add_option("--seed", solve.seed, "sampling seed")->envname("PFIDA_SEED");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "integrate the closed or open loop");
  m->add_option("case", sim.target, "case name or case file")->required();
  m->add_option("--x0", sim.x0, "initial state v1,...,vn")->required();
  m->add_flag("--open-loop", sim.open_loop, "zero input");
  m->add_option("--dt", sim.dt, "time step");
  m->add_option("--t-final", sim.t_final, "final time");
  m->add_option("--out", sim.out, "trajectory CSV");
  m->add_option("--params", sim.params, "parameter overrides (sidecar format)");

  CalibrateArgs cal;
  auto* k = app.add_subcommand("calibrate", "solve for free parameters and write a sidecar");
  k->add_option("case", cal.target, "case name or case file")->required();
  k->add_option("--out", cal.out, "sidecar path (default <case>.params)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*c) return cmd_check(check);
  if (*s) return cmd_solve(solve);
  if (*m) return cmd_simulate(sim);
  return cmd_calibrate(cal);
}

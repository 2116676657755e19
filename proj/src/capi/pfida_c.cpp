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

#include "pfida/pfida.h"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "pfida/benchmarks.hpp"
#include "pfida/report.hpp"
#include "pfida/simulate.hpp"

struct pfida_case {
  pfida::BenchmarkCase c;
};

struct pfida_report {
  pfida::Report r;
};

struct pfida_form {
  pfida::FormFile f;
};

struct pfida_trace {
  pfida::SolutionTrace t;
  std::string fields[7];
  std::vector<pfida::ResidualReport> records;
};

struct pfida_trajectory {
  pfida::Trajectory t;
};

namespace {

thread_local std::string last_error;

pfida_status status_of(pfida::ErrorCode code) {
  return static_cast<pfida_status>(static_cast<int>(code) + 1);
}

template <class F>
pfida_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return PFIDA_OK;
  } catch (const pfida::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return PFIDA_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return PFIDA_E_INTERNAL;
  }
}

pfida_status invalid(const char* message) {
  last_error = message;
  return PFIDA_E_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const pfida::ResidualReport& r, pfida_record* out) {
  out->name = r.name.c_str();
  out->gating = r.kind == pfida::CheckKind::kCheck;
  out->pass = r.pass;
  out->max_abs_residual = r.max_abs;
  out->max_rel_residual = r.max_rel;
  out->n_points = r.n_points;
  out->tolerance = r.tolerance;
  out->note = r.note.c_str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

extern "C" {

const char* pfida_version(void) { return PFIDA_VERSION; }

const char* pfida_status_name(pfida_status s) {
  if (s == PFIDA_OK) return "ok";
  if (s == PFIDA_E_INTERNAL) return "internal error";
  if (s > PFIDA_OK && s < PFIDA_E_INTERNAL) {
    return pfida::to_string(static_cast<pfida::ErrorCode>(static_cast<int>(s) - 1));
  }
  return "unknown status";
}

const char* pfida_last_error(void) { return last_error.c_str(); }

void pfida_string_free(char* s) { std::free(s); }

size_t pfida_case_count(void) { return pfida::case_names().size(); }

const char* pfida_case_name_at(size_t i) {
  static const std::vector<std::string> names = pfida::case_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

pfida_status pfida_case_load(const char* name_or_path, pfida_case** out) {
  if (!name_or_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new pfida_case{pfida::resolve_case(name_or_path)}; });
}

void pfida_case_free(pfida_case* c) { delete c; }

const char* pfida_case_name(const pfida_case* c) { return c ? c->c.name.c_str() : nullptr; }

pfida_status pfida_case_get_param(const pfida_case* c, const char* name, double* out) {
  if (!c || !name || !out) return invalid("null argument");
  return guarded([&] { *out = c->c.param(name); });
}

pfida_status pfida_case_set_param(pfida_case* c, const char* name, double value) {
  if (!c || !name) return invalid("null argument");
  return guarded([&] {
    c->c.param(name);
    c->c.set_param(name, value);
  });
}

pfida_status pfida_case_apply_params(pfida_case* c, const char* text) {
  if (!c || !text) return invalid("null argument");
  return guarded([&] {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
      if (line == "[params]") continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        pfida::fail(pfida::ErrorCode::kSyntax,
                    "parameter line " + std::to_string(no) + ": expected 'name = value'");
      }
      auto name = line.substr(0, eq);
      name = name.substr(0, name.find_last_not_of(" \t") + 1);
      double value = pfida::eval(pfida::parse(line.substr(eq + 1)), c->c.domain.fixed);
      c->c.param(name);
      c->c.set_param(name, value);
    }
  });
}

size_t pfida_case_state_dim(const pfida_case* c) { return c ? c->c.state().size() : 0; }

const char* pfida_case_state_name(const pfida_case* c, size_t i) {
  if (!c) return nullptr;
  const auto& names = c->c.kind == pfida::ModelKind::kPortHamiltonian ? c->c.pch.x : c->c.mech.q;
  if (i < names.size()) return names[i].c_str();
  if (c->c.kind == pfida::ModelKind::kMechanical && i < 2 * names.size()) {
    return c->c.mech.p[i - names.size()].c_str();
  }
  return nullptr;
}

pfida_status pfida_case_equilibrium(const pfida_case* c, double* out, size_t dim) {
  if (!c || !out) return invalid("null argument");
  return guarded([&] {
    auto x = c->c.equilibrium_state();
    if (x.size() != dim) pfida::fail(pfida::ErrorCode::kDimension, "wrong state dimension");
    std::copy(x.begin(), x.end(), out);
  });
}

pfida_status pfida_case_calibrate(pfida_case* c, char** params_text) {
  if (!c || !params_text) return invalid("null argument");
  *params_text = nullptr;
  return guarded([&] {
    auto cc = pfida::calibrate_case(c->c);
    if (cc.attempted && !cc.result.converged) {
      pfida::fail(pfida::ErrorCode::kNoConvergence,
                  "calibration did not converge (residual " + format_double(cc.result.residual) +
                      ")");
    }
    std::string text = "# calibrated parameters of case " + c->c.name + "\n";
    text += "# equilibrium: " + cc.result.equilibrium.verdict + ", gradient norm " +
            format_double(cc.result.equilibrium.gradient_norm) + "\n[params]\n";
    for (const auto& p : c->c.calibrate) text += p + " = " + format_double(c->c.param(p)) + "\n";
    *params_text = dup(text);
  });
}

pfida_status pfida_check(const pfida_case* c, size_t points, double tol, uint64_t seed,
                         pfida_report** out) {
  if (!c || !out) return invalid("null argument");
  if (points == 0 || !(tol > 0.0)) return invalid("points and tolerance must be positive");
  *out = nullptr;
  return guarded([&] {
    pfida::SampleOptions o;
    o.points = points;
    o.tolerance = tol;
    o.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    auto v = pfida::verify_case(c->c, o);
    auto* r = new pfida_report;
    r->r.tool_version = PFIDA_VERSION;
    r->r.case_name = c->c.name;
    r->r.seed = seed;
    r->r.points = points;
    r->r.tolerance = tol;
    r->r.checks = std::move(v.reports);
    r->r.unused_solutions = std::move(v.unused_solutions);
    r->r.timing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *out = r;
  });
}

void pfida_report_free(pfida_report* r) { delete r; }

int pfida_report_pass(const pfida_report* r) { return r && r->r.pass(); }

size_t pfida_report_size(const pfida_report* r) { return r ? r->r.checks.size() : 0; }

pfida_status pfida_report_record(const pfida_report* r, size_t i, pfida_record* out) {
  if (!r || !out) return invalid("null argument");
  if (i >= r->r.checks.size()) return invalid("record index out of range");
  fill(r->r.checks[i], out);
  return PFIDA_OK;
}

double pfida_report_seconds(const pfida_report* r) { return r ? r->r.timing_seconds : 0.0; }

pfida_status pfida_report_json(const pfida_report* r, int include_timing, char** out) {
  if (!r || !out) return invalid("null argument");
  return guarded([&] { *out = dup(pfida::to_json(r->r, include_timing != 0)); });
}

pfida_status pfida_form_load(const char* path, pfida_form** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new pfida_form{pfida::load_form(path)}; });
}

pfida_status pfida_form_parse(const char* text, pfida_form** out) {
  if (!text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new pfida_form{pfida::parse_form(text)}; });
}

void pfida_form_free(pfida_form* f) { delete f; }

pfida_status pfida_form_integrability(const pfida_form* f, uint64_t seed, pfida_record* out,
                                      char** residual) {
  if (!f || !out) return invalid("null argument");
  thread_local pfida::ResidualReport held;
  return guarded([&] {
    pfida::SampleOptions o;
    o.seed = seed;
    held = pfida::integrability_check(f->f.form, f->f.domain, o);
    fill(held, out);
    if (residual) {
      *residual = dup(pfida::to_string(pfida::simplify(pfida::integrability_residual(f->f.form))));
    }
  });
}

pfida_status pfida_form_solve(const pfida_form* f, const char* hint_u, uint64_t seed,
                              pfida_trace** out) {
  if (!f || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    pfida::FiveStageOptions o;
    o.sample.seed = seed;
    if (hint_u) o.hint_u = pfida::parse(hint_u);
    auto* t = new pfida_trace;
    try {
      t->t = pfida::five_stage_solve(f->f.form, f->f.domain, o);
    } catch (...) {
      delete t;
      throw;
    }
    t->fields[PFIDA_TRACE_U] = pfida::to_string(t->t.U);
    t->fields[PFIDA_TRACE_MU] = pfida::to_string(t->t.mu);
    t->fields[PFIDA_TRACE_K] = pfida::to_string(t->t.K);
    t->fields[PFIDA_TRACE_K_OF_U] = pfida::to_string(t->t.K_of_u);
    t->fields[PFIDA_TRACE_PHI_ARG] = pfida::to_string(t->t.phi_arg);
    t->fields[PFIDA_TRACE_STAGE1_METHOD] = t->t.stage1_method;
    t->fields[PFIDA_TRACE_STAGE4_METHOD] = t->t.stage4_method;
    t->records = t->t.stage_reports;
    if (t->records.empty() || t->records.back().name != t->t.residual_report.name) {
      t->records.push_back(t->t.residual_report);
    }
    *out = t;
  });
}

void pfida_trace_free(pfida_trace* t) { delete t; }

const char* pfida_trace_get(const pfida_trace* t, pfida_trace_field field) {
  if (!t || field < PFIDA_TRACE_U || field > PFIDA_TRACE_STAGE4_METHOD) return nullptr;
  return t->fields[field].c_str();
}

int pfida_trace_hint_used(const pfida_trace* t) { return t && t->t.hint_used; }

size_t pfida_trace_size(const pfida_trace* t) { return t ? t->records.size() : 0; }

pfida_status pfida_trace_record(const pfida_trace* t, size_t i, pfida_record* out) {
  if (!t || !out) return invalid("null argument");
  if (i >= t->records.size()) return invalid("record index out of range");
  fill(t->records[i], out);
  return PFIDA_OK;
}

pfida_sim_options pfida_sim_defaults(void) {
  pfida::SimConfig d;
  return pfida_sim_options{d.dt, d.t_final, static_cast<size_t>(d.record_every), 0};
}

pfida_status pfida_simulate(const pfida_case* c, const double* x0, size_t dim,
                            const pfida_sim_options* opts, pfida_trajectory** out) {
  if (!c || !x0 || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    pfida::SimConfig cfg;
    cfg.x0.assign(x0, x0 + dim);
    if (opts) {
      cfg.dt = opts->dt;
      cfg.t_final = opts->t_final;
      cfg.record_every = static_cast<int>(opts->record_every);
    }
    bool open = opts && opts->open_loop;
    auto sys = c->c.state_model();
    pfida::ExprVector u;
    if (!open) u = c->c.controller(pfida::SampleOptions{});
    *out = new pfida_trajectory{
        pfida::simulate(sys, u, c->c.desired_energy(), c->c.domain, cfg)};
  });
}

void pfida_trajectory_free(pfida_trajectory* t) { delete t; }

size_t pfida_trajectory_size(const pfida_trajectory* t) { return t ? t->t.size() : 0; }

size_t pfida_trajectory_dim(const pfida_trajectory* t) {
  return t ? t->t.state_names.size() : 0;
}

double pfida_trajectory_time(const pfida_trajectory* t, size_t row) {
  return t && row < t->t.size() ? t->t.times[row] : 0.0;
}

pfida_status pfida_trajectory_state(const pfida_trajectory* t, size_t row, double* out,
                                    size_t dim) {
  if (!t || !out) return invalid("null argument");
  if (row >= t->t.size()) return invalid("row out of range");
  if (dim != t->t.states[row].size()) return invalid("wrong state dimension");
  std::copy(t->t.states[row].begin(), t->t.states[row].end(), out);
  return PFIDA_OK;
}

pfida_status pfida_trajectory_energy(const pfida_trajectory* t, size_t row, double* H,
                                     double* Hd) {
  if (!t) return invalid("null argument");
  if (row >= t->t.size()) return invalid("row out of range");
  if (H) *H = t->t.H[row];
  if (Hd) *Hd = t->t.Hd[row];
  return PFIDA_OK;
}

pfida_status pfida_trajectory_stopped(const pfida_trajectory* t, const char** message) {
  if (!t) return invalid("null argument");
  if (message) *message = t->t.message.c_str();
  return t->t.stopped ? status_of(*t->t.stopped) : PFIDA_OK;
}

pfida_status pfida_trajectory_csv(const pfida_trajectory* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    std::ostringstream s;
    pfida::write_csv(t->t, s);
    *out = dup(s.str());
  });
}

pfida_status pfida_trajectory_metrics(const pfida_trajectory* t, const pfida_case* c,
                                      double slack, pfida_sim_metrics* out) {
  if (!t || !c || !out) return invalid("null argument");
  return guarded([&] {
    auto xs = c->c.equilibrium_state();
    pfida::Bindings b = c->c.domain.fixed;
    auto names = c->c.state();
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = xs[i];
    double hd_star = pfida::eval(c->c.desired_energy(), b);
    auto m = pfida::convergence_metric(t->t, xs, hd_star);
    auto mono = pfida::energy_monotone(t->t, pfida::EnergyColumn::kHd, slack);
    *out = pfida_sim_metrics{m.final_error, m.excess_energy_ratio, mono.monotone ? 1 : 0,
                             mono.worst_increase};
  });
}

}  // extern "C"

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

#ifndef PFIDA_PFIDA_H
#define PFIDA_PFIDA_H

#include <stddef.h>
#include <stdint.h>

#if defined(PFIDA_BUILDING_LIBRARY)
#define PFIDA_API __attribute__((visibility("default")))
#else
#define PFIDA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* One status per library error code, plus PFIDA_E_INTERNAL. */
typedef enum pfida_status {
  PFIDA_OK = 0,
  PFIDA_E_SYNTAX,
  PFIDA_E_UNKNOWN_FUNCTION,
  PFIDA_E_UNBOUND_SYMBOL,
  PFIDA_E_DOMAIN,
  PFIDA_E_NOT_IN_CATALOG,
  PFIDA_E_DIMENSION,
  PFIDA_E_NOT_EXACT,
  PFIDA_E_NOT_INTEGRABLE,
  PFIDA_E_STAGE1_UNSOLVABLE,
  PFIDA_E_STAGE4_UNSOLVABLE,
  PFIDA_E_PARAMETERIZATION_FAILED,
  PFIDA_E_HYPOTHESIS_VIOLATED,
  PFIDA_E_NOT_AFFINE,
  PFIDA_E_SINGULAR_INPUT,
  PFIDA_E_NO_CONVERGENCE,
  PFIDA_E_DOMAIN_ESCAPE,
  PFIDA_E_NON_FINITE,
  PFIDA_E_UNKNOWN_CASE,
  PFIDA_E_IO,
  PFIDA_E_INVALID_ARGUMENT,
  PFIDA_E_INTERNAL
} pfida_status;

typedef struct pfida_case pfida_case;
typedef struct pfida_report pfida_report;
typedef struct pfida_form pfida_form;
typedef struct pfida_trace pfida_trace;
typedef struct pfida_trajectory pfida_trajectory;

typedef struct pfida_record {
  const char* name;
  int gating; /* 1 for checks, 0 for informational verdicts */
  int pass;
  double max_abs_residual;
  double max_rel_residual;
  size_t n_points;
  double tolerance;
  const char* note;
} pfida_record;

PFIDA_API const char* pfida_version(void);
PFIDA_API const char* pfida_status_name(pfida_status s);
/* Message of the last failure on the calling thread. */
PFIDA_API const char* pfida_last_error(void);
/* Frees strings returned through char** out-parameters. */
PFIDA_API void pfida_string_free(char* s);

/* Cases */
PFIDA_API size_t pfida_case_count(void);
PFIDA_API const char* pfida_case_name_at(size_t i);
/* A shipped case name, or the path of a case file. */
PFIDA_API pfida_status pfida_case_load(const char* name_or_path, pfida_case** out);
PFIDA_API void pfida_case_free(pfida_case* c);
PFIDA_API const char* pfida_case_name(const pfida_case* c);
PFIDA_API pfida_status pfida_case_get_param(const pfida_case* c, const char* name, double* out);
PFIDA_API pfida_status pfida_case_set_param(pfida_case* c, const char* name, double value);
/* `name = value` lines; `#` comments and a `[params]` header are ignored. */
PFIDA_API pfida_status pfida_case_apply_params(pfida_case* c, const char* text);
PFIDA_API size_t pfida_case_state_dim(const pfida_case* c);
PFIDA_API const char* pfida_case_state_name(const pfida_case* c, size_t i);
/* Writes dim entries; PFIDA_E_INVALID_ARGUMENT when the case has none. */
PFIDA_API pfida_status pfida_case_equilibrium(const pfida_case* c, double* out, size_t dim);

/* Calibrates the case's free parameters and returns them as sidecar text. */
PFIDA_API pfida_status pfida_case_calibrate(pfida_case* c, char** params_text);

/* Checks */
PFIDA_API pfida_status pfida_check(const pfida_case* c, size_t points, double tol, uint64_t seed,
                                   pfida_report** out);
PFIDA_API void pfida_report_free(pfida_report* r);
PFIDA_API int pfida_report_pass(const pfida_report* r);
PFIDA_API size_t pfida_report_size(const pfida_report* r);
/* Strings in the record live as long as the report. */
PFIDA_API pfida_status pfida_report_record(const pfida_report* r, size_t i, pfida_record* out);
PFIDA_API double pfida_report_seconds(const pfida_report* r);
PFIDA_API pfida_status pfida_report_json(const pfida_report* r, int include_timing, char** out);

/* Pfaffian forms (.pf text) */
PFIDA_API pfida_status pfida_form_load(const char* path, pfida_form** out);
PFIDA_API pfida_status pfida_form_parse(const char* text, pfida_form** out);
PFIDA_API void pfida_form_free(pfida_form* f);
/* Integrability check; `residual` receives X . curl X as an expression. */
PFIDA_API pfida_status pfida_form_integrability(const pfida_form* f, uint64_t seed,
                                                pfida_record* out, char** residual);
/* hint_u may be NULL. */
PFIDA_API pfida_status pfida_form_solve(const pfida_form* f, const char* hint_u, uint64_t seed,
                                        pfida_trace** out);
PFIDA_API void pfida_trace_free(pfida_trace* t);

typedef enum pfida_trace_field {
  PFIDA_TRACE_U,
  PFIDA_TRACE_MU,
  PFIDA_TRACE_K,
  PFIDA_TRACE_K_OF_U,
  PFIDA_TRACE_PHI_ARG,
  PFIDA_TRACE_STAGE1_METHOD,
  PFIDA_TRACE_STAGE4_METHOD
} pfida_trace_field;

PFIDA_API const char* pfida_trace_get(const pfida_trace* t, pfida_trace_field field);
PFIDA_API int pfida_trace_hint_used(const pfida_trace* t);
/* Stage reports followed by the final parallelism report. */
PFIDA_API size_t pfida_trace_size(const pfida_trace* t);
PFIDA_API pfida_status pfida_trace_record(const pfida_trace* t, size_t i, pfida_record* out);

/* Simulation */
typedef struct pfida_sim_options {
  double dt;
  double t_final;
  size_t record_every;
  int open_loop;
} pfida_sim_options;

PFIDA_API pfida_sim_options pfida_sim_defaults(void);
/* A run stopped by domain escape or non-finite values still returns
   PFIDA_OK; see pfida_trajectory_stopped. */
PFIDA_API pfida_status pfida_simulate(const pfida_case* c, const double* x0, size_t dim,
                                      const pfida_sim_options* opts, pfida_trajectory** out);
PFIDA_API void pfida_trajectory_free(pfida_trajectory* t);
PFIDA_API size_t pfida_trajectory_size(const pfida_trajectory* t);
PFIDA_API size_t pfida_trajectory_dim(const pfida_trajectory* t);
PFIDA_API double pfida_trajectory_time(const pfida_trajectory* t, size_t row);
PFIDA_API pfida_status pfida_trajectory_state(const pfida_trajectory* t, size_t row, double* out,
                                              size_t dim);
PFIDA_API pfida_status pfida_trajectory_energy(const pfida_trajectory* t, size_t row, double* H,
                                               double* Hd);
/* PFIDA_OK when the run reached t_final, else the stopping status. */
PFIDA_API pfida_status pfida_trajectory_stopped(const pfida_trajectory* t, const char** message);
PFIDA_API pfida_status pfida_trajectory_csv(const pfida_trajectory* t, char** out);

typedef struct pfida_sim_metrics {
  double final_error;
  double excess_energy_ratio;
  int hd_monotone;
  double worst_increase;
} pfida_sim_metrics;

/* Against the case equilibrium; H_d non-increase is tested with `slack`. */
PFIDA_API pfida_status pfida_trajectory_metrics(const pfida_trajectory* t, const pfida_case* c,
                                                double slack, pfida_sim_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* PFIDA_PFIDA_H */

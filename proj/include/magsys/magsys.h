/* Copyright 2026 The magsys-lab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the magsys-lab core. All handles are opaque; every fallible
 * call returns a magsys_status and leaves a message for magsys_last_error()
 * on the calling thread. Output pointers are written only on success.
 */
#ifndef MAGSYS_MAGSYS_H
#define MAGSYS_MAGSYS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MAGSYS_API __declspec(dllexport)
#else
#define MAGSYS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum magsys_status {
  MAGSYS_OK = 0,
  MAGSYS_INVALID_ARGUMENT = 1,
  MAGSYS_ZOLL_REGIME_VIOLATION = 2,
  MAGSYS_QUADRATURE_FAILURE = 3,
  MAGSYS_STEP_FAILURE = 4,
  MAGSYS_NO_RETURN = 5,
  MAGSYS_TANGENCY_ERROR = 6,
  MAGSYS_NO_CONVERGENCE = 7,
  MAGSYS_DIVERGED_FROM_FAMILY = 8,
  MAGSYS_CAP_NOT_FOUND = 9,
  MAGSYS_NO_ORBITS_FOUND = 10,
  MAGSYS_PARSE_ERROR = 11,
  MAGSYS_VALIDATION_ERROR = 12,
  MAGSYS_IO_ERROR = 13,
  MAGSYS_INTERNAL_ERROR = 99
} magsys_status;

typedef enum magsys_command {
  MAGSYS_CMD_ORBIT = 0,
  MAGSYS_CMD_SWEEP = 1,
  MAGSYS_CMD_SYSTOLE = 2,
  MAGSYS_CMD_VOLUME = 3,
  MAGSYS_CMD_ZOLLPOLY = 4,
  MAGSYS_CMD_CONSTANTS = 5
} magsys_command;

typedef struct magsys_system magsys_system;
typedef struct magsys_config magsys_config;
typedef struct magsys_result magsys_result;

/* Summary of one systole/sweep run. */
typedef struct magsys_run_summary {
  double eps;
  int ok; /* 0 when the run errored; status holds the cause */
  magsys_status status;
  size_t orbits;
  double l_min;
  double l_max;
  double reference;
  double slack_lower;
  double slack_upper;
  double vol_g;
  double vol_g0;
  int zoll_flag;
  int census_complete;
  int verdict_normalized; /* 0 PASS, 1 FAIL, 2 SKIP */
  int verdict_full;
  int verdict_two_sided;
} magsys_run_summary;

MAGSYS_API const char* magsys_version(void);
/* Message of the last failed call on this thread; "" after a success. */
MAGSYS_API const char* magsys_last_error(void);
MAGSYS_API const char* magsys_status_name(magsys_status status);

/* ---- systems ---- */
MAGSYS_API magsys_status magsys_model_create(double kappa, double strength, magsys_system** out);
/* Conformal perturbation by a named scalar field; normalize != 0 restores the area. */
MAGSYS_API magsys_status magsys_system_perturb(const magsys_system* sys, const char* field,
                                               const double* coefficients, size_t n_coefficients,
                                               double eps, int normalize, magsys_system** out);
MAGSYS_API magsys_status magsys_system_volume(const magsys_system* sys, double* out);
/* Distinct capped closed orbits on the default seed grid; lengths ascending. */
MAGSYS_API magsys_status magsys_system_orbit_lengths(const magsys_system* sys, int grid_density,
                                                     double* lengths, size_t capacity,
                                                     size_t* count);
MAGSYS_API void magsys_system_free(magsys_system* sys);

/* ---- closed-form constants ---- */
MAGSYS_API magsys_status magsys_reference_length(double kappa, double strength, double* out);
MAGSYS_API magsys_status magsys_a_of_r(double kappa, double strength, double r, double* out);
MAGSYS_API magsys_status magsys_zoll_polynomial_kahler(double kappa, double strength, int n,
                                                       double vol_g0, double A, double* out);

/* ---- configuration ---- */
MAGSYS_API magsys_status magsys_config_parse_file(const char* path, magsys_config** out);
MAGSYS_API magsys_status magsys_config_parse_string(const char* text, const char* source,
                                                    magsys_config** out);
/* Setters record the key as overridden on the command line. */
MAGSYS_API magsys_status magsys_config_set_seed(magsys_config* cfg, uint64_t seed);
MAGSYS_API magsys_status magsys_config_set_workers(magsys_config* cfg, unsigned workers);
MAGSYS_API magsys_status magsys_config_set_tol_orbit(magsys_config* cfg, double tol);
MAGSYS_API magsys_status magsys_config_set_tol_quad(magsys_config* cfg, double tol);
MAGSYS_API magsys_status magsys_config_set_format(magsys_config* cfg, const char* format);
/* Borrowed pointer, valid until the config is modified or freed. */
MAGSYS_API const char* magsys_config_format(const magsys_config* cfg);
MAGSYS_API void magsys_config_free(magsys_config* cfg);

/* ---- commands ---- */
MAGSYS_API magsys_status magsys_run(magsys_command command, const magsys_config* cfg,
                                    magsys_result** out);
MAGSYS_API magsys_status magsys_run_zollpoly(const magsys_config* cfg, double a_min, double a_max,
                                             int steps, magsys_result** out);
/* Writes the report files for `format` ("json" or "csv") into outdir. */
MAGSYS_API magsys_status magsys_result_emit(const magsys_result* res, const char* format,
                                            const char* outdir);
/* 0 all verdicts pass, 2 some verdict fails, 1 some run errored. */
MAGSYS_API int magsys_result_exit_code(const magsys_result* res);
/* Borrowed pointers, valid until the result is freed; "" for a null result. */
MAGSYS_API const char* magsys_result_json(const magsys_result* res);
MAGSYS_API const char* magsys_result_csv(const magsys_result* res);
MAGSYS_API size_t magsys_result_run_count(const magsys_result* res);
MAGSYS_API magsys_status magsys_result_run_summary(const magsys_result* res, size_t index,
                                                   magsys_run_summary* out);
MAGSYS_API void magsys_result_free(magsys_result* res);

#ifdef __cplusplus
}
#endif

#endif /* MAGSYS_MAGSYS_H */

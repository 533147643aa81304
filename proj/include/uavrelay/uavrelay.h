/* SPDX-License-Identifier: Apache-2.0 */
#ifndef UAVRELAY_H
#define UAVRELAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UAVRELAY_BUILDING)
#    define UAVR_API __declspec(dllexport)
#  else
#    define UAVR_API __declspec(dllimport)
#  endif
#else
#  define UAVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct uavr_scenario uavr_scenario;
typedef struct uavr_table uavr_table;

typedef enum uavr_status {
    UAVR_OK = 0,
    UAVR_INVALID_ARGUMENT = 1,
    UAVR_PARSE = 2,
    UAVR_VALIDATION = 3,
    UAVR_INFEASIBLE = 4,
    UAVR_QUADRATURE = 5,
    UAVR_BUDGET = 6,
    UAVR_IO = 7,
    UAVR_INTERNAL = 8
} uavr_status;

typedef enum uavr_method {
    UAVR_METHOD_QUADRATURE = 0,
    UAVR_METHOD_CLOSED_FORM = 1,
    UAVR_METHOD_MONTE_CARLO = 2,
    UAVR_METHOD_ASYMPTOTIC_1 = 3
} uavr_method;

typedef enum uavr_axis { UAVR_AXIS_X = 0, UAVR_AXIS_Y = 1, UAVR_AXIS_Z = 2 } uavr_axis;

typedef enum uavr_sweep_param {
    UAVR_SWEEP_OGS_NOISE = 0,
    UAVR_SWEEP_CLOUD_EXTINCTION = 1
} uavr_sweep_param;

typedef struct uavr_position {
    double x, y, z;
} uavr_position;

typedef struct uavr_capacity {
    double value; /* nats/s/Hz */
    double error_estimate;
    uint64_t evaluations;
    uavr_method method;
} uavr_capacity;

/* Active box faces in uavr_solution.active. */
enum {
    UAVR_ACTIVE_X_LOW = 1,
    UAVR_ACTIVE_X_HIGH = 2,
    UAVR_ACTIVE_Y_LOW = 4,
    UAVR_ACTIVE_Y_HIGH = 8,
    UAVR_ACTIVE_Z_LOW = 16,
    UAVR_ACTIVE_Z_HIGH = 32
};

typedef struct uavr_solution {
    uavr_position position;
    double capacity;
    double min_altitude;
    uint64_t evaluations;
    unsigned active;
    int budget_exhausted;
} uavr_solution;

typedef struct uavr_maxmin_solution {
    double x, y;
    double value;
    size_t binding_sensor;
    int special_case;
} uavr_maxmin_solution;

UAVR_API const char* uavr_version(void);
UAVR_API const char* uavr_status_name(uavr_status status);
/* Message, field and line of the last failure on the calling thread. */
UAVR_API const char* uavr_last_error(void);
UAVR_API const char* uavr_last_error_field(void);
UAVR_API int uavr_last_error_line(void);

UAVR_API uavr_status uavr_scenario_default(uavr_scenario** out);
UAVR_API uavr_status uavr_scenario_load(const char* path, uavr_scenario** out);
UAVR_API uavr_status uavr_scenario_parse(const char* text, uavr_scenario** out);
UAVR_API uavr_status uavr_scenario_clone(const uavr_scenario* s, uavr_scenario** out);
/* key is "section.key", e.g. "relay.scheme". */
UAVR_API uavr_status uavr_scenario_set(uavr_scenario* s, const char* key, const char* value);
UAVR_API uavr_status uavr_scenario_serialize(const uavr_scenario* s, char** text);
/* out must hold 17 bytes. */
UAVR_API uavr_status uavr_scenario_digest(const uavr_scenario* s, char* out);
UAVR_API void uavr_scenario_free(uavr_scenario* s);

UAVR_API uavr_status uavr_min_altitude(const uavr_scenario* s, double* out);
UAVR_API uavr_status uavr_evaluate(const uavr_scenario* s, uavr_position pos, uavr_method method,
                                   uavr_capacity* out);
/* starts may be NULL; otherwise receives one row per local search. */
UAVR_API uavr_status uavr_solve(const uavr_scenario* s, uavr_solution* out, uavr_table** starts);
UAVR_API uavr_status uavr_slice(const uavr_scenario* s, uavr_axis axis, uavr_position at, const double* grid,
                                size_t n, uavr_table** out);
UAVR_API uavr_status uavr_sweep(const uavr_scenario* s, uavr_sweep_param param, const double* values, size_t n,
                                double coupling_slope, uavr_table** out);
/* dims is 1 or 2. candidates may be NULL. */
UAVR_API uavr_status uavr_maxmin(const uavr_scenario* s, double z, int dims, uavr_maxmin_solution* out,
                                 uavr_table** candidates);
/* Quadrature against Monte Carlo on the scenario plus `extra` randomised variants, both
   schemes. *all_within_3se is set to 1 when every |diff| / std_error < 3. */
UAVR_API uavr_status uavr_validate(const uavr_scenario* s, uint64_t samples, uint64_t seed, unsigned extra,
                                   uavr_table** out, int* all_within_3se);

UAVR_API size_t uavr_table_rows(const uavr_table* t);
UAVR_API size_t uavr_table_cols(const uavr_table* t);
UAVR_API const char* uavr_table_column(const uavr_table* t, size_t col);
UAVR_API double uavr_table_value(const uavr_table* t, size_t row, size_t col);
/* bits != 0 converts capacity columns to bits/s/Hz. */
UAVR_API uavr_status uavr_table_csv(const uavr_table* t, int bits, char** out);
/* JSON result record; command is stored verbatim. */
UAVR_API uavr_status uavr_table_record(const uavr_table* t, const uavr_scenario* s, const char* command,
                                       const char* started_at, int bits, char** out);
UAVR_API void uavr_table_free(uavr_table* t);

UAVR_API char* uavr_timestamp(void);
UAVR_API void uavr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

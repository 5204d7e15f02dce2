/*
 * tilecache — joint cache placement and request routing for tile-and-layer
 * encoded 360-degree video across collaborating edge base stations.
 *
 * C API of the shared library. All objects are opaque handles; every call
 * returns a tc_status, with outputs through pointer arguments. Strings
 * returned through char** are heap-allocated and must be released with
 * tc_string_free(). Handles are not thread-safe; distinct handles may be used
 * from distinct threads. On failure, tc_last_error() returns a thread-local
 * human-readable message.
 */
#ifndef TILECACHE_H
#define TILECACHE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tc_scenario_s tc_scenario;
typedef struct tc_result_s tc_result;

typedef enum tc_status {
    TC_OK = 0,
    TC_ERROR_INVALID_ARGUMENT = 1, /* bad parameter or inconsistent input */
    TC_ERROR_PARSE = 2,            /* malformed JSON */
    TC_ERROR_TOO_LARGE = 3,        /* instance over an exact-solver size bound */
    TC_ERROR_INTERNAL = 4
} tc_status;

const char* tc_version(void);
const char* tc_status_name(tc_status status);
/* Thread-local message describing the most recent failure in this thread. */
const char* tc_last_error(void);

void tc_string_free(char* text);

/* --- Scenarios ----------------------------------------------------------- */

/* Builds a scenario from a generator config JSON (defaults for every field
 * the config omits: 5 SBSs at radius 300 m, 10% cache, 30 users, 10 videos of
 * 30 GoPs in a 3x4 tile grid with 2 layers, Zipf eta 1). */
tc_status tc_scenario_generate(const char* config_json, tc_scenario** out);

tc_status tc_scenario_from_json(const char* scenario_json, tc_scenario** out);
tc_status tc_scenario_to_json(const tc_scenario* scenario, char** out_json);

/* Request-probability dump (per-tile z heatmap) for inspection. */
tc_status tc_scenario_demand_json(const tc_scenario* scenario, char** out_json);

void tc_scenario_free(tc_scenario* scenario);

/* --- Solving ------------------------------------------------------------- */

/* scheme: "proposed", "ic", "jcl", "jcnt" or "icnt".
 * options_json (may be NULL): {"subgradient": "exact"|"paper", "epsilon": ...,
 * "w": ..., "tau_max": ..., "lambda0": ..., "softchr_realizations": ...}. */
tc_status tc_solve(const tc_scenario* scenario, const char* scheme, const char* options_json,
                   tc_result** out);

/* Exact brute-force optimum of the first-GoP subproblem of a tiny scenario.
 * Fails with TC_ERROR_TOO_LARGE above the documented size bounds. */
tc_status tc_oracle_solve(const tc_scenario* scenario, tc_result** out);

tc_status tc_result_metrics_json(const tc_result* result, char** out_json);
tc_status tc_result_policies_json(const tc_result* result, char** out_json);
/* Convergence trace CSV (tau,UB,LB,gap,sigma) of one 1-based GoP. */
tc_status tc_result_trace_csv(const tc_result* result, int gop, char** out_csv);
tc_status tc_result_distortion(const tc_result* result, double* out_d);

void tc_result_free(tc_result* result);

/* --- Validation ---------------------------------------------------------- */

/* Checks a policies JSON document against the scenario's constraint system.
 * out_violation_count receives the number of violations; the report JSON
 * lists each one. */
tc_status tc_validate_policies(const tc_scenario* scenario, const char* policies_json,
                               char** out_report_json, int* out_violation_count);

/* --- Sweeps -------------------------------------------------------------- */

/* axis: "cache", "radius", "sbs_delay", "backhaul_delay", "zipf", "viewport".
 * values_csv: comma-separated axis values (numbers, or distribution names for
 * the viewport axis). schemes_csv: comma-separated scheme names, or "all".
 * seeds: replicate count (scenario seeds base..base+seeds-1). jobs: worker
 * threads, 0 for auto. Returns the long-format results CSV and a per-point
 * mean/standard-error summary CSV. */
tc_status tc_sweep(const char* config_json, const char* axis, const char* values_csv,
                   const char* schemes_csv, int seeds, int jobs, char** out_csv,
                   char** out_summary_csv);

#ifdef __cplusplus
}
#endif

#endif /* TILECACHE_H */

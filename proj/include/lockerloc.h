/*
 * C API for the locker location library.
 *
 * All functions return LLP_OK on success or an error code; the message for
 * the most recent failure on the calling thread is available through
 * llp_last_error(). Objects are opaque handles released with the matching
 * _free function; strings returned through char** outputs are released with
 * llp_string_free().
 */
#ifndef LOCKERLOC_H
#define LOCKERLOC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LLP_API __declspec(dllexport)
#else
#define LLP_API __attribute__((visibility("default")))
#endif

typedef enum llp_status_code {
    LLP_OK = 0,
    LLP_ERROR_INVALID_ARGUMENT = 1,
    LLP_ERROR_VALIDATION = 2,
    LLP_ERROR_PARSE = 3,
    LLP_ERROR_IO = 4,
    LLP_ERROR_CONTRACT = 5,
    LLP_ERROR_INTERNAL = 6
} llp_status_code;

typedef enum llp_solve_status {
    LLP_SOLVE_OPTIMAL = 0,
    LLP_SOLVE_GAP_LIMIT = 1,
    LLP_SOLVE_TIME_LIMIT = 2,
    LLP_SOLVE_NODE_LIMIT = 3
} llp_solve_status;

typedef enum llp_method { LLP_METHOD_BB = 0, LLP_METHOD_BRUTEFORCE = 1 } llp_method;

typedef enum llp_branch_rule {
    LLP_BRANCH_MAX_DEMAND_WEIGHTED_ATTRACTION = 0,
    LLP_BRANCH_LOWEST_INDEX = 1
} llp_branch_rule;

typedef enum llp_heuristic {
    LLP_HEURISTIC_GREEDY_LOCAL_SEARCH = 0,
    LLP_HEURISTIC_NONE = 1
} llp_heuristic;

typedef enum llp_form {
    LLP_FORM_IPD = 0,
    LLP_FORM_IPA = 1,
    LLP_FORM_MICQP_D = 2,
    LLP_FORM_MICQP_A = 3
} llp_form;

typedef enum llp_export_format {
    LLP_EXPORT_LP = 0,
    LLP_EXPORT_CONIC = 1,
    LLP_EXPORT_JSON = 2
} llp_export_format;

typedef enum llp_vary {
    LLP_VARY_GAMMA = 0,
    LLP_VARY_ALPHA = 1,
    LLP_VARY_XI = 2,
    LLP_VARY_F = 3
} llp_vary;

typedef struct llp_instance llp_instance;
typedef struct llp_result llp_result;

typedef struct llp_generator_spec {
    int zones;
    int lockers;
    double side;
    double demand_lo;
    double demand_hi;
    double alpha;
    double xi;
    uint64_t seed;
} llp_generator_spec;

typedef struct llp_solve_options {
    double gap_tolerance;      /* < 0 picks the default 1e-6 */
    double time_limit_seconds; /* <= 0: no limit */
    long long node_limit;      /* <= 0: no limit */
    int branching_rule;        /* llp_branch_rule */
    int heuristic;             /* llp_heuristic */
    int threads;               /* >= 1 */
    int method;                /* llp_method */
} llp_solve_options;

LLP_API const char* llp_version(void);
LLP_API const char* llp_last_error(void);
LLP_API void llp_string_free(char* text);

/* ---- instances ---- */

LLP_API llp_status_code llp_instance_generate(const llp_generator_spec* spec,
                                              llp_instance** out);
LLP_API llp_status_code llp_instance_load(const char* path, llp_instance** out);
LLP_API llp_status_code llp_instance_from_json(const char* text, llp_instance** out);
LLP_API llp_status_code llp_instance_save(const llp_instance* instance, const char* path);
LLP_API llp_status_code llp_instance_to_json(const llp_instance* instance, char** out);
LLP_API void llp_instance_free(llp_instance* instance);

LLP_API int llp_instance_zone_count(const llp_instance* instance);
LLP_API int llp_instance_locker_count(const llp_instance* instance);
LLP_API double llp_instance_gamma(const llp_instance* instance);
LLP_API double llp_instance_total_demand(const llp_instance* instance);
LLP_API uint64_t llp_instance_hash(const llp_instance* instance);

/* New handle with a different dominance threshold; pass INFINITY for the
 * proportional (no-dominance) limit. */
LLP_API llp_status_code llp_instance_with_gamma(const llp_instance* instance, double gamma,
                                                llp_instance** out);

/* ---- solving ---- */

LLP_API void llp_solve_options_default(llp_solve_options* options);

/* costs: per-locker cost array of length locker_count, or NULL to use the
 * costs stored on the instance. */
LLP_API llp_status_code llp_solve(const llp_instance* instance, const double* costs,
                                  const llp_solve_options* options, llp_result** out);
LLP_API void llp_result_free(llp_result* result);

LLP_API double llp_result_profit(const llp_result* result);
LLP_API double llp_result_revenue(const llp_result* result);
LLP_API double llp_result_facility_cost(const llp_result* result);
LLP_API double llp_result_upper_bound(const llp_result* result);
LLP_API double llp_result_gap(const llp_result* result);
LLP_API long long llp_result_nodes(const llp_result* result);
LLP_API double llp_result_wall_time(const llp_result* result);
LLP_API int llp_result_status(const llp_result* result);
LLP_API int llp_result_open_count(const llp_result* result);
LLP_API int llp_result_is_open(const llp_result* result, int locker);
LLP_API int llp_result_is_allowed(const llp_result* result, int zone, int locker);
LLP_API llp_status_code llp_result_to_json(const llp_result* result, char** out);

/* ---- model export ---- */

LLP_API llp_status_code llp_export_model(const llp_instance* instance, const double* costs,
                                         int form, int format, char** out);
LLP_API llp_status_code llp_export_dot(const llp_instance* instance, int zone, char** out);

/* ---- sensitivity sweeps ---- */

/* One solve per value; the CSV contract is documented with the library.
 * costs as in llp_solve. */
LLP_API llp_status_code llp_sweep_csv(const llp_instance* base, int vary, const double* values,
                                      size_t value_count, const double* costs,
                                      const llp_solve_options* options, char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LOCKERLOC_H */

/*
 * channelforge C API.
 *
 * A channel is loaded from JSON, a builtin spec, or a file, analyzed into a
 * switching plan (optimal branch probabilities, rescaled operators, success
 * probability, bounds), compiled into beamsplitter/phase-shifter networks,
 * and cross-checked with a single-photon simulator.
 *
 * Every object returned through an out-parameter is owned by the caller:
 * release handles with the matching *_free and strings with
 * cf_string_free. Functions return CF_OK on success; on failure the out
 * parameters are untouched and cf_last_error() describes the problem for
 * the calling thread.
 */

#ifndef CHANNELFORGE_H
#define CHANNELFORGE_H

#include <stdint.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_ERROR_PARSE = 1,
    CF_ERROR_INVALID_CHANNEL = 2,
    CF_ERROR_OPTIMIZER = 3,
    CF_ERROR_INADMISSIBLE = 4,
    CF_ERROR_PLAN_INCONSISTENT = 5,
    CF_ERROR_BAD_ARGUMENT = 6,
    CF_ERROR_NUMERIC = 7,
    CF_ERROR_IO = 8
} cf_status;

typedef struct cf_channel cf_channel;
typedef struct cf_plan cf_plan;

/* ---- channels ---------------------------------------------------------- */

CF_API cf_status cf_channel_from_json(const char* json_text, cf_channel** out_channel);
CF_API cf_status cf_channel_from_file(const char* path, cf_channel** out_channel);

/* Builtin specs: "ad:<eps>", "constmix:<p>:<s>", "id:<d>", "depol:<p>",
 * "ru:<file>". */
CF_API cf_status cf_channel_from_builtin(const char* spec, cf_channel** out_channel);

CF_API void cf_channel_free(cf_channel* channel);

CF_API int cf_channel_dim(const cf_channel* channel);
CF_API int cf_channel_operator_count(const cf_channel* channel);

/* Canonical JSON document for the channel (kraus form). */
CF_API cf_status cf_channel_json(const cf_channel* channel, char** out_json);

/* Trace-preservation / admissibility report. out_pass and out_report_json
 * may each be NULL when not wanted. A failing channel still returns CF_OK;
 * the verdict is in *out_pass and the report. */
CF_API cf_status cf_channel_validate(const cf_channel* channel, int* out_pass,
                                     char** out_report_json);

/* ---- analysis ----------------------------------------------------------- */

typedef struct cf_analyze_options {
    uint64_t seed;
    int restarts;       /* <= 0 selects the default (32) */
    int max_iterations; /* <= 0 selects the default (2000) */
    int n_out;          /* <= 0 selects rank^2 capped at 16 */
    int threads;        /* <= 0 honors CHANNELFORGE_THREADS, then hardware */
} cf_analyze_options;

/* Fills the documented defaults (seed 12345, restarts 32, ...). */
CF_API void cf_analyze_options_init(cf_analyze_options* options);

/* Optimizes the Kraus decomposition, builds the switching plan, and keeps
 * the channel around for bounds and verification. */
CF_API cf_status cf_analyze(const cf_channel* channel, const cf_analyze_options* options,
                            cf_plan** out_plan);

CF_API void cf_plan_free(cf_plan* plan);

CF_API double cf_plan_p_succ(const cf_plan* plan);
CF_API double cf_plan_sigma(const cf_plan* plan);
CF_API int cf_plan_certified(const cf_plan* plan);
CF_API int cf_plan_branch_count(const cf_plan* plan);

CF_API cf_status cf_plan_json(const cf_plan* plan, char** out_json);

/* Full bounds report (triangle, concurrence for qubits, assistance). */
CF_API cf_status cf_plan_bounds_json(const cf_plan* plan, char** out_json);

/* Compiled optical network for one branch. The network is checked against
 * the branch operator before it is returned. */
CF_API cf_status cf_plan_network_json(const cf_plan* plan, int branch, char** out_json);

/* Deterministic verification through the photon simulator: rebuilds the
 * realized channel from the compiled networks and reports the worst Choi
 * matrix entry error and the simulated success probability. */
CF_API cf_status cf_plan_verify(const cf_plan* plan, double* out_choi_error,
                                double* out_p_succ_sim);

/* Threshold-detector Monte Carlo of the switched scheme on the maximally
 * mixed input; returns the simulation report document. */
CF_API cf_status cf_plan_simulate_json(const cf_plan* plan, long long shots, uint64_t seed,
                                       char** out_json);

/* ---- misc --------------------------------------------------------------- */

CF_API const char* cf_last_error(void);
CF_API void cf_string_free(char* text);
CF_API const char* cf_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CHANNELFORGE_H */

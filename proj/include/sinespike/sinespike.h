#ifndef SINESPIKE_SINESPIKE_H
#define SINESPIKE_SINESPIKE_H

/*
 * C interface to the sines-and-spikes demixing library.
 *
 * Objects are opaque handles created by ssp_* constructors and released with the
 * matching *_free function. Every fallible call returns an ssp_status; on failure
 * ssp_last_error() describes the problem for the calling thread. Options and results
 * are exchanged as JSON text.
 */

#if defined(_WIN32)
#  if defined(SINESPIKE_BUILDING)
#    define SSP_API __declspec(dllexport)
#  else
#    define SSP_API __declspec(dllimport)
#  endif
#else
#  define SSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ssp_instance ssp_instance;
typedef struct ssp_result ssp_result;

typedef enum ssp_status {
    SSP_OK = 0,
    SSP_ERR_INVALID_ARGUMENT = 1,
    SSP_ERR_INFEASIBLE = 2,
    SSP_ERR_SINGULAR = 3,
    SSP_ERR_NOT_CONVERGED = 4,
    SSP_ERR_NUMERICAL = 5,
    SSP_ERR_PARSE = 6,
    SSP_ERR_INTERNAL = 7
} ssp_status;

SSP_API const char* ssp_version(void);
SSP_API const char* ssp_status_name(ssp_status status);
/** Message for the most recent failure on this thread; empty if none. */
SSP_API const char* ssp_last_error(void);

/**
 * Draws a random instance. params_json keys: n, k, s, delta (units of 1/(n-1)) or
 * delta_min, amp_law ("unit_phase" | "complex_gaussian"), support_mode ("fixed" |
 * "bernoulli"), noise_level, seed.
 */
SSP_API ssp_status ssp_instance_generate(const char* params_json, ssp_instance** out);
/** Parses an instance document, or raw data {"y": [...]} without ground truth. */
SSP_API ssp_status ssp_instance_parse(const char* instance_json, ssp_instance** out);
SSP_API ssp_status ssp_instance_picket_fence(int n, ssp_instance** out);
SSP_API ssp_status ssp_instance_size(const ssp_instance* inst, int* n);
/** Copies the n samples into re[0..len) and im[0..len); len must equal n. */
SSP_API ssp_status ssp_instance_samples(const ssp_instance* inst, double* re, double* im, int len);
/** Serializes the instance; release the string with ssp_string_free. */
SSP_API ssp_status ssp_instance_json(const ssp_instance* inst, char** out);
SSP_API void ssp_instance_free(ssp_instance* inst);

/* Solvers. options_json may be NULL for defaults. */
SSP_API ssp_status ssp_demix(const ssp_instance* inst, const char* options_json, ssp_result** out);
SSP_API ssp_status ssp_denoise(const ssp_instance* inst, const char* options_json, ssp_result** out);
SSP_API ssp_status ssp_greedy(const ssp_instance* inst, const char* options_json, ssp_result** out);
SSP_API ssp_status ssp_certificate(const ssp_instance* inst, const char* options_json, ssp_result** out);
SSP_API ssp_status ssp_baseline(const ssp_instance* inst, const char* options_json, ssp_result** out);
SSP_API ssp_status ssp_grid(const char* grid_json, ssp_result** out);

/** JSON text owned by the result; valid until ssp_result_free. */
SSP_API ssp_status ssp_result_json(const ssp_result* res, const char** json);
/** 1 when the underlying solver met its stopping criteria, 0 otherwise. */
SSP_API int ssp_result_converged(const ssp_result* res);
SSP_API int ssp_result_table_count(const ssp_result* res);
/** Named CSV table owned by the result. */
SSP_API ssp_status ssp_result_table(const ssp_result* res, int index, const char** name, const char** csv);
SSP_API void ssp_result_free(ssp_result* res);

SSP_API void ssp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

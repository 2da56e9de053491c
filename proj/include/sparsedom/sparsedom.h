#ifndef SPARSEDOM_SPARSEDOM_H
#define SPARSEDOM_SPARSEDOM_H

/* C interface to the dyadic sparse domination toolkit.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an sd_status; the
 * message of the last failure on the calling thread is available through
 * sd_last_error(). Strings returned through char** are heap allocated and
 * released with sd_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(SPARSEDOM_BUILDING)
#define SD_API __attribute__((visibility("default")))
#else
#define SD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_INVALID_ARGUMENT = 1,
  SD_ERR_DEPTH_MISMATCH = 2,
  SD_ERR_IO = 3,
  SD_ERR_PARSE = 4,
  SD_ERR_INVARIANT = 5,
  SD_ERR_INTERNAL = 6
} sd_status;

typedef struct sd_signal sd_signal;
typedef struct sd_weight sd_weight;
typedef struct sd_multiplier sd_multiplier;
typedef struct sd_collection sd_collection;
typedef struct sd_certificate sd_certificate;

typedef struct sd_params {
  double p, q, r;
  int chi_M;       /* decay exponent of the localized averages */
  double stop_C;   /* initial stopping threshold */
  double lambda;   /* oscillation quantile */
  double K;        /* weak (1,1) constant */
} sd_params;

SD_API const char* sd_last_error(void);
SD_API const char* sd_status_name(sd_status s);
SD_API void sd_string_free(char* s);
SD_API sd_params sd_params_default(void);

/* Signals: 2^depth cell values on [0,1). */
SD_API sd_status sd_signal_create(int depth, const double* values, sd_signal** out);
SD_API sd_status sd_signal_load(const char* path, sd_signal** out);
/* kind: gaussian_noise | sparse_haar:K | step | single_mode:DEPTH:INDEX */
SD_API sd_status sd_signal_generate(const char* kind, int depth, uint64_t seed, sd_signal** out);
SD_API int sd_signal_depth(const sd_signal* f);
SD_API size_t sd_signal_size(const sd_signal* f);
SD_API sd_status sd_signal_values(const sd_signal* f, double* out, size_t n);
SD_API void sd_signal_free(sd_signal* f);

/* Weights: strictly positive densities. */
SD_API sd_status sd_weight_create(int depth, const double* values, sd_weight** out);
/* kind: constant[:C] | two_level:T | dyadic_doubling:DELTA | power_like:A */
SD_API sd_status sd_weight_generate(const char* kind, int depth, uint64_t seed, sd_weight** out);
SD_API sd_status sd_weight_ap(const sd_weight* w, double p, double* out);
SD_API void sd_weight_free(sd_weight* w);

/* Haar multipliers: rows depth,index,eps with |eps| <= 1. */
SD_API sd_status sd_multiplier_create(int depth, size_t n, const int* depths, const uint64_t* indices,
                                      const double* eps, sd_multiplier** out);
SD_API sd_status sd_multiplier_uniform(int depth, double eps, sd_multiplier** out);
SD_API sd_status sd_multiplier_load(const char* path, int depth, sd_multiplier** out);
SD_API sd_status sd_multiplier_random(int depth, uint64_t seed, double density, sd_multiplier** out);
SD_API sd_status sd_multiplier_apply(const sd_multiplier* T, const sd_signal* f, sd_signal** out);
SD_API void sd_multiplier_free(sd_multiplier* T);

/* Dyadic collections: rows depth,index. depth < 0 takes the deepest row. */
SD_API sd_status sd_collection_create(int depth, size_t n, const int* depths, const uint64_t* indices,
                                      sd_collection** out);
SD_API sd_status sd_collection_load(const char* path, int depth, sd_collection** out);
SD_API sd_status sd_collection_random(int depth, uint64_t seed, sd_collection** out);
SD_API size_t sd_collection_size(const sd_collection* S);
SD_API sd_status sd_collection_carleson(const sd_collection* S, double* out);
SD_API sd_status sd_collection_report_json(const sd_collection* S, char** json);
SD_API void sd_collection_free(sd_collection* S);

SD_API sd_status sd_haar_json(const sd_signal* f, char** json);

/* mode: avg | square | weighted | osc. w is required for weighted only. */
SD_API sd_status sd_dominate(const char* mode, const sd_multiplier* T, const sd_signal* f, const sd_signal* g,
                             const sd_weight* w, const sd_params* params, sd_certificate** out);
SD_API sd_status sd_certificate_from_json(const char* json, sd_certificate** out);
SD_API sd_status sd_certificate_json(const sd_certificate* c, char** json);
/* *ok is 1 when every check passes; detail (optional) describes the first failure. */
SD_API sd_status sd_certificate_verify(const sd_certificate* c, int* ok, char** detail);
SD_API double sd_certificate_realized_constant(const sd_certificate* c);
SD_API size_t sd_certificate_intervals(const sd_certificate* c);
SD_API void sd_certificate_free(sd_certificate* c);

SD_API sd_status sd_atoms_json(const sd_signal* f, const sd_params* params, char** json);
SD_API sd_status sd_cz_json(const sd_signal* f, double alpha, char** json);
/* S may be NULL for the identity operator. */
SD_API sd_status sd_weak11_json(const sd_collection* S, const sd_signal* f, const sd_params* params, uint64_t seed,
                                char** json);
SD_API sd_status sd_lerner_json(const sd_signal* phi, const sd_params* params, char** json);

/* Runs a campaign from a JSON configuration, writes the configured outputs and
 * returns the summary JSON. Returns SD_ERR_INVARIANT when a hard invariant
 * failed in any trial; the summary is still produced. */
SD_API sd_status sd_campaign_run(const char* config_json, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif

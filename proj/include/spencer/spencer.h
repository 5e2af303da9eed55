#ifndef SPENCER_SPENCER_H
#define SPENCER_SPENCER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SPENCER_API __declspec(dllexport)
#else
#define SPENCER_API __attribute__((visibility("default")))
#endif

typedef enum spencer_status {
  SPENCER_OK = 0,
  SPENCER_ERR_INTERNAL = 1,
  SPENCER_ERR_USAGE = 2,
  SPENCER_ERR_RESOURCE = 3,
  SPENCER_ERR_IDENTITY = 4
} spencer_status;

typedef struct spencer_algebra spencer_algebra;
typedef struct spencer_operator spencer_operator;
typedef struct spencer_kernel spencer_kernel;

typedef struct spencer_options {
  unsigned threads;
  uint64_t max_dim;
  uint64_t seed;
} spencer_options;

SPENCER_API const char* spencer_version(void);
/* Message for the last failing call on this thread; empty if none. */
SPENCER_API const char* spencer_last_error(void);
/* Frees strings returned through char** out-parameters. */
SPENCER_API void spencer_string_free(char* s);
SPENCER_API void spencer_options_default(spencer_options* opts);

/* Algebras */
SPENCER_API spencer_status spencer_algebra_create(const char* label, spencer_algebra** out);
SPENCER_API spencer_status spencer_algebra_from_json(const char* json, spencer_algebra** out);
SPENCER_API void spencer_algebra_destroy(spencer_algebra* a);
SPENCER_API spencer_status spencer_algebra_dim(const spencer_algebra* a, size_t* dim);
SPENCER_API spencer_status spencer_algebra_to_json(const spencer_algebra* a, char** json);

/* Operators: variant is "classical", "constrained" or "equivalent"; the lambda
   spec is ignored for the classical variant and may be NULL. */
SPENCER_API spencer_status spencer_operator_create(const spencer_algebra* a, const char* variant,
                                                   const char* lambda_spec, int k, const spencer_options* opts,
                                                   spencer_operator** out);
SPENCER_API void spencer_operator_destroy(spencer_operator* op);
SPENCER_API spencer_status spencer_operator_shape(const spencer_operator* op, uint64_t* rows, uint64_t* cols,
                                                  uint64_t* nnz);
SPENCER_API spencer_status spencer_operator_write_mtx(const spencer_operator* op, const char* path);
SPENCER_API spencer_status spencer_operator_report(const spencer_operator* op, int include_entries, char** json);

/* Kernels */
SPENCER_API spencer_status spencer_kernel_compute(const spencer_operator* op, const spencer_options* opts,
                                                  spencer_kernel** out);
SPENCER_API void spencer_kernel_destroy(spencer_kernel* kb);
SPENCER_API spencer_status spencer_kernel_dim(const spencer_kernel* kb, uint64_t* dim, uint64_t* rank);
SPENCER_API spencer_status spencer_kernel_report(const spencer_kernel* kb, int include_basis, int module_analysis,
                                                 char** json);

/* Report-level entry points; each returns a JSON report body. */
SPENCER_API spencer_status spencer_lie_info(const char* label, char** json);
SPENCER_API spencer_status spencer_verify(const char* label, const char* lambda_spec, int k_min, int k_max,
                                          const spencer_options* opts, char** json, int* identities_hold);
SPENCER_API spencer_status spencer_cohomology(const char* label, const char* lambda_spec, int k, int torus_dim,
                                              int subdivisions, const spencer_options* opts, char** json);
/* kernel_dim < 0 means no measurement is supplied. */
SPENCER_API spencer_status spencer_tension(const char* label, int64_t h11, int64_t kernel_dim, char** json);
/* csv_path may be NULL. */
SPENCER_API spencer_status spencer_varsolve(const char* config_json, const char* csv_path, char** json);
SPENCER_API spencer_status spencer_min_irrep_dim(const char* label, int* out);

#ifdef __cplusplus
}
#endif

#endif

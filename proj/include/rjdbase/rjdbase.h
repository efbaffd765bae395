#ifndef RJDBASE_H
#define RJDBASE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RJD_API __declspec(dllexport)
#else
#define RJD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rjd_status {
  RJD_OK = 0,
  RJD_INVALID_ARGUMENT = 1,
  RJD_NON_FINITE,
  RJD_COUNT_EXCEEDS_DIM,
  RJD_DIMENSION_MISMATCH,
  RJD_NON_POSITIVE_SIGMA,
  RJD_DEGENERATE_BANDWIDTH,
  RJD_ISOLATED_NODE,
  RJD_UNKNOWN_RECIPE,
  RJD_EMPTY_CLUSTER,
  RJD_ZERO_MODE_AMBIGUITY,
  RJD_NON_FINITE_OBJECTIVE,
  RJD_NON_ORTHONORMAL_EMBEDDING,
  RJD_NON_ORTHOGONAL_INIT,
  RJD_EMPTY_CLUSTER_RESTART,
  RJD_ZERO_NORM_ROW,
  RJD_K_EXCEEDS_N,
  RJD_LENGTH_MISMATCH,
  RJD_ALL_TRIALS_FAILED,
  RJD_EIGEN_SOLVER_FAILURE,
  RJD_IO,
  RJD_PARSE,
  RJD_INTERNAL
} rjd_status;

typedef struct rjd_dataset rjd_dataset;
typedef struct rjd_result rjd_result;

RJD_API const char* rjd_version(void);
RJD_API const char* rjd_status_name(rjd_status status);

/* Process exit code for a status: 0 ok, 2 configuration, 3 data, 4 numerical. */
RJD_API int rjd_status_exit_code(rjd_status status);

/* Message of the last failure on the calling thread; empty if none. */
RJD_API const char* rjd_last_error_message(void);

/* Strings returned through char** out-parameters are freed with this. */
RJD_API void rjd_string_free(char* s);

/* Synthetic SBM dataset from a JSON config (empty object = standard preset, seed 0). */
RJD_API rjd_status rjd_dataset_synth(const char* config_json, rjd_dataset** out);
/* Directory with affinity_<i>.bin or features_<i>.csv|.bin, optional labels.csv. */
RJD_API rjd_status rjd_dataset_load(const char* dir, int nn_index, rjd_dataset** out);
RJD_API rjd_status rjd_dataset_save(const rjd_dataset* data, const char* dir);
RJD_API rjd_status rjd_dataset_info_json(const rjd_dataset* data, char** out_json);
RJD_API rjd_status rjd_dataset_shape(const rjd_dataset* data, size_t* nodes, size_t* modalities);
/* Copies ground truth into labels[0..capacity); RJD_INVALID_ARGUMENT if absent. */
RJD_API rjd_status rjd_dataset_labels(const rjd_dataset* data, int* labels, size_t capacity,
                                      size_t* count);
RJD_API void rjd_dataset_free(rjd_dataset* data);

/* Runs one method; method_json holds the method name and its parameters. */
RJD_API rjd_status rjd_run(const rjd_dataset* data, const char* method_json, rjd_result** out);
/* data may be NULL when the sweep regenerates the dataset per seed. */
RJD_API rjd_status rjd_sweep(const rjd_dataset* data, const char* sweep_json, rjd_result** out);
RJD_API rjd_status rjd_result_report_json(const rjd_result* result, char** out_json);
RJD_API rjd_status rjd_result_labels(const rjd_result* result, int* labels, size_t capacity,
                                     size_t* count);
/* Writes report.json plus every CSV artifact into dir. */
RJD_API rjd_status rjd_result_write(const rjd_result* result, const char* dir);
RJD_API void rjd_result_free(rjd_result* result);

RJD_API rjd_status rjd_nmi(const int* a, const int* b, size_t n, double* out);
RJD_API rjd_status rjd_project_simplex(const double* v, size_t m, double* out);

#ifdef __cplusplus
}
#endif

#endif

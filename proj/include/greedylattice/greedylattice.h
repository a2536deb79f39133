#ifndef GREEDYLATTICE_H
#define GREEDYLATTICE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GLP_BUILDING_LIBRARY)
#    define GLP_API __declspec(dllexport)
#  else
#    define GLP_API __declspec(dllimport)
#  endif
#else
#  define GLP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. GLP_OK is zero; every other value names the failure. */
typedef enum glp_status {
  GLP_OK = 0,
  GLP_INVALID_ARGUMENT = 1,
  GLP_NOT_ADJACENT = 2,
  GLP_NOT_SELF_AVOIDING = 3,
  GLP_RESOURCE_BOUND = 4,
  GLP_INFINITE_MOMENT = 5,
  GLP_EMPTY_CONDITIONING_EVENT = 6,
  GLP_DEGENERATE_TAIL = 7,
  GLP_INVALID_P = 8,
  GLP_TRUNCATION_BIAS_TOO_LARGE = 9,
  GLP_UNKNOWN_CHECK = 10,
  GLP_PARSE_ERROR = 11,
  GLP_IO_ERROR = 12,
  GLP_BUDGET_EXCEEDED = 13,
  GLP_INTERNAL_ERROR = 99
} glp_status;

typedef struct glp_field glp_field;
typedef struct glp_solution glp_solution;

GLP_API const char* glp_version(void);
GLP_API const char* glp_status_name(glp_status status);
/* Message of the last failed call on this thread; empty if none. */
GLP_API const char* glp_last_error(void);
/* Frees strings returned through char** out-parameters. */
GLP_API void glp_string_free(char* s);

/* Distributions are written "family:p1,p2,..." e.g. "gaussian:0,1". */
GLP_API glp_status glp_distribution_canonical(const char* dist, char** out);
GLP_API glp_status glp_distribution_mean(const char* dist, double* out);
GLP_API glp_status glp_tail_prob(const char* dist, double m, double* out);
GLP_API glp_status glp_overshoot_mean(const char* dist, double m, double* out);
GLP_API glp_status glp_hypothesis_report(const char* dist, int d, double alpha, char** json_out);

/* Weight fields. m < 0 or m = +inf means no truncation wherever m appears. */
GLP_API glp_status glp_field_create(const char* dist, int d, uint64_t seed, glp_field** out);
GLP_API void glp_field_destroy(glp_field* field);
GLP_API glp_status glp_field_sample(glp_field* field, const int32_t* coords, double* out);

/* Exact solve. When the node budget runs out the solution is still returned
   (a lower bound, exact = 0) together with GLP_BUDGET_EXCEEDED. */
GLP_API glp_status glp_solve(glp_field* field, int n, double m, uint64_t node_budget, size_t warm_start_width,
                             glp_solution** out);
GLP_API glp_status glp_beam_search(glp_field* field, int n, double m, size_t width, glp_solution** out);
GLP_API void glp_solution_destroy(glp_solution* solution);
GLP_API double glp_solution_value(const glp_solution* solution);
GLP_API int glp_solution_length(const glp_solution* solution);
GLP_API int glp_solution_dimension(const glp_solution* solution);
/* Copies length * dimension coordinates, vertex by vertex. */
GLP_API glp_status glp_solution_path(const glp_solution* solution, int32_t* coords, size_t capacity);
GLP_API uint64_t glp_solution_nodes_expanded(const glp_solution* solution);
GLP_API uint64_t glp_solution_nodes_pruned(const glp_solution* solution);
GLP_API int glp_solution_exact(const glp_solution* solution);
/* N_n(m) and the defect along the returned path, with the solve's truncation. */
GLP_API size_t glp_solution_n_below(const glp_solution* solution);
GLP_API double glp_solution_defect(const glp_solution* solution);

/* Monte Carlo. */
typedef struct glp_run_options {
  unsigned threads;
  uint64_t node_budget;
  size_t warm_start_width;
  uint64_t stream;
} glp_run_options;

GLP_API void glp_run_options_default(glp_run_options* options);

typedef struct glp_replica {
  double value;
  int exact;
  uint64_t n_below;
  double defect;
} glp_replica;

typedef struct glp_estimate_row {
  int n;
  double m; /* +inf when untruncated */
  uint64_t replicas;
  double mean;
  double stderr_;
  double ci_low;
  double ci_high;
  double exact_fraction;
} glp_estimate_row;

/* Replicas [first, first + count) of one (n, m) cell; out holds count entries. */
GLP_API glp_status glp_solve_replicas(const char* dist, int d, int n, double m, uint64_t first, uint64_t count,
                                      uint64_t seed, const glp_run_options* options, glp_replica* out);
GLP_API glp_status glp_summarize(int n, double m, const glp_replica* replicas, size_t count, glp_estimate_row* out);
/* Truncated constants and the limit estimate from summary rows (any order).
   target_precision <= 0 disables the bias check. */
GLP_API glp_status glp_limit_estimate(const char* dist, const glp_estimate_row* rows, size_t count,
                                      double target_precision, char** json_out);

/* Verification. params_json is a JSON object (or NULL). The report is a JSON
   array with one object per check run; passed is 1 iff all of them pass. */
GLP_API glp_status glp_verify(const char* check, const char* params_json, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif

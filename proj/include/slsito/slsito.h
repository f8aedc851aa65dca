/* C interface to the slsito library. All functions are thread-safe with
 * respect to distinct handles. Strings returned by the library stay valid
 * until the owning handle is destroyed (or for the life of the process for
 * catalog data and error messages of the calling thread until its next call). */
#ifndef SLSITO_SLSITO_H
#define SLSITO_SLSITO_H

#include <stddef.h>

#if defined(SLSITO_BUILDING_LIBRARY)
#define SLSITO_API __attribute__((visibility("default")))
#else
#define SLSITO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slsito_status {
  SLSITO_OK = 0,
  SLSITO_INVALID_ARGUMENT = 1,
  SLSITO_CONFIGURATION_ERROR = 2,
  SLSITO_EVALUATION_ERROR = 3,
  SLSITO_OUT_OF_MEMORY = 4,
  SLSITO_BUFFER_TOO_SMALL = 5,
  SLSITO_INTERNAL_ERROR = 6
} slsito_status;

typedef struct slsito_config slsito_config;
typedef struct slsito_summary slsito_summary;

typedef struct slsito_moments {
  size_t count;
  double mean;
  double se;
  double median;
  double mad;
} slsito_moments;

typedef struct slsito_isometry {
  size_t n_paths;
  double lhs;
  double se_lhs;
  double rhs;
  double se_rhs;
  double z;
} slsito_isometry;

typedef struct slsito_level_info {
  size_t level;
  size_t steps;
  double spacing;
  double eps;
  size_t n_paths;
  size_t excluded;
} slsito_level_info;

typedef struct slsito_check {
  const char* name;
  double value;
  double threshold;
  int pass;
} slsito_check;

typedef struct slsito_convergence_row {
  size_t level;
  size_t steps;
  double spacing;
  double median_abs_residual;
  double decay; /* NaN when not applicable */
} slsito_convergence_row;

typedef struct slsito_catalog_info {
  const char* id;
  const char* description;
  const char* formulas; /* comma separated */
  int has_second_order;
  int has_split;
  int has_curve;
  int has_one_dimensional;
} slsito_catalog_info;

SLSITO_API const char* slsito_version(void);
/* Message for the last failed call on this thread; empty when none. */
SLSITO_API const char* slsito_last_error(void);
SLSITO_API const char* slsito_status_string(slsito_status status);

SLSITO_API slsito_status slsito_config_create(slsito_config** out);
SLSITO_API void slsito_config_destroy(slsito_config* config);
SLSITO_API slsito_status slsito_config_load(slsito_config* config, const char* path);
SLSITO_API slsito_status slsito_config_set(slsito_config* config, const char* key, const char* value);
/* Copies the value with its terminator; *needed receives the full size. */
SLSITO_API slsito_status slsito_config_get(const slsito_config* config, const char* key, char* buffer,
                                           size_t capacity, size_t* needed);
SLSITO_API slsito_status slsito_config_dump(const slsito_config* config, char* buffer, size_t capacity,
                                            size_t* needed);
SLSITO_API slsito_status slsito_config_validate(const slsito_config* config);

SLSITO_API slsito_status slsito_run(const slsito_config* config, slsito_summary** out);
SLSITO_API void slsito_summary_destroy(slsito_summary* summary);
SLSITO_API int slsito_summary_passed(const slsito_summary* summary);
SLSITO_API size_t slsito_summary_level_count(const slsito_summary* summary);
SLSITO_API slsito_status slsito_summary_level(const slsito_summary* summary, size_t level, slsito_level_info* out);
SLSITO_API slsito_status slsito_summary_column_count(const slsito_summary* summary, size_t level, size_t* out);
SLSITO_API slsito_status slsito_summary_column_name(const slsito_summary* summary, size_t level, size_t index,
                                                    const char** out);
SLSITO_API slsito_status slsito_summary_stat(const slsito_summary* summary, size_t level, const char* column,
                                             slsito_moments* out);
/* SLSITO_INVALID_ARGUMENT when the level carries no isometry report. */
SLSITO_API slsito_status slsito_summary_isometry(const slsito_summary* summary, size_t level,
                                                 slsito_isometry* out);
SLSITO_API size_t slsito_summary_check_count(const slsito_summary* summary);
SLSITO_API slsito_status slsito_summary_check(const slsito_summary* summary, size_t index, slsito_check* out);
SLSITO_API size_t slsito_summary_convergence_count(const slsito_summary* summary);
SLSITO_API slsito_status slsito_summary_convergence(const slsito_summary* summary, size_t index,
                                                    slsito_convergence_row* out);

SLSITO_API size_t slsito_catalog_size(void);
SLSITO_API slsito_status slsito_catalog_entry(size_t index, slsito_catalog_info* out);
SLSITO_API size_t slsito_isometry_pair_count(void);
SLSITO_API slsito_status slsito_isometry_pair(size_t index, const char** id, const char** description);

/* Mollifier normalization constant c and n rho(n x). */
SLSITO_API double slsito_mollifier_constant(void);
SLSITO_API slsito_status slsito_mollifier_value(double n, double x, double* out);

#ifdef __cplusplus
}
#endif

#endif

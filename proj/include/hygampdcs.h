/* C interface for the joint activity-detection / channel-estimation library.
 *
 * All objects are opaque; every entry point returns a status code.  On
 * failure, hyg_last_error() returns a description of the most recent error in
 * the calling thread.
 */
#ifndef HYGAMPDCS_H
#define HYGAMPDCS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hyg_config_s hyg_config;
typedef struct hyg_result_s hyg_result;

typedef enum {
  HYG_OK = 0,
  HYG_ERROR_CONFIG = 2,       /* bad config file, key or value */
  HYG_ERROR_ALL_DIVERGED = 3, /* every requested trial diverged */
  HYG_ERROR_INVALID_ARGUMENT = 4,
  HYG_ERROR_RUNTIME = 5
} hyg_status;

const char* hyg_version(void);

/* Thread-local message for the last failure in this thread; never NULL. */
const char* hyg_last_error(void);

/* Parses a JSON config.  On success stores a new handle in *out. */
hyg_status hyg_config_parse(const char* json_text, hyg_config** out);
hyg_status hyg_config_load(const char* path, hyg_config** out);

/* Overrides one setting.  Keys: "seed", "trials", "threads", "algo". */
hyg_status hyg_config_override(hyg_config* cfg, const char* key,
                               const char* value);

void hyg_config_free(hyg_config* cfg);

/* Monte Carlo trials of the configured cell.  CSV has one row per
 * (trial, algorithm); the summary aggregates per algorithm.  On
 * HYG_ERROR_ALL_DIVERGED a result is still produced. */
hyg_status hyg_run_simulate(const hyg_config* cfg, hyg_result** out);

/* Cross product of the sweep axes; CSV has one aggregate row per
 * (cell, algorithm).  Cells where every trial diverged carry NaN means and a
 * nonzero diverged count.  On HYG_ERROR_ALL_DIVERGED a result is still
 * produced. */
hyg_status hyg_run_sweep(const hyg_config* cfg, hyg_result** out);

/* State-evolution prediction for the configured cell; CSV has one row per
 * iteration. */
hyg_status hyg_run_se(const hyg_config* cfg, hyg_result** out);

/* Hyperparameter initialization for one synthesized instance. */
hyg_status hyg_run_em_init(const hyg_config* cfg, hyg_result** out);

/* Both strings are owned by the result handle. */
const char* hyg_result_csv(const hyg_result* res);
const char* hyg_result_summary(const hyg_result* res);

void hyg_result_free(hyg_result* res);

#ifdef __cplusplus
}
#endif

#endif /* HYGAMPDCS_H */

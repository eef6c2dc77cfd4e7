#ifndef DIREST_H
#define DIREST_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define DIREST_OK 0

/**
 * A pointer argument was null.
 */
#define DIREST_ERR_NULL_POINTER 1

/**
 * An argument was structurally or numerically invalid.
 */
#define DIREST_ERR_INVALID_ARGUMENT 2

/**
 * The requested model places no mass on any feasible event-space size.
 */
#define DIREST_ERR_INFEASIBLE 3

/**
 * The estimator declined the dataset (e.g. no coincidences).
 */
#define DIREST_ERR_UNSUPPORTED_DATA 4

/**
 * Opaque estimator configuration (hyperprior + quadrature settings).
 */
typedef struct DirestConfig DirestConfig;

/**
 * Opaque count vector.
 */
typedef struct DirestCounts DirestCounts;

/**
 * Opaque two-axis contingency table.
 */
typedef struct DirestTable DirestTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a count vector from `len` unsigned 64-bit counts. Zeros are
 * allowed and contribute to nothing but bookkeeping.
 *
 * # Safety
 *
 * `counts` must point to `len` readable `u64` values (or be null when
 * `len` is 0) and `out` must be a valid writable pointer.
 */
 int32_t direst_counts_new(const uint64_t *counts, uintptr_t len, struct DirestCounts **out);

/**
 * Release a count vector. Accepts null.
 *
 * # Safety
 *
 * The pointer must be null or one previously returned by
 * [`direst_counts_new`], not yet freed.
 */
 void direst_counts_free(struct DirestCounts *counts);

/**
 * Create a two-axis table from row-major counts of shape `rows` x `cols`.
 *
 * # Safety
 *
 * `counts` must point to `rows * cols` readable `u64` values and `out`
 * must be a valid writable pointer.
 */

int32_t direst_table_new(const uint64_t *counts,
                         uintptr_t rows,
                         uintptr_t cols,
                         struct DirestTable **out);

/**
 * Release a table. Accepts null.
 *
 * # Safety
 *
 * The pointer must be null or one previously returned by
 * [`direst_table_new`], not yet freed.
 */
 void direst_table_free(struct DirestTable *table);

/**
 * Create a configuration with a log-uniform concentration prior on
 * [c_min, c_max] and a uniform size prior on [M, m_max].
 *
 * # Safety
 *
 * `out` must be a valid writable pointer.
 */

int32_t direst_config_new_log_uniform(double c_min,
                                      double c_max,
                                      uintptr_t m_max,
                                      struct DirestConfig **out);

/**
 * Create a configuration with both hyperparameters fixed: a point-mass
 * concentration `c` and a point-mass event-space size `m`.
 *
 * # Safety
 *
 * `out` must be a valid writable pointer.
 */
 int32_t direst_config_new_fixed(double c, uintptr_t m, struct DirestConfig **out);

/**
 * Override the number of quadrature nodes used for the concentration
 * integral (default 200).
 *
 * # Safety
 *
 * `config` must be a live pointer from one of the config constructors.
 */
 int32_t direst_config_set_nodes(struct DirestConfig *config, uintptr_t nodes);

/**
 * Release a configuration. Accepts null.
 *
 * # Safety
 *
 * The pointer must be null or one previously returned by a config
 * constructor, not yet freed.
 */
 void direst_config_free(struct DirestConfig *config);

/**
 * Posterior mean entropy (nats) for fixed concentration `c` and event-space
 * size `m`.
 *
 * # Safety
 *
 * `counts` must be a live pointer from [`direst_counts_new`] and `out`
 * a valid writable pointer.
 */

int32_t direst_entropy_mean_fixed(const struct DirestCounts *counts,
                                  double c,
                                  uintptr_t m,
                                  double *out_mean);

/**
 * Posterior mean and variance of the entropy for fixed (c, m).
 *
 * # Safety
 *
 * `counts` must be a live pointer from [`direst_counts_new`];
 * `out_mean` and `out_variance` must be valid writable pointers.
 */

int32_t direst_entropy_variance_fixed(const struct DirestCounts *counts,
                                      double c,
                                      uintptr_t m,
                                      double *out_mean,
                                      double *out_variance);

/**
 * Posterior mean Tsallis entropy of index `q` for fixed (c, m).
 *
 * # Safety
 *
 * `counts` must be a live pointer from [`direst_counts_new`] and `out`
 * a valid writable pointer.
 */

int32_t direst_tsallis_mean_fixed(const struct DirestCounts *counts,
                                  double c,
                                  uintptr_t m,
                                  double q,
                                  double *out_mean);

/**
 * Fully marginalized posterior mean and variance of the entropy under the
 * hyperprior described by `config`.
 *
 * # Safety
 *
 * `counts` and `config` must be live pointers from their constructors;
 * `out_mean` and `out_variance` must be valid writable pointers.
 */

int32_t direst_entropy_moments(const struct DirestCounts *counts,
                               const struct DirestConfig *config,
                               double *out_mean,
                               double *out_variance);

/**
 * Posterior mean mutual information (nats) of a two-axis table at fixed
 * concentration `c`, with the axis sizes taken from the table shape.
 *
 * # Safety
 *
 * `table` must be a live pointer from [`direst_table_new`] and `out` a
 * valid writable pointer.
 */
 int32_t direst_mi_mean_fixed(const struct DirestTable *table, double c, double *out_mean);

/**
 * Human-readable name for a status code. Returns a static NUL-terminated
 * string; never null.
 */
 const char *direst_status_name(int32_t status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DIREST_H */

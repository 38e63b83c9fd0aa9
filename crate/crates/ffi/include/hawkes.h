#ifndef HAWKES_H
#define HAWKES_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HawkesAlgorithm {
  HAWKES_ALGORITHM_THINNING = 0,
  HAWKES_ALGORITHM_CLUSTER = 1,
  HAWKES_ALGORITHM_INVERSION = 2,
} HawkesAlgorithm;

/**
 * Result codes. Zero is success.
 */
typedef enum HawkesStatus {
  HAWKES_STATUS_OK = 0,
  HAWKES_STATUS_NULL_POINTER = 1,
  HAWKES_STATUS_INVALID_ARGUMENT = 2,
  HAWKES_STATUS_NON_STATIONARY = 3,
  HAWKES_STATUS_OUT_OF_WINDOW = 4,
  HAWKES_STATUS_INVALID_EVENTS = 5,
  HAWKES_STATUS_NOT_CONVERGED = 6,
  HAWKES_STATUS_BUFFER_TOO_SMALL = 7,
  HAWKES_STATUS_INTERNAL = 99,
} HawkesStatus;

/**
 * Opaque event sequence handle.
 */
typedef struct HawkesEventsHandle HawkesEventsHandle;

/**
 * Opaque model handle.
 */
typedef struct HawkesModelHandle HawkesModelHandle;

/**
 * Maximum likelihood estimate of the exponential-kernel model.
 */
typedef struct HawkesFit {
  double lambda;
  double alpha;
  double beta;
  double log_likelihood;
  double branching_ratio;
  bool converged;
  uint64_t iterations;
} HawkesFit;

/**
 * Scalar outcome of the residual test battery.
 */
typedef struct HawkesGofSummary {
  uint64_t events;
  double transformed_horizon;
  double ks_statistic;
  double ks_p_value;
  bool ks_accepted;
  double lewis_statistic;
  double lewis_p_value;
  bool lewis_accepted;
  double arcsine_m_star;
  bool arcsine_accepted;
  double endpoint_m1;
  bool endpoint_accepted;
} HawkesGofSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next failing call on this thread.
 */
const char *hawkes_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hawkes_version(void);

/**
 * Exponential kernel `alpha exp(-beta s)` with baseline `lambda`.
 */
enum HawkesStatus hawkes_model_new_exp(double lambda,
                                       double alpha,
                                       double beta,
                                       struct HawkesModelHandle **out);

/**
 * Power-law kernel `k / (c + s)^p` with baseline `lambda`.
 */
enum HawkesStatus hawkes_model_new_power_law(double lambda,
                                             double k,
                                             double c,
                                             double p,
                                             struct HawkesModelHandle **out);

/**
 * Releases a model. Null is ignored.
 */
void hawkes_model_free(struct HawkesModelHandle *model);

enum HawkesStatus hawkes_model_branching_ratio(const struct HawkesModelHandle *model, double *out);

/**
 * Copies `len` strictly increasing times in `(0, horizon]`.
 */
enum HawkesStatus hawkes_events_new(const double *times,
                                    size_t len,
                                    double horizon,
                                    struct HawkesEventsHandle **out);

/**
 * Releases an event sequence. Null is ignored.
 */
void hawkes_events_free(struct HawkesEventsHandle *events);

/**
 * Number of arrivals, or 0 for a null handle.
 */
size_t hawkes_events_len(const struct HawkesEventsHandle *events);

/**
 * Observation end, or NaN for a null handle.
 */
double hawkes_events_horizon(const struct HawkesEventsHandle *events);

/**
 * Copies the arrival times into `buf`.
 *
 * Returns `BUFFER_TOO_SMALL` when `capacity` is below the length, which
 * can be queried first with [`hawkes_events_len`].
 */
enum HawkesStatus hawkes_events_copy_times(const struct HawkesEventsHandle *events,
                                           double *buf,
                                           size_t capacity);

/**
 * One realisation on `[0, horizon]` from a seeded stream.
 *
 * `algorithm` is a `HawkesAlgorithm` value.
 */
enum HawkesStatus hawkes_simulate(const struct HawkesModelHandle *model,
                                  uint32_t algorithm,
                                  double horizon,
                                  uint64_t seed,
                                  struct HawkesEventsHandle **out);

enum HawkesStatus hawkes_log_likelihood(const struct HawkesModelHandle *model,
                                        const struct HawkesEventsHandle *events,
                                        double *out);

/**
 * Left-limit conditional intensity at `t`.
 */
enum HawkesStatus hawkes_intensity(const struct HawkesModelHandle *model,
                                   const struct HawkesEventsHandle *events,
                                   double t,
                                   double *out);

/**
 * Compensator at `t` in `[0, horizon]`.
 */
enum HawkesStatus hawkes_compensator(const struct HawkesModelHandle *model,
                                     const struct HawkesEventsHandle *events,
                                     double t,
                                     double *out);

/**
 * Multistart maximum likelihood fit.
 *
 * `out` is filled even when the optimiser did not converge; the status is
 * then `NOT_CONVERGED`.
 */
enum HawkesStatus hawkes_fit(const struct HawkesEventsHandle *events, struct HawkesFit *out);

/**
 * Residual analysis of `events` under `model` at significance `level`.
 */
enum HawkesStatus hawkes_gof(const struct HawkesModelHandle *model,
                             const struct HawkesEventsHandle *events,
                             double level,
                             bool durbin,
                             struct HawkesGofSummary *out);

/**
 * Covariance density at a non-zero lag.
 */
enum HawkesStatus hawkes_covariance_density(const struct HawkesModelHandle *model,
                                            double tau,
                                            double *out);

/**
 * Two-sided power spectral density at angular frequency `omega`.
 */
enum HawkesStatus hawkes_power_spectral_density(const struct HawkesModelHandle *model,
                                                double omega,
                                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAWKES_H */

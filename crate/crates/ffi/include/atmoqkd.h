#ifndef ATMOQKD_H
#define ATMOQKD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AtmoqkdStatus {
  ATMOQKD_STATUS_OK = 0,
  ATMOQKD_STATUS_NULL_POINTER = 1,
  ATMOQKD_STATUS_INVALID_ARGUMENT = 2,
  ATMOQKD_STATUS_DOMAIN = 3,
  ATMOQKD_STATUS_REGIME = 4,
  ATMOQKD_STATUS_NUMERIC = 5,
  ATMOQKD_STATUS_PANIC = 6,
  ATMOQKD_STATUS_OTHER = 7,
} AtmoqkdStatus;

typedef enum AtmoqkdDetector {
  ATMOQKD_DETECTOR_HOMODYNE = 0,
  ATMOQKD_DETECTOR_HETERODYNE = 1,
} AtmoqkdDetector;

// Opaque link: scenario plus Monte Carlo settings.
typedef struct AtmoqkdLink AtmoqkdLink;

// Transmittance statistics of one Monte Carlo run.
typedef struct AtmoqkdMoments {
  double mean_t;
  double mean_sqrt_t;
  double var_sqrt_t;
  double clamp_fraction;
  size_t n_samples;
} AtmoqkdMoments;

typedef struct AtmoqkdKeyRate {
  struct AtmoqkdMoments moments;
  double rytov_variance;
  // Beam-wander interruption probability.
  double interruption;
  // Phase-noise excess noise from arrival-time jitter, SNU.
  double eps_theta;
  double i_ab;
  double chi_be;
  // Rate without interruption, bits/pulse; may be negative.
  double k;
  // Rate including interruption, bits/pulse; may be negative.
  double k_atm;
} AtmoqkdKeyRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a link with the reference parameters of `season` ("spring",
// "summer", "autumn" or "winter") at `distance_m` metres.
//
// # Safety
// `season` must be a NUL-terminated string; `out` must be writable.
// Release the handle with [`atmoqkd_link_free`].
enum AtmoqkdStatus atmoqkd_link_new(const char *season,
                                    double distance_m,
                                    struct AtmoqkdLink **out);

// # Safety
// `link` must come from [`atmoqkd_link_new`] and not be used afterwards.
// Null is ignored.
void atmoqkd_link_free(struct AtmoqkdLink *link);

// # Safety
// `link` must be a live handle.
enum AtmoqkdStatus atmoqkd_link_set_distance(struct AtmoqkdLink *link, double distance_m);

// # Safety
// `link` must be a live handle.
enum AtmoqkdStatus atmoqkd_link_set_detector(struct AtmoqkdLink *link,
                                             enum AtmoqkdDetector detector);

// Fixed channel excess noise ε in SNU.
//
// # Safety
// `link` must be a live handle.
enum AtmoqkdStatus atmoqkd_link_set_excess_noise(struct AtmoqkdLink *link, double excess_noise);

// Monte Carlo settings. `workers` = 0 uses all cores; results do not
// depend on it.
//
// # Safety
// `link` must be a live handle.
enum AtmoqkdStatus atmoqkd_link_set_sampling(struct AtmoqkdLink *link,
                                             size_t samples,
                                             uint64_t seed,
                                             size_t workers);

// # Safety
// `link` must be a live handle; `out` must be writable.
enum AtmoqkdStatus atmoqkd_link_rytov_variance(const struct AtmoqkdLink *link, double *out);

// Samples the channel and evaluates the secret key rate.
//
// # Safety
// `link` must be a live handle; `out` must be writable.
enum AtmoqkdStatus atmoqkd_link_key_rate(const struct AtmoqkdLink *link,
                                         struct AtmoqkdKeyRate *out);

// Message of the last failed call on this thread, or null after a
// success. Valid until the next call on the same thread.
const char *atmoqkd_last_error_message(void);

// Static, NUL-terminated library version.
const char *atmoqkd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATMOQKD_H */

#ifndef MASSRATIO_H
#define MASSRATIO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum MrStatus {
  MR_STATUS_OK = 0,
  MR_STATUS_INVALID_PARAMETER = 1,
  MR_STATUS_DEGENERATE_RESOURCE = 2,
  MR_STATUS_NO_POSITIVE_SOLUTION = 3,
  MR_STATUS_NUMERICAL_FAILURE = 4,
  MR_STATUS_INSUFFICIENT_DATA = 5,
  MR_STATUS_IO = 6,
  MR_STATUS_NULL_POINTER = 7,
  MR_STATUS_PANIC = 8,
} MrStatus;

/**
 * Bessel function family for zero lookups.
 */
typedef enum MrBesselFamily {
  MR_BESSEL_FAMILY_J0 = 0,
  MR_BESSEL_FAMILY_J1 = 1,
} MrBesselFamily;

/**
 * Boundary condition at `r = 1`.
 */
typedef enum MrBoundary {
  MR_BOUNDARY_DIRICHLET = 0,
  MR_BOUNDARY_NEUMANN = 1,
} MrBoundary;

typedef enum MrFormat {
  MR_FORMAT_CSV = 0,
  MR_FORMAT_JSON = 1,
} MrFormat;

/**
 * Solution of one logistic problem.
 */
typedef struct MrSolution MrSolution;

/**
 * Records of one sweep, in descending `eps`.
 */
typedef struct MrSweep MrSweep;

/**
 * Plain copy of one sweep record. Missing values are NaN and `ok` is 0 for
 * failed records.
 */
typedef struct MrSweepRecord {
  uint32_t n;
  double eps;
  double d;
  double lambda1;
  double ratio;
  double lower_bound;
  double upper_bound;
  uint64_t grid_n;
  double wallclock_ms;
  int32_t ok;
} MrSweepRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t mr_last_error_message(char *buf, size_t len);

/**
 * `J_0(z)` for `0 <= z <= 50`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_bessel_j0(double z, double *out);

/**
 * `J_1(z)` for `0 <= z <= 50`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_bessel_j1(double z, double *out);

/**
 * The `k`-th positive zero (`1 <= k <= 8`).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_bessel_zero(enum MrBesselFamily family, uint32_t k, double *out);

/**
 * `λ_k` of the interval spike of width `eps`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_lambda_k_interval(double eps, uint32_t k, double *out);

/**
 * `λ_1` of the disc spike (`eps <= e^-2`).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_lambda1_ball2(double eps, double *out);

/**
 * `λ_1` of the spike in dimension `n` from the finite-volume discretization
 * with at least `intervals` grid intervals.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_lambda1_discrete(uint32_t n, double eps, uint64_t intervals, double *out);

/**
 * Writes 1 to `out` if `(c1, c2)` lies in the admissible region, else 0.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_region_contains(uint32_t n, double c1, double c2, int32_t *out);

/**
 * `c2 (n/e |log eps| + 1 - 2/e)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MrStatus mr_analytic_sub_ratio(uint32_t n, double eps, double c2, double *out);

/**
 * Solves `d Δu + u (m_eps - u) = 0` and stores a new handle in `out`.
 *
 * # Safety
 * `out` must be valid for writes. The handle must be released with
 * [`mr_solution_free`].
 */
enum MrStatus mr_solve_spike(uint32_t n,
                             double eps,
                             double d,
                             enum MrBoundary bc,
                             uint64_t intervals,
                             struct MrSolution **out);

/**
 * Number of grid nodes of a solution (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t mr_solution_len(const struct MrSolution *h);

/**
 * `∫u / ∫m` of a solution (NaN for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double mr_solution_ratio(const struct MrSolution *h);

/**
 * Solver iterations used (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint64_t mr_solution_iterations(const struct MrSolution *h);

/**
 * Copies the grid nodes into `buf`, which must hold
 * [`mr_solution_len`] values.
 *
 * # Safety
 * `h` must be a live handle and `buf` valid for `len` writes.
 */
enum MrStatus mr_solution_nodes(const struct MrSolution *h, double *buf, size_t len);

/**
 * Copies the nodal solution values into `buf`.
 *
 * # Safety
 * `h` must be a live handle and `buf` valid for `len` writes.
 */
enum MrStatus mr_solution_values(const struct MrSolution *h, double *buf, size_t len);

/**
 * Releases a solution handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void mr_solution_free(struct MrSolution *h);

/**
 * Interval sweep with `d = sqrt(eps)`.
 *
 * # Safety
 * `eps` must be valid for `count` reads and `out` for writes. Release the
 * handle with [`mr_sweep_free`].
 */
enum MrStatus mr_sweep_1d(const double *eps, size_t count, uint64_t grid_n, struct MrSweep **out);

/**
 * Ball sweep with `d = c1 / eps^(n-2)`.
 *
 * # Safety
 * As [`mr_sweep_1d`].
 */
enum MrStatus mr_sweep_nd(uint32_t n,
                          double c1,
                          double c2,
                          const double *eps,
                          size_t count,
                          uint64_t grid_n,
                          struct MrSweep **out);

/**
 * Number of records (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t mr_sweep_len(const struct MrSweep *h);

/**
 * Copies record `index` into `out`.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum MrStatus mr_sweep_record(const struct MrSweep *h, size_t index, struct MrSweepRecord *out);

/**
 * Writes the records to `path` as CSV or JSON.
 *
 * # Safety
 * `h` must be a live handle and `path` a NUL-terminated UTF-8 string.
 */
enum MrStatus mr_sweep_export(const struct MrSweep *h, const char *path, enum MrFormat format);

/**
 * Releases a sweep handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void mr_sweep_free(struct MrSweep *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MASSRATIO_H */

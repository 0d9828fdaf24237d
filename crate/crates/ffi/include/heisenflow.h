#ifndef HEISENFLOW_H
#define HEISENFLOW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_NULL_POINTER = 1,
  HF_STATUS_INVALID_PARAMETER = 2,
  HF_STATUS_INVALID_GRID = 3,
  HF_STATUS_KERNEL_KIND_MISMATCH = 4,
  HF_STATUS_SUPPORT_UNRESOLVED = 5,
  HF_STATUS_STABILITY_VIOLATION = 6,
  HF_STATUS_NO_TRIPLE_ROOT = 7,
  HF_STATUS_NON_CONVERGENCE = 8,
  HF_STATUS_WEIGHT_BLOWUP = 9,
  HF_STATUS_SOLVABILITY_VIOLATED = 10,
  HF_STATUS_RESOLUTION_TOO_COARSE = 11,
  HF_STATUS_BRACKET_VIOLATED = 12,
  HF_STATUS_OUTSIDE_CHART = 13,
  HF_STATUS_INTERPOLATION_OUT_OF_DOMAIN = 14,
  HF_STATUS_EXTINCT = 15,
  HF_STATUS_NO_ZERO_SET = 16,
  HF_STATUS_EMPTY_CURVE = 17,
  HF_STATUS_TOO_FEW_SAMPLES = 18,
  HF_STATUS_CONFIG = 19,
  HF_STATUS_IO = 20,
  HF_STATUS_BUFFER_TOO_SMALL = 21,
  HF_STATUS_INDEX_OUT_OF_RANGE = 22,
  HF_STATUS_CHARACTERISTIC_POINT = 23,
  HF_STATUS_PANIC = 99,
} HfStatus;

/**
 * Smoother selector.
 */
typedef enum HfKernelKind {
  /**
   * Heat semigroup for time `eps²`.
   */
  HF_KERNEL_KIND_HEAT = 0,
  /**
   * Compactly supported bump kernel with support parameter `support`.
   */
  HF_KERNEL_KIND_BUMP = 1,
} HfKernelKind;

/**
 * Opaque 3-D field.
 */
typedef struct HfField HfField;

/**
 * Opaque instanton profile together with the kernel it was computed for.
 */
typedef struct HfProfile HfProfile;

typedef struct HfEquilibria {
  double m_minus;
  double m_zero;
  double m_plus;
} HfEquilibria;

typedef struct HfKernel {
  enum HfKernelKind kind;
  double support;
} HfKernel;

/**
 * Box `[−half[a], half[a]]` with `dims[a]` nodes per axis.
 */
typedef struct HfGrid {
  double half[3];
  size_t dims[3];
} HfGrid;

typedef struct HfParams {
  double beta;
  double eps;
  double dt;
  double t_end;
  double forcing;
  struct HfKernel kernel;
} HfParams;

/**
 * Point `(x1, x2, θ)` of SE(2).
 */
typedef struct HfSe2Point {
  double x1;
  double x2;
  double theta;
} HfSe2Point;

/**
 * Coefficients of `a1 Y₁ + a2 Y₂ + a3 Y₃`.
 */
typedef struct HfSe2Coords {
  double a1;
  double a2;
  double a3;
} HfSe2Coords;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * NUL-terminated library version; the pointer stays valid forever.
 */
const char *hf_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`), and returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t hf_last_error_message(char *buf, size_t len);

/**
 * The three constant solutions of `m = tanh(β(m + a))`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum HfStatus hf_equilibria(double beta, double a, struct HfEquilibria *out);

/**
 * Computes the instanton for `kernel` at `beta`.
 *
 * # Safety
 * `out` must be null or valid for writes. The handle written there must be
 * released with [`hf_profile_free`].
 */
enum HfStatus hf_profile_new(struct HfKernel kernel, double beta, struct HfProfile **out);

/**
 * # Safety
 * `p` must be null or a handle from [`hf_profile_new`] not yet freed.
 */
void hf_profile_free(struct HfProfile *p);

/**
 * Number of nodes of the profile grid.
 *
 * # Safety
 * `p` must be null or a live profile handle; `out` null or writable.
 */
enum HfStatus hf_profile_len(const struct HfProfile *p, size_t *out);

/**
 * Copies the nodes `r` and values `m̄(r)` into two buffers of `len` entries.
 *
 * # Safety
 * `p` must be a live profile handle; `r` and `m` must each be null or point
 * to `len` writable doubles.
 */
enum HfStatus hf_profile_copy(const struct HfProfile *p, double *r, double *m, size_t len);

/**
 * Positive stable state `m_β` and the exit residual of the profile.
 *
 * # Safety
 * `p` must be a live profile handle; outputs null or writable.
 */
enum HfStatus hf_profile_info(const struct HfProfile *p, double *m_beta, double *residual);

/**
 * Mobility `θ` by quadrature with `moment_nodes` nodes per moment integral.
 *
 * # Safety
 * `p` must be a live profile handle; `out` null or writable.
 */
enum HfStatus hf_theta(const struct HfProfile *p, size_t moment_nodes, double *out);

/**
 * Initial field `m̄((‖x‖ − radius)/eps)` of a gauge ball.
 *
 * # Safety
 * `p` must be a live profile handle; `out` null or writable. The handle
 * written there must be released with [`hf_field_free`].
 */
enum HfStatus hf_field_new_ball(const struct HfProfile *p,
                                struct HfGrid grid,
                                double radius,
                                double eps,
                                struct HfField **out);

/**
 * # Safety
 * `f` must be null or a field handle not yet freed.
 */
void hf_field_free(struct HfField *f);

/**
 * Number of nodes of the field.
 *
 * # Safety
 * `f` must be a live field handle; `out` null or writable.
 */
enum HfStatus hf_field_len(const struct HfField *f, size_t *out);

/**
 * Copies the values, row-major with axis 3 fastest.
 *
 * # Safety
 * `f` must be a live field handle; `buf` must point to `len` writable doubles.
 */
enum HfStatus hf_field_copy(const struct HfField *f, double *buf, size_t len);

/**
 * Zero crossing along the positive `x1`-axis, or NaN if there is none.
 *
 * # Safety
 * `f` must be a live field handle; `out` null or writable.
 */
enum HfStatus hf_field_interface_radius(const struct HfField *f, double *out);

/**
 * Runs the scheme from `f` to `params.t_end` and returns the final field.
 *
 * # Safety
 * `f` must be a live field handle; `out` null or writable. The handle
 * written there must be released with [`hf_field_free`].
 */
enum HfStatus hf_evolve(const struct HfField *f, struct HfParams params, struct HfField **out);

/**
 * Time-one flow of `a` on SE(2) from `x0`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum HfStatus hf_se2_exp(struct HfSe2Point x0, struct HfSe2Coords a, struct HfSe2Point *out);

/**
 * Canonical coordinates of `y` around `x0`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum HfStatus hf_se2_log(struct HfSe2Point x0, struct HfSe2Point y, struct HfSe2Coords *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEISENFLOW_H */

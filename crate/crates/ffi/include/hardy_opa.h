#ifndef HARDY_OPA_H
#define HARDY_OPA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum HopaStatus {
  HOPA_STATUS_OK = 0,
  HOPA_STATUS_NULL_POINTER = 1,
  HOPA_STATUS_INVALID_ARGUMENT = 2,
  HOPA_STATUS_PARSE = 3,
  HOPA_STATUS_DEGENERATE = 4,
  HOPA_STATUS_NOT_APPLICABLE = 5,
  HOPA_STATUS_BUFFER_TOO_SMALL = 6,
  HOPA_STATUS_INTERNAL = 7,
  HOPA_STATUS_PANIC = 8,
} HopaStatus;

/**
 * An analytic function sampled on the boundary grid.
 */
typedef struct HopaFunction HopaFunction;

/**
 * The outcome of one approximant solve.
 */
typedef struct HopaResult HopaResult;

/**
 * Solver settings mirrored from the library defaults.
 */
typedef struct HopaSolverOptions {
  /**
   * Iteration budget of the Newton solver.
   */
  size_t max_iters;
  /**
   * Threshold on the maximum relative orthogonality residual.
   */
  double grad_tol;
  /**
   * Start from the `p = 2` solution instead of the zero polynomial.
   */
  bool warm_start;
} HopaSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *hopa_last_error_message(void);

/**
 * The library's default solver settings.
 */
struct HopaSolverOptions hopa_solver_options_default(void);

/**
 * Parses a function spec such as `poly:1,-0.5` or `blaschke:0.5,0.3i`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable handle slot.
 */
enum HopaStatus hopa_function_parse(const char *spec, size_t grid, struct HopaFunction **out);

/**
 * Builds the polynomial with Taylor coefficients `re[k] + i im[k]`.
 *
 * # Safety
 * `re` and `im` must hold `len` doubles; `out` must be a writable handle slot.
 */
enum HopaStatus hopa_function_poly(const double *re,
                                   const double *im,
                                   size_t len,
                                   size_t grid,
                                   struct HopaFunction **out);

/**
 * Builds the Blaschke product with zeros `re[k] + i im[k]`.
 *
 * # Safety
 * `re` and `im` must hold `len` doubles; `out` must be a writable handle slot.
 */
enum HopaStatus hopa_function_blaschke(const double *re,
                                       const double *im,
                                       size_t len,
                                       size_t grid,
                                       struct HopaFunction **out);

/**
 * Releases a function handle; null is ignored.
 *
 * # Safety
 * `f` must come from a `hopa_function_*` constructor and not be freed twice.
 */
void hopa_function_free(struct HopaFunction *f);

/**
 * Solves for the degree-`n` approximant of `f` in the `p`-norm.
 *
 * `opts` may be null for the defaults. A solve that stops before converging
 * still succeeds; query [`hopa_result_converged`].
 *
 * # Safety
 * `f` must be a live function handle and `out` a writable handle slot.
 */
enum HopaStatus hopa_solve(const struct HopaFunction *f,
                           size_t n,
                           double p,
                           const struct HopaSolverOptions *opts,
                           struct HopaResult **out);

/**
 * Releases a result handle; null is ignored.
 *
 * # Safety
 * `res` must come from [`hopa_solve`] and not be freed twice.
 */
void hopa_result_free(struct HopaResult *res);

/**
 * The requested degree `n`; the approximant has `n + 1` coefficients.
 *
 * # Safety
 * `res` must be a live result handle.
 */
size_t hopa_result_degree(const struct HopaResult *res);

/**
 * The residual `||q f - 1||_p`, or NaN for a null handle.
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
double hopa_result_residual(const struct HopaResult *res);

/**
 * The largest orthogonality residual over the monomial shifts, or NaN.
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
double hopa_result_max_orth_residual(const struct HopaResult *res);

/**
 * Whether the solver met its stopping criterion.
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
bool hopa_result_converged(const struct HopaResult *res);

/**
 * Newton iterations the solve used.
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
size_t hopa_result_iterations(const struct HopaResult *res);

/**
 * Copies the `n + 1` approximant coefficients into `re` and `im`.
 *
 * # Safety
 * `res` must be a live result handle; `re` and `im` must hold `len` doubles.
 */
enum HopaStatus hopa_result_coeffs(const struct HopaResult *res,
                                   double *re,
                                   double *im,
                                   size_t len);

/**
 * Writes the factorization `q(z) = a (z - w)` of a degree-1 approximant.
 *
 * Fails with [`HopaStatus::Degenerate`] when the approximant is constant.
 *
 * # Safety
 * `res` must be a live result handle; the four outputs must be writable.
 */
enum HopaStatus hopa_linear_factor(const struct HopaResult *res,
                                   double *a_re,
                                   double *a_im,
                                   double *w_re,
                                   double *w_im);

/**
 * Solves and audits `f`, returning the JSON document as a new string.
 *
 * Free the string with [`hopa_string_free`].
 *
 * # Safety
 * `f` must be a live function handle; `opts` may be null; `out` must be writable.
 */
enum HopaStatus hopa_audit_json(const struct HopaFunction *f,
                                size_t n,
                                double p,
                                const struct HopaSolverOptions *opts,
                                char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from [`hopa_audit_json`] and not be freed twice.
 */
void hopa_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARDY_OPA_H */

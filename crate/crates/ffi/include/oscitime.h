#ifndef OSCITIME_H
#define OSCITIME_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OscitimeMatrixKind {
  OSCITIME_MATRIX_KIND_PHASE = 0,
  OSCITIME_MATRIX_KIND_TIME = 1,
  OSCITIME_MATRIX_KIND_COMMUTATOR_CORRECT = 2,
  OSCITIME_MATRIX_KIND_COMMUTATOR_NAIVE = 3,
  OSCITIME_MATRIX_KIND_PARADOX_GAP = 4,
  OSCITIME_MATRIX_KIND_HERMITICITY_DEFECT = 5,
  OSCITIME_MATRIX_KIND_PERIODIC_DEFECT = 6,
} OscitimeMatrixKind;

typedef enum OscitimeOperator {
  OSCITIME_OPERATOR_HAMILTONIAN = 0,
  OSCITIME_OPERATOR_PHASE = 1,
  OSCITIME_OPERATOR_TIME = 2,
} OscitimeOperator;

typedef enum OscitimeStatus {
  OSCITIME_STATUS_OK = 0,
  OSCITIME_STATUS_NULL_POINTER = 1,
  OSCITIME_STATUS_INVALID_ARGUMENT = 2,
  OSCITIME_STATUS_BOUND_OVERFLOW = 3,
  OSCITIME_STATUS_WINDOW_TOO_LARGE = 4,
  OSCITIME_STATUS_INCONSISTENCY = 5,
  OSCITIME_STATUS_PANIC = 6,
} OscitimeStatus;

typedef enum OscitimeTarget {
  OSCITIME_TARGET_IHBAR_IDENTITY = 0,
  OSCITIME_TARGET_ZERO = 1,
} OscitimeTarget;

/**
 * Opaque phase-representation function handle.
 */
typedef struct OscitimeFunction OscitimeFunction;

/**
 * Opaque matrix handle.
 */
typedef struct OscitimeMatrix OscitimeMatrix;

/**
 * Inclusive range of quantum numbers. Negative n requires `allow_negative`.
 */
typedef struct OscitimeWindow {
  int64_t n_min;
  int64_t n_max;
  bool allow_negative;
} OscitimeWindow;

typedef struct OscitimeConstants {
  double hbar;
  double omega;
} OscitimeConstants;

typedef struct OscitimeResidual {
  double max_abs;
  double frobenius;
  int64_t worst_m;
  int64_t worst_n;
} OscitimeResidual;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *oscitime_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *oscitime_version(void);

/**
 * Builds one of the Fock-window matrices. The phase matrix does not depend
 * on the constants, but they are still validated.
 *
 * # Safety
 * `window` and `constants` must point to valid structs; `out` must be valid
 * for a pointer write. The returned handle is freed with [`oscitime_matrix_free`].
 */
enum OscitimeStatus oscitime_matrix_build(enum OscitimeMatrixKind kind,
                                          const struct OscitimeWindow *window_spec,
                                          const struct OscitimeConstants *constants_spec,
                                          struct OscitimeMatrix **out);

/**
 * Number of rows (= columns); 0 for NULL.
 *
 * # Safety
 * `matrix` must be NULL or a live handle.
 */
size_t oscitime_matrix_dim(const struct OscitimeMatrix *matrix);

/**
 * Writes the matrix window.
 *
 * # Safety
 * `matrix` must be a live handle and `out` valid for writes.
 */
enum OscitimeStatus oscitime_matrix_window(const struct OscitimeMatrix *matrix,
                                           struct OscitimeWindow *out);

/**
 * ⟨m|A|n⟩ by quantum numbers.
 *
 * # Safety
 * `matrix` must be a live handle; `re` and `im` valid for writes.
 */
enum OscitimeStatus oscitime_matrix_get(const struct OscitimeMatrix *matrix,
                                        int64_t m,
                                        int64_t n,
                                        double *re,
                                        double *im);

/**
 * Copies all entries row-major as interleaved (re, im) pairs. `len` is the
 * number of doubles available at `buffer` and must be at least 2·dim².
 *
 * # Safety
 * `matrix` must be a live handle and `buffer` valid for `len` writes.
 */
enum OscitimeStatus oscitime_matrix_copy_entries(const struct OscitimeMatrix *matrix,
                                                 double *buffer,
                                                 size_t len);

/**
 * Deviation of `matrix` from iħ·I or from zero.
 *
 * # Safety
 * `matrix` must be a live handle and `out` valid for writes.
 */
enum OscitimeStatus oscitime_matrix_residual(const struct OscitimeMatrix *matrix,
                                             enum OscitimeTarget target,
                                             struct OscitimeResidual *out);

/**
 * Serializes the matrix to JSON. Free the string with [`oscitime_string_free`].
 *
 * # Safety
 * `matrix` must be a live handle and `out` valid for a pointer write.
 */
enum OscitimeStatus oscitime_matrix_to_json(const struct OscitimeMatrix *matrix, char **out);

/**
 * # Safety
 * `matrix` must be NULL or a handle from this library that has not been freed.
 */
void oscitime_matrix_free(struct OscitimeMatrix *matrix);

/**
 * The Fock state e^{−inφ}/√(2π).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum OscitimeStatus oscitime_fock(int64_t n, struct OscitimeFunction **out);

/**
 * Parses a function from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for a pointer write.
 */
enum OscitimeStatus oscitime_function_from_json(const char *json, struct OscitimeFunction **out);

/**
 * Applies H, φ or χ and returns a new handle.
 *
 * # Safety
 * `function` must be a live handle, `constants_spec` valid, `out` valid for a pointer write.
 */
enum OscitimeStatus oscitime_function_apply(enum OscitimeOperator op,
                                            const struct OscitimeFunction *function,
                                            const struct OscitimeConstants *constants_spec,
                                            struct OscitimeFunction **out);

/**
 * Pointwise value f(φ).
 *
 * # Safety
 * `function` must be a live handle; `re` and `im` valid for writes.
 */
enum OscitimeStatus oscitime_function_evaluate(const struct OscitimeFunction *function,
                                               double phi,
                                               double *re,
                                               double *im);

/**
 * ⟨f|g⟩ over [0, 2π].
 *
 * # Safety
 * `f` and `g` must be live handles; `re` and `im` valid for writes.
 */
enum OscitimeStatus oscitime_inner_product(const struct OscitimeFunction *f,
                                           const struct OscitimeFunction *g,
                                           double *re,
                                           double *im);

/**
 * ⟨f|Hg⟩ − ⟨Hf|g⟩.
 *
 * # Safety
 * `f`, `g` must be live handles, `constants_spec` valid, `re` and `im` valid for writes.
 */
enum OscitimeStatus oscitime_hermiticity_defect(const struct OscitimeFunction *f,
                                                const struct OscitimeFunction *g,
                                                const struct OscitimeConstants *constants_spec,
                                                double *re,
                                                double *im);

/**
 * Serializes the function to JSON. Free the string with [`oscitime_string_free`].
 *
 * # Safety
 * `function` must be a live handle and `out` valid for a pointer write.
 */
enum OscitimeStatus oscitime_function_to_json(const struct OscitimeFunction *function, char **out);

/**
 * # Safety
 * `function` must be NULL or a handle from this library that has not been freed.
 */
void oscitime_function_free(struct OscitimeFunction *function);

/**
 * # Safety
 * `s` must be NULL or a string returned by one of the `_to_json` functions.
 */
void oscitime_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCITIME_H */

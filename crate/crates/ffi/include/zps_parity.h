#ifndef ZPS_PARITY_H
#define ZPS_PARITY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum ZpsStatus {
  ZPS_STATUS_OK = 0,
  ZPS_STATUS_NULL_POINTER = 1,
  ZPS_STATUS_INVALID_ARGUMENT = 2,
  ZPS_STATUS_PARSE = 3,
  ZPS_STATUS_SHAPE_MISMATCH = 4,
  ZPS_STATUS_RING_MISMATCH = 5,
  ZPS_STATUS_BUDGET_EXCEEDED = 6,
  ZPS_STATUS_INVALID_UTF8 = 7,
  ZPS_STATUS_PANIC = 8,
} ZpsStatus;

/**
 * Parity-check construction.
 */
typedef enum ZpsMethod {
  ZPS_METHOD_MINORS = 0,
  ZPS_METHOD_ITERATIVE = 1,
  ZPS_METHOD_BRUTEFORCE = 2,
} ZpsMethod;

/**
 * A matrix over `Z_{p^s}`.
 */
typedef struct ZpsMatrix ZpsMatrix;

/**
 * A standard-form generator matrix with its type and column permutation.
 */
typedef struct ZpsStandardForm ZpsStandardForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *zps_last_error_message(void);

/**
 * Builds a matrix from `nrows * ncols` row-major residues.
 *
 * # Safety
 * `data` must be valid for `nrows * ncols` reads (it may be null when that
 * product is zero); `out` must be valid for one write.
 */
enum ZpsStatus zps_matrix_new(uint64_t p,
                              uint32_t s,
                              size_t nrows,
                              size_t ncols,
                              const uint64_t *data,
                              struct ZpsMatrix **out);

/**
 * Parses the text matrix format (`p s nrows ncols` header, then rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum ZpsStatus zps_matrix_parse(const char *text, struct ZpsMatrix **out);

/**
 * # Safety
 * `m` is null or a handle from this library that has not been freed.
 */
void zps_matrix_free(struct ZpsMatrix *m);

/**
 * # Safety
 * `m` is null or a live handle.
 */
size_t zps_matrix_nrows(const struct ZpsMatrix *m);

/**
 * # Safety
 * `m` is null or a live handle.
 */
size_t zps_matrix_ncols(const struct ZpsMatrix *m);

/**
 * Copies the entries, row-major, into `buf` of length `len`, which must be
 * at least `nrows * ncols`.
 *
 * # Safety
 * `m` is a live handle; `buf` is valid for `len` writes.
 */
enum ZpsStatus zps_matrix_copy_data(const struct ZpsMatrix *m, uint64_t *buf, size_t len);

/**
 * Renders the matrix in the text format. Release with [`zps_string_free`].
 *
 * # Safety
 * `m` is a live handle; `out` is valid for one write.
 */
enum ZpsStatus zps_matrix_to_text(const struct ZpsMatrix *m, char **out);

/**
 * # Safety
 * `s` is null or a string returned by this library that has not been freed.
 */
void zps_string_free(char *s);

/**
 * Reduces the generators `g` to standard form.
 *
 * # Safety
 * `g` is a live handle; `out` is valid for one write.
 */
enum ZpsStatus zps_standard_form(const struct ZpsMatrix *g, struct ZpsStandardForm **out);

/**
 * # Safety
 * `sf` is null or a live handle.
 */
void zps_standard_form_free(struct ZpsStandardForm *sf);

/**
 * A copy of the standard-form matrix.
 *
 * # Safety
 * `sf` is a live handle; `out` is valid for one write.
 */
enum ZpsStatus zps_standard_form_matrix(const struct ZpsStandardForm *sf, struct ZpsMatrix **out);

/**
 * Writes `t_1, ..., t_s` into `types`, which must hold `s` values.
 *
 * # Safety
 * `sf` is a live handle; `types` is valid for `len` writes.
 */
enum ZpsStatus zps_standard_form_type(const struct ZpsStandardForm *sf, size_t *types, size_t len);

/**
 * Computes a parity-check matrix of the code. With `original_coords` the
 * result checks the matrix the standard form was computed from; otherwise
 * it checks the standard form itself. The brute-force method returns every
 * dual codeword.
 *
 * # Safety
 * `sf` is a live handle; `out` is valid for one write.
 */
enum ZpsStatus zps_parity_check(const struct ZpsStandardForm *sf,
                                enum ZpsMethod method,
                                bool original_coords,
                                struct ZpsMatrix **out);

/**
 * Checks `G H^T = 0`. On a nonzero product `*holds` is false and
 * `*row`, `*col` give the 1-based position of its first nonzero entry;
 * otherwise they are 0. `row` and `col` may be null.
 *
 * # Safety
 * `g` and `h` are live handles; `holds` is valid for one write; `row` and
 * `col` are null or valid for one write.
 */
enum ZpsStatus zps_verify(const struct ZpsMatrix *g,
                          const struct ZpsMatrix *h,
                          bool *holds,
                          size_t *row,
                          size_t *col);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZPS_PARITY_H */

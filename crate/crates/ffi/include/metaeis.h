#ifndef METAEIS_H
#define METAEIS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MetaeisStatus {
  METAEIS_STATUS_OK = 0,
  /**
   * Malformed or inadmissible input.
   */
  METAEIS_STATUS_INPUT = 1,
  /**
   * An internal consistency check failed.
   */
  METAEIS_STATUS_INVARIANT = 2,
  METAEIS_STATUS_NULL_POINTER = 3,
  METAEIS_STATUS_UTF8 = 4,
  METAEIS_STATUS_PANIC = 5,
} MetaeisStatus;

/**
 * A metaplectic datum `(G, n)`.
 */
typedef struct MetaeisDatum MetaeisDatum;

/**
 * The rank-one Hecke module for a fixed `n`.
 */
typedef struct MetaeisSl2 MetaeisSl2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *metaeis_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *metaeis_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void metaeis_string_free(char *s);

/**
 * Builds the datum for a Cartan label such as `"B3"` and `n >= 1`.
 *
 * # Safety
 * `label` must be a NUL-terminated string; `out` must be writable.
 */
enum MetaeisStatus metaeis_datum_new(const char *label, int64_t n, struct MetaeisDatum **out);

/**
 * # Safety
 * `d` must come from [`metaeis_datum_new`] and not have been freed already.
 */
void metaeis_datum_free(struct MetaeisDatum *d);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum MetaeisStatus metaeis_datum_rank(const struct MetaeisDatum *d, size_t *out);

/**
 * Writes the `rank * rank` row-major basis of the sharp sublattice, in
 * simple-coroot coordinates, into `buf` of length `len`.
 *
 * # Safety
 * `d` must be a live handle; `buf` must hold `len` values.
 */
enum MetaeisStatus metaeis_datum_lambda_sharp(const struct MetaeisDatum *d,
                                              int64_t *buf,
                                              size_t len);

/**
 * Whether `mu` (length `rank`) lies in the sharp sublattice.
 *
 * # Safety
 * `d` must be a live handle; `mu` must hold `len` values; `out` must be writable.
 */
enum MetaeisStatus metaeis_datum_in_sharp(const struct MetaeisDatum *d,
                                          const int64_t *mu,
                                          size_t len,
                                          bool *out);

/**
 * Dual group profile (type, cocenter, xi report) as a JSON object.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum MetaeisStatus metaeis_datum_profile_json(const struct MetaeisDatum *d, char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MetaeisStatus metaeis_sl2_new(int64_t n, struct MetaeisSl2 **out);

/**
 * # Safety
 * `s` must come from [`metaeis_sl2_new`] and not have been freed already.
 */
void metaeis_sl2_free(struct MetaeisSl2 *s);

/**
 * Applies the Hecke functor of the `m`-th irreducible to `cells`, given as
 * `"k:shift,k:shift,..."`. The result maps each cell index to a Laurent
 * polynomial `{"shift": multiplicity}`.
 *
 * # Safety
 * `s` must be a live handle; `cells` NUL-terminated; `out` writable.
 */
enum MetaeisStatus metaeis_sl2_hecke_json(const struct MetaeisSl2 *s,
                                          uint32_t m,
                                          const char *cells,
                                          char **out);

/**
 * Stalk of the IC sheaf of degree `d` on the stratum of degree `r > d`.
 *
 * # Safety
 * `s` must be a live handle; `out` writable.
 */
enum MetaeisStatus metaeis_sl2_stalk_json(const struct MetaeisSl2 *s,
                                          int64_t d,
                                          int64_t r,
                                          char **out);

/**
 * Runs the command line with `argv[0..argc]` (without the program name) and
 * hands back its stdout, stderr and exit code. The returned status reflects
 * only the call itself; command failures show up in `exit_code`.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; the out pointers must be writable.
 */
enum MetaeisStatus metaeis_run(size_t argc,
                               const char *const *argv,
                               int32_t *exit_code,
                               char **out_stdout,
                               char **out_stderr);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* METAEIS_H */

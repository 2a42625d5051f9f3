#ifndef KREIN_H
#define KREIN_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KreinStatus {
  KREIN_STATUS_OK = 0,
  /**
   * A verification ran and did not pass.
   */
  KREIN_STATUS_CHECK_FAILED = 1,
  /**
   * Malformed document, bad arguments or a degenerate form.
   */
  KREIN_STATUS_INVALID_INPUT = 2,
  KREIN_STATUS_NULL_POINTER = 3,
  /**
   * Output buffer shorter than required.
   */
  KREIN_STATUS_BUFFER_TOO_SMALL = 4,
  KREIN_STATUS_PANIC = 5,
} KreinStatus;

/**
 * A nondegenerate Hermitian form on `ℂⁿ` with its canonical fundamental
 * decomposition.
 */
typedef struct KreinSpace KreinSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *krein_last_error_message(void);

/**
 * Builds a Kreĭn space from an `n × n` Hermitian Gram matrix.
 *
 * # Safety
 * `gram` must point to `2 n²` doubles and `out` must be writable.
 */
enum KreinStatus krein_space_new(const double *gram, size_t n, double tol, struct KreinSpace **out);

/**
 * # Safety
 * `space` must come from [`krein_space_new`] and not be freed twice.
 */
void krein_space_free(struct KreinSpace *space);

/**
 * # Safety
 * `space` must be a live handle or null.
 */
size_t krein_space_dim(const struct KreinSpace *space);

/**
 * `(dim K₊, dim K₋)`.
 *
 * # Safety
 * `space` must be a live handle; `plus` and `minus` must be writable.
 */
enum KreinStatus krein_space_signature(const struct KreinSpace *space, size_t *plus, size_t *minus);

/**
 * Writes the canonical fundamental symmetry `J` (`2 n²` doubles).
 *
 * # Safety
 * `space` must be a live handle and `out` must hold `len` doubles.
 */
enum KreinStatus krein_space_fundamental_symmetry(const struct KreinSpace *space,
                                                  double *out,
                                                  size_t len);

/**
 * Kreĭn adjoint `T^# = G_dom⁻¹ T† G_cod` of `T: domain → codomain`, given
 * as a `dim(codomain) × dim(domain)` matrix; writes the
 * `dim(domain) × dim(codomain)` result.
 *
 * # Safety
 * Handles must be live, `t` must hold `2 dim(codomain) dim(domain)`
 * doubles and `out` must hold `len` doubles.
 */
enum KreinStatus krein_space_adjoint(const struct KreinSpace *domain,
                                     const struct KreinSpace *codomain,
                                     const double *t,
                                     double *out,
                                     size_t len);

/**
 * Runs one `kreinlab` command. `argv` excludes the program name. On
 * return `*report` holds the JSON report (free it with
 * [`krein_string_free`]) or null, and `*exit_code` holds the command line
 * exit status. The status is `OK`, `CHECK_FAILED` or `INVALID_INPUT`
 * accordingly.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `report` and
 * `exit_code` must be writable.
 */
enum KreinStatus krein_run_json(const char *const *argv,
                                size_t argc,
                                char **report,
                                int *exit_code);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void krein_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KREIN_H */

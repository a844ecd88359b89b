#ifndef TORLAB_H
#define TORLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TorlabStatus {
  TORLAB_STATUS_OK = 0,
  TORLAB_STATUS_NULL_POINTER = 1,
  TORLAB_STATUS_INVALID_INPUT = 2,
  TORLAB_STATUS_PRECISION_EXHAUSTED = 3,
  TORLAB_STATUS_BUDGET_EXHAUSTED = 4,
  TORLAB_STATUS_HYPOTHESIS_NOT_MET = 5,
  TORLAB_STATUS_SCALE_EXCEEDED = 6,
  TORLAB_STATUS_PANIC = 7,
} TorlabStatus;

// Opaque handle to a parsed real tuple.
typedef struct TorlabTuple TorlabTuple;

typedef struct TorlabBounds {
  // `0` when no witness exists.
  uint64_t theorem_t;
  uint64_t mu;
  uint64_t nu;
  uint64_t corollary_t;
  // `mn/(m+n) − 1` as a reduced fraction.
  int64_t conjecture_num;
  int64_t conjecture_den;
} TorlabBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *torlab_version(void);

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library.
const char *torlab_last_error(void);

// Parses a tuple, one expression per line (`#` comments allowed).
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum TorlabStatus torlab_tuple_parse(const char *text,
                                     uint32_t precision,
                                     struct TorlabTuple **out);

// # Safety
// `t` must be null or a handle from [`torlab_tuple_parse`] not yet freed.
void torlab_tuple_free(struct TorlabTuple *t);

// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum TorlabStatus torlab_tuple_len(const struct TorlabTuple *t, size_t *out);

// Minimal `|l·θ_I|` over `0 < |l| ≤ d`. Writes the minimiser to `l_out`
// (`len` entries) and the midpoint of `log|l·θ_I|` to `log_value`.
//
// # Safety
// `subset` and `l_out` must point to `len` elements; `log_value` must be valid.
enum TorlabStatus torlab_linear_form_min(const struct TorlabTuple *t,
                                         const size_t *subset,
                                         size_t len,
                                         uint64_t d,
                                         uint64_t budget,
                                         int64_t *l_out,
                                         double *log_value);

// Integer-relation search; the outcome is written as JSON.
//
// # Safety
// `t` must be a live handle and `json_out` a valid pointer.
enum TorlabStatus torlab_relation_json(const struct TorlabTuple *t,
                                       uint64_t height,
                                       bool include_pi,
                                       uint64_t budget,
                                       char **json_out);

// Parameter schedule for `(D, k, μ, ν)` as JSON.
//
// # Safety
// `json_out` must be a valid pointer.
enum TorlabStatus torlab_schedule_json(uint64_t d,
                                       uint32_t k,
                                       uint32_t mu,
                                       uint32_t nu,
                                       char **json_out);

// # Safety
// `out` must be a valid pointer.
enum TorlabStatus torlab_bounds(uint64_t m,
                                uint64_t n,
                                bool literal_kappa,
                                struct TorlabBounds *out);

// Smith normal form diagonal of a row-major `rows × cols` matrix. Writes
// `min(rows, cols)` invariant factors to `diag_out` and the rank to
// `rank_out`.
//
// # Safety
// `a` must point to `rows·cols` elements, `diag_out` to `min(rows, cols)`.
enum TorlabStatus torlab_snf_diagonal(const int64_t *a,
                                      size_t rows,
                                      size_t cols,
                                      int64_t *diag_out,
                                      size_t *rank_out);

// Runs an experiment described by a JSON `ExperimentConfig` and returns the
// sorted JSON-lines records. `exit_code` receives the CLI exit code; records
// completed before a failure are still returned.
//
// # Safety
// `config_json` must be a valid string; `records_out` and `exit_code` valid pointers.
enum TorlabStatus torlab_run_json(const char *config_json, char **records_out, int32_t *exit_code);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void torlab_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TORLAB_H */

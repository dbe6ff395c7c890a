#ifndef QUADCONE_H
#define QUADCONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QC_OK 0

#define QC_DEGENERATE 2

#define QC_VERIFICATION 3

#define QC_SCHEMA 4

#define QC_NO_SLICE 5

#define QC_NULL 10

#define QC_INVALID 11

#define QC_PANIC 12

/**
 * Verdict kinds written by [`qc_decide`].
 */
#define QC_VERDICT_DEGENERATE 0

#define QC_VERDICT_ONE_SIDED 1

#define QC_VERDICT_TWO_SIDED 2

/**
 * Sub-commands reachable through [`qc_report_json`].
 */
typedef enum QcCommand {
  QC_COMMAND_CLASSIFY = 0,
  QC_COMMAND_DECIDE = 1,
  QC_COMMAND_VERIFY = 2,
  QC_COMMAND_SLICE = 3,
} QcCommand;

/**
 * Opaque cone handle.
 */
typedef struct QcCone QcCone;

/**
 * Opaque handle to an n = 2 normal form.
 */
typedef struct QcNormalForm QcNormalForm;

/**
 * Parameters for [`qc_decide`] and [`qc_report_json`]. Zeroed fields
 * take the library defaults.
 */
typedef struct QcSettings {
  uint64_t seed;
  size_t samples;
  size_t budget;
} QcSettings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qc_version(void);

/**
 * Message of the last failed call on this thread (empty if none). Valid
 * until the next failing call on the same thread.
 */
const char *qc_last_error(void);

/**
 * Builds a cone from row-major coefficient matrices. Null `re`/`im`
 * arrays are read as zero. `S` is symmetrized and `H` hermitized.
 *
 * # Safety
 * Non-null arrays must hold `n * n` doubles; `out` must be writable.
 */
int32_t qc_cone_new(size_t n,
                    const double *s_re,
                    const double *s_im,
                    const double *h_re,
                    const double *h_im,
                    struct QcCone **out);

/**
 * Parses a cone from the CLI's JSON input format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
int32_t qc_cone_from_json(const char *json, struct QcCone **out);

/**
 * # Safety
 * `cone` must come from this library and not be freed twice.
 */
void qc_cone_free(struct QcCone *cone);

/**
 * Complex dimension of the cone, 0 for a null handle.
 *
 * # Safety
 * `cone` must be null or a live handle.
 */
size_t qc_cone_dim(const struct QcCone *cone);

/**
 * Evaluates ρ at `z = re + i·im`, both of length `len` (must equal n).
 *
 * # Safety
 * `re` and `im` must hold `len` doubles; `value` must be writable.
 */
int32_t qc_cone_evaluate(const struct QcCone *cone,
                         const double *re,
                         const double *im,
                         size_t len,
                         double *value);

/**
 * Hermitian signature `(positive, negative)` of the cone.
 *
 * # Safety
 * Output pointers must be writable.
 */
int32_t qc_cone_signatures(const struct QcCone *cone, size_t *positive, size_t *negative);

/**
 * Classifies an n = 2 cone. Returns `QC_DEGENERATE` (with the reason in
 * [`qc_last_error`]) when the cone has no normal form.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t qc_classify(const struct QcCone *cone, struct QcNormalForm **out);

/**
 * Tag of the normal form (`"M20"`, …), valid while `nf` lives.
 *
 * # Safety
 * `nf` must be null or a live handle.
 */
const char *qc_normal_form_tag(const struct QcNormalForm *nf);

/**
 * Copies up to `cap` parameters into `re`/`im` and stores the full count
 * in `len`.
 *
 * # Safety
 * `re` and `im` must hold `cap` doubles (may be null when `cap` is 0).
 */
int32_t qc_normal_form_params(const struct QcNormalForm *nf,
                              double *re,
                              double *im,
                              size_t cap,
                              size_t *len);

/**
 * The 2×2 change of variables `T` (row-major), the positive scale λ and
 * the sign with `ρ(Tw) = sign·λ·N(w)`.
 *
 * # Safety
 * `re` and `im` must hold 4 doubles; the other outputs may be null.
 */
int32_t qc_normal_form_transform(const struct QcNormalForm *nf,
                                 double *re,
                                 double *im,
                                 double *lambda,
                                 int32_t *sign);

/**
 * # Safety
 * `nf` must come from [`qc_classify`] and not be freed twice.
 */
void qc_normal_form_free(struct QcNormalForm *nf);

/**
 * Decides one-sided or two-sided extension and verifies the answer by
 * sampling. `verdict` gets a `QC_VERDICT_*` value and `side` +1 / −1 for
 * one-sided verdicts (0 otherwise). The return code matches the CLI exit
 * code. `opts` may be null.
 *
 * # Safety
 * `verdict` and `side` must be writable.
 */
int32_t qc_decide(const struct QcCone *cone,
                  const struct QcSettings *opts,
                  int32_t *verdict,
                  int32_t *side);

/**
 * Runs a CLI sub-command and hands back its JSON report (free with
 * [`qc_string_free`]). The return code matches the CLI exit code.
 *
 * # Safety
 * `out` must be writable; `opts` may be null.
 */
int32_t qc_report_json(const struct QcCone *cone,
                       enum QcCommand command,
                       const struct QcSettings *opts,
                       char **out);

/**
 * # Safety
 * `s` must come from [`qc_report_json`] and not be freed twice.
 */
void qc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADCONE_H */

#ifndef MZPOVM_H
#define MZPOVM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MzpStatus {
  MZP_STATUS_OK = 0,
  MZP_STATUS_NULL_POINTER = 1,
  MZP_STATUS_INVALID_ARGUMENT = 2,
  MZP_STATUS_OUT_OF_RANGE = 3,
  MZP_STATUS_UNSUPPORTED = 4,
  MZP_STATUS_INVALID_POVM = 5,
  MZP_STATUS_BUFFER_TOO_SMALL = 6,
  MZP_STATUS_INTERNAL = 7,
} MzpStatus;

typedef enum MzpExperiment {
  MZP_EXPERIMENT_PATH = 0,
  MZP_EXPERIMENT_INTERFERENCE = 1,
  MZP_EXPERIMENT_MARKING = 2,
  MZP_EXPERIMENT_ERASURE = 3,
  MZP_EXPERIMENT_QUANTITATIVE = 4,
} MzpExperiment;

typedef enum MzpPovmKind {
  MZP_POVM_KIND_SHARP = 0,
  MZP_POVM_KIND_UNSHARP = 1,
  MZP_POVM_KIND_TRIVIAL = 2,
} MzpPovmKind;

// Opaque POVM handle.
typedef struct MzpPovm MzpPovm;

// Experiment and angles in radians.
typedef struct MzpConfig {
  enum MzpExperiment experiment;
  double delta;
  double gamma;
  double theta;
} MzpConfig;

typedef struct MzpComplex {
  double re;
  double im;
} MzpComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *mzp_last_error(void);

// Extracts the POVM measured by the experiment's standard scheme.
//
// # Safety
// `config` must point to a valid `MzpConfig`; `out` must be writable.
enum MzpStatus mzp_extract(const struct MzpConfig *config, struct MzpPovm **out);

// Analytic joint POVM for the marking, erasure and quantitative experiments.
//
// # Safety
// `config` must point to a valid `MzpConfig`; `out` must be writable.
enum MzpStatus mzp_closed_form(const struct MzpConfig *config, struct MzpPovm **out);

// # Safety
// `povm` must be a live handle; `out` must be writable.
enum MzpStatus mzp_povm_len(const struct MzpPovm *povm, size_t *out);

// Writes effect `index` as four row-major entries.
//
// # Safety
// `povm` must be a live handle; `out` must have room for 4 values.
enum MzpStatus mzp_povm_effect(const struct MzpPovm *povm, size_t index, struct MzpComplex *out);

// Label of effect `index` as a NUL-terminated string owned by the handle.
//
// # Safety
// `povm` must be a live handle; `out` must be writable.
enum MzpStatus mzp_povm_label(const struct MzpPovm *povm, size_t index, const char **out);

// Outcome probabilities ⟨ψ|E_k|ψ⟩ for a normalized input, in effect order.
//
// # Safety
// `povm` must be a live handle; `psi` must hold 2 values; `out` must have
// room for `out_len` values.
enum MzpStatus mzp_povm_probabilities(const struct MzpPovm *povm,
                                      const struct MzpComplex *psi,
                                      double *out,
                                      size_t out_len);

// Checks the POVM axioms and classifies the POVM.
//
// # Safety
// `povm` must be a live handle; `kind` may be NULL.
enum MzpStatus mzp_povm_validate(const struct MzpPovm *povm, enum MzpPovmKind *kind);

// # Safety
// `povm` must be NULL or a handle not yet freed.
void mzp_povm_free(struct MzpPovm *povm);

// Path distinguishability D and optimal inference probability L for input
// `psi` marked by `p1`, `p2`.
//
// # Safety
// `psi`, `p1`, `p2` must each hold 2 values; `d` and `l` must be writable.
enum MzpStatus mzp_distinguishability(const struct MzpComplex *psi,
                                      const struct MzpComplex *p1,
                                      const struct MzpComplex *p2,
                                      double *d,
                                      double *l);

// JSON report identical to the command-line `run` output. Release the string
// with `mzp_string_free`.
//
// # Safety
// `config` must point to a valid `MzpConfig`; `psi` must hold 2 values;
// `out` must be writable.
enum MzpStatus mzp_run_report(const struct MzpConfig *config,
                              const struct MzpComplex *psi,
                              char **out);

// # Safety
// `s` must be NULL or a string returned by `mzp_run_report` not yet freed.
void mzp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MZPOVM_H */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef LSD_TOOLKIT_H
#define LSD_TOOLKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsdEntropyBase {
  LSD_ENTROPY_BASE_BITS = 0,
  LSD_ENTROPY_BASE_NATS = 1,
} LsdEntropyBase;

typedef enum LsdRankClass {
  LSD_RANK_CLASS_FULL = 0,
  LSD_RANK_CLASS_RANK3 = 1,
  LSD_RANK_CLASS_RANK2 = 2,
  LSD_RANK_CLASS_SEPARABLE = 3,
  LSD_RANK_CLASS_PURE = 4,
} LsdRankClass;

typedef enum LsdStatus {
  LSD_STATUS_OK = 0,
  LSD_STATUS_NULL_POINTER = 1,
  // Input is not a valid density matrix (Hermitian, unit trace, PSD, finite).
  LSD_STATUS_INVALID_STATE = 2,
  // Malformed JSON or bad UTF-8.
  LSD_STATUS_PARSE_ERROR = 3,
  // Out-of-range arguments or parameters.
  LSD_STATUS_INVALID_ARGUMENT = 4,
  // The state has no entangled part.
  LSD_STATUS_NO_PURE_PART = 5,
  // A numerical kernel failed (rank mismatch, degenerate input, ...).
  LSD_STATUS_NUMERICAL = 6,
  // A Rust panic was caught.
  LSD_STATUS_PANIC = 7,
} LsdStatus;

// Opaque Lewenstein–Sanpera decomposition.
typedef struct LsdDecomposition LsdDecomposition;

// Opaque validated two-qubit density matrix.
typedef struct LsdDensityMatrix LsdDensityMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *lsd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *lsd_version(void);

// Validate a 4×4 matrix given as row-major real and imaginary parts.
//
// # Safety
// `re` and `im` must point to 16 doubles; `out` must be writable.
enum LsdStatus lsd_density_matrix_new(const double *re,
                                      const double *im,
                                      struct LsdDensityMatrix **out);

// Parse a state from the toolkit's JSON format.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum LsdStatus lsd_density_matrix_from_json(const char *json, struct LsdDensityMatrix **out);

// # Safety
// `rho` must come from this library and not be freed twice. Null is a no-op.
void lsd_density_matrix_free(struct LsdDensityMatrix *rho);

// Copy the matrix out as row-major real and imaginary parts.
//
// # Safety
// `re` and `im` must point to 16 writable doubles.
enum LsdStatus lsd_density_matrix_get(const struct LsdDensityMatrix *rho, double *re, double *im);

// # Safety
// `rho` must be a live handle; `out` must be writable.
enum LsdStatus lsd_concurrence(const struct LsdDensityMatrix *rho, double *out);

// Descending λ-spectrum into `out[4]`.
//
// # Safety
// `rho` must be a live handle; `out` must point to 4 writable doubles.
enum LsdStatus lsd_lambda_spectrum(const struct LsdDensityMatrix *rho, double *out);

// # Safety
// `rho` must be a live handle; `out` must be writable.
enum LsdStatus lsd_entanglement_of_formation(const struct LsdDensityMatrix *rho,
                                             enum LsdEntropyBase base,
                                             double *out);

// Peres–Horodecki test. `min_eigenvalue` may be null.
//
// # Safety
// `rho` must be a live handle; `separable` must be writable.
enum LsdStatus lsd_ppt_check(const struct LsdDensityMatrix *rho,
                             bool *separable,
                             double *min_eigenvalue);

// # Safety
// `rho` must be a live handle; `out` must be writable.
enum LsdStatus lsd_decompose(const struct LsdDensityMatrix *rho, struct LsdDecomposition **out);

// # Safety
// `d` must come from this library and not be freed twice. Null is a no-op.
void lsd_decomposition_free(struct LsdDecomposition *d);

// Separable weight λ.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
enum LsdStatus lsd_decomposition_weight(const struct LsdDecomposition *d, double *out);

// # Safety
// `d` must be a live handle; `out` must be writable.
enum LsdStatus lsd_decomposition_rank_class(const struct LsdDecomposition *d,
                                            enum LsdRankClass *out);

// The separable part as a new handle, owned by the caller.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
enum LsdStatus lsd_decomposition_separable(const struct LsdDecomposition *d,
                                           struct LsdDensityMatrix **out);

// The entangled pure part. Returns `LSD_STATUS_NO_PURE_PART` for separable
// input.
//
// # Safety
// `d` must be a live handle; `re` and `im` must point to 4 writable doubles.
enum LsdStatus lsd_decomposition_pure(const struct LsdDecomposition *d, double *re, double *im);

// Product vector |z_index⟩ of the separable part (index 0..3).
//
// # Safety
// `d` must be a live handle; `re` and `im` must point to 4 writable doubles.
enum LsdStatus lsd_decomposition_product_vector(const struct LsdDecomposition *d,
                                                size_t index,
                                                double *re,
                                                double *im);

// Check the optimality certificate of `d` for `rho`. `tol <= 0` uses the
// default tolerance ladder, otherwise `tol` applies to every check.
// `max_residual` may be null.
//
// # Safety
// Handles must be live; `verdict` must be writable.
enum LsdStatus lsd_verify_optimality(const struct LsdDensityMatrix *rho,
                                     const struct LsdDecomposition *d,
                                     double tol,
                                     bool *verdict,
                                     double *max_residual);

// Generate a state from coset parameters. `trace_factor` may be null.
//
// # Safety
// `lambdas` must point to 4 doubles; `theta`, `xi`, `phi` to 2 each.
enum LsdStatus lsd_coset_generate(const double *lambdas,
                                  const double *theta,
                                  const double *xi,
                                  const double *phi,
                                  struct LsdDensityMatrix **out,
                                  double *trace_factor);

// Serialize a state to JSON. Free the string with [`lsd_string_free`].
//
// # Safety
// `rho` must be a live handle; `out` must be writable.
enum LsdStatus lsd_density_matrix_to_json(const struct LsdDensityMatrix *rho, char **out);

// Serialize a decomposition to JSON. Free the string with [`lsd_string_free`].
//
// # Safety
// `d` must be a live handle; `out` must be writable.
enum LsdStatus lsd_decomposition_to_json(const struct LsdDecomposition *d, char **out);

// # Safety
// `s` must come from this library's `*_to_json` functions. Null is a no-op.
void lsd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSD_TOOLKIT_H */

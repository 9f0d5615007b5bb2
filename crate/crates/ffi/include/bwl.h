#ifndef BWL_H
#define BWL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum BwlStatus {
  BWL_STATUS_OK = 0,
  BWL_STATUS_NULL_POINTER = 1,
  // Malformed or out-of-domain input.
  BWL_STATUS_INVALID = 2,
  // No certificate in the numerical gray band.
  BWL_STATUS_GRAY_ZONE = 3,
  // A certificate failed to re-verify.
  BWL_STATUS_VERIFICATION = 4,
  // Output buffer too small.
  BWL_STATUS_BUFFER_TOO_SMALL = 5,
  BWL_STATUS_PANIC = 6,
} BwlStatus;

typedef enum BwlClass {
  BWL_CLASS_COMPLETELY_POSITIVE = 0,
  BWL_CLASS_DECOMPOSABLE_WITNESS = 1,
  BWL_CLASS_INDECOMPOSABLE_WITNESS = 2,
  // Block-positive, decomposability unknown.
  BWL_CLASS_WITNESS = 3,
  BWL_CLASS_NOT_BLOCK_POSITIVE = 4,
  BWL_CLASS_UNDETERMINED = 5,
} BwlClass;

typedef enum BwlTrinary {
  BWL_TRINARY_YES = 0,
  BWL_TRINARY_NO = 1,
  BWL_TRINARY_UNDETERMINED = 2,
} BwlTrinary;

typedef enum BwlMethod {
  BWL_METHOD_EXACT_N2 = 0,
  BWL_METHOD_EXACT_N3 = 1,
  BWL_METHOD_COMPLETE_POSITIVITY = 2,
  BWL_METHOD_CYCLIC_NECESSARY = 3,
  BWL_METHOD_WEYL_SUFFICIENT = 4,
  BWL_METHOD_DECOMPOSABLE_SPLIT = 5,
  BWL_METHOD_SEE_SAW = 6,
} BwlMethod;

// Opaque witness handle.
typedef struct BwlWitness BwlWitness;

// Flattened verdict. Tri-state flags use -1 for unknown.
typedef struct BwlVerdict {
  enum BwlClass witness_class;
  enum BwlTrinary block_positive;
  enum BwlMethod method;
  bool cp;
  int32_t decomposable;
  int32_t optimal;
  // Product-vector expectation when a certificate exists, NaN otherwise.
  double certificate_value;
} BwlVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *bwl_version(void);

// Message of the last failed call on this thread, or NULL.
// Valid until the next failing call on the same thread.
const char *bwl_last_error_message(void);

// Build `W[α]` from `n` coefficients.
//
// # Safety
// `alpha` must point to `n` doubles and `out` must be writable.
enum BwlStatus bwl_witness_from_alpha(const double *alpha, size_t n, struct BwlWitness **out);

// Build a torus witness. `sign` is 0 when absent, otherwise +1 or -1.
//
// # Safety
// `phases` must point to `count` doubles and `out` must be writable.
enum BwlStatus bwl_witness_from_torus(size_t n,
                                      const double *phases,
                                      size_t count,
                                      int32_t sign,
                                      struct BwlWitness **out);

// Build a named witness: `reduction`, `choi-i`, `choi-ii`, `wprime` or `non-torus:K`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` must be writable.
enum BwlStatus bwl_witness_from_name(size_t n, const char *name, struct BwlWitness **out);

// Parse a witness record from JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
enum BwlStatus bwl_witness_from_json(const char *json, struct BwlWitness **out);

// Release a handle. NULL is ignored.
//
// # Safety
// `w` must come from this library and not be used afterwards.
void bwl_witness_free(struct BwlWitness *w);

// Local dimension `n`, or 0 for NULL.
//
// # Safety
// `w` must be NULL or a live handle.
size_t bwl_witness_dim(const struct BwlWitness *w);

// Copy the `n` alpha coefficients into `out`.
//
// # Safety
// `out` must have room for `len` doubles.
enum BwlStatus bwl_witness_alpha(const struct BwlWitness *w, double *out, size_t len);

// Copy the `n²×n²` matrix in row-major order with interleaved real and
// imaginary parts, `2·n⁴` doubles in total.
//
// # Safety
// `out` must have room for `len` doubles.
enum BwlStatus bwl_witness_matrix(const struct BwlWitness *w, double *out, size_t len);

// Classify the witness. Zero `restarts` or `iterations` selects the defaults.
//
// # Safety
// `w` must be a live handle and `out` writable.
enum BwlStatus bwl_witness_classify(const struct BwlWitness *w,
                                    size_t restarts,
                                    size_t iterations,
                                    uint64_t seed,
                                    struct BwlVerdict *out);

// Whether the witness admits a `P + Q^Γ` split (symmetric alpha).
//
// # Safety
// `w` must be a live handle and `out` writable.
enum BwlStatus bwl_witness_is_decomposable(const struct BwlWitness *w, bool *out);

// Serialize the witness record as JSON.
//
// # Safety
// `w` must be a live handle and `out` writable. Free the result with
// [`bwl_string_free`].
enum BwlStatus bwl_witness_to_json(const struct BwlWitness *w, char **out);

// Produce a verified certificate as JSON. Pass `k < 0` and a NaN `epsilon`
// for the defaults.
//
// # Safety
// `w` must be a live handle and `out` writable. Free the result with
// [`bwl_string_free`].
enum BwlStatus bwl_witness_certify_json(const struct BwlWitness *w,
                                        int64_t k,
                                        double epsilon,
                                        char **out);

// Re-check a certificate JSON document.
//
// # Safety
// `json` must be a NUL-terminated string.
enum BwlStatus bwl_certificate_verify_json(const char *json);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void bwl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BWL_H */

#ifndef COLLAPSE_ENTANGLEMENT_H
#define COLLAPSE_ENTANGLEMENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CeStatistics {
  CE_STATISTICS_BOSON = 0,
  CE_STATISTICS_FERMION = 1,
} CeStatistics;

// Status codes returned by every fallible function.
typedef enum CeStatus {
  CE_STATUS_OK = 0,
  CE_STATUS_INVALID_ARGUMENT = 1,
  CE_STATUS_NULL_POINTER = 2,
  CE_STATUS_SQUEEZING_OVERFLOW = 3,
  CE_STATUS_NO_SIGN_CHANGE = 4,
  CE_STATUS_INVALID_OPERATOR = 5,
  CE_STATUS_BUFFER_TOO_SMALL = 6,
  CE_STATUS_PANIC = 7,
} CeStatus;

// Opaque black-hole parameters.
typedef struct CeBlackHole CeBlackHole;

// Opaque reduced density operator of the `out` modes.
typedef struct CeReducedState CeReducedState;

// Per-mode entropy summary. `fitted_temperature_ratio` is NaN when no fit
// is possible (reduced state numerically equal to the vacuum).
typedef struct CeEntropyReport {
  double x;
  double omega;
  double mass;
  double entropy_closed_form;
  double entropy_numerical;
  double abs_gap;
  double mean_occupation;
  double fitted_temperature_ratio;
} CeEntropyReport;

typedef struct CeCrossover {
  double x_star;
  double bracket_lo;
  double bracket_hi;
  double residual;
  uint32_t iterations;
  uint32_t sign_changes;
} CeCrossover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *ce_last_error(void);

// Library version as a static NUL-terminated string.
const char *ce_version(void);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum CeStatus ce_black_hole_new(double mass, double v0, struct CeBlackHole **out);

// # Safety
// `bh` must be NULL or a handle from [`ce_black_hole_new`] not yet freed.
void ce_black_hole_free(struct CeBlackHole *bh);

// Horizon location `v0 - 4m`.
//
// # Safety
// `bh` must be a live handle and `out` valid for writes.
enum CeStatus ce_horizon_formation(const struct CeBlackHole *bh, double *out);

// Hawking temperature `1/(8πm)`.
//
// # Safety
// `bh` must be a live handle and `out` valid for writes.
enum CeStatus ce_hawking_temperature(const struct CeBlackHole *bh, double *out);

// Squeezing parameter `r` (boson) or `r̃` (fermion) for `x = 4πmω`.
//
// # Safety
// `out` must be valid for writes.
enum CeStatus ce_squeezing_r(enum CeStatistics stats, double x, double *out);

// Closed-form entanglement entropy in bits at dimensionless `x > 0`.
//
// # Safety
// `out` must be valid for writes.
enum CeStatus ce_closed_form_entropy(enum CeStatistics stats, double x, double *out);

// Closed form plus truncated-Fock oracle for one mode.
//
// # Safety
// `bh` must be a live handle and `out` valid for writes.
enum CeStatus ce_entropy_report(const struct CeBlackHole *bh,
                                double omega,
                                enum CeStatistics stats,
                                double eps_tail,
                                struct CeEntropyReport *out);

// Boson/fermion crossover in `x` by bisection on `[lo, hi]`.
//
// # Safety
// `out` must be valid for writes.
enum CeStatus ce_crossover(double tol, double lo, double hi, struct CeCrossover *out);

// Builds the mode's global state and traces out the horizon side.
//
// # Safety
// `bh` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_new(const struct CeBlackHole *bh,
                                   double omega,
                                   enum CeStatistics stats,
                                   double eps_tail,
                                   struct CeReducedState **out);

// # Safety
// `st` must be NULL or a handle from [`ce_reduced_state_new`] not yet freed.
void ce_reduced_state_free(struct CeReducedState *st);

// Dimension of the reduced state's basis.
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_dim(const struct CeReducedState *st, uintptr_t *out);

// Copies the diagonal into `buf` (capacity `len`). Returns
// `BufferTooSmall` if `len` is less than the dimension.
//
// # Safety
// `st` must be a live handle and `buf` valid for `len` writes.
enum CeStatus ce_reduced_state_diagonal(const struct CeReducedState *st,
                                        double *buf,
                                        uintptr_t len);

// Von Neumann entropy in bits.
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_entropy(const struct CeReducedState *st, double *out);

// `Tr(ρ²)`.
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_purity(const struct CeReducedState *st, double *out);

// Particle-sector mean occupation.
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_mean_occupation(const struct CeReducedState *st, double *out);

// Fitted temperature over the Hawking temperature; NaN if no fit is possible.
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_temperature_ratio(const struct CeReducedState *st, double *out);

// JSON dump `{basis, diag, offdiag_norm}`. Release with [`ce_string_free`].
//
// # Safety
// `st` must be a live handle and `out` valid for writes.
enum CeStatus ce_reduced_state_to_json(const struct CeReducedState *st, char **out);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void ce_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLLAPSE_ENTANGLEMENT_H */

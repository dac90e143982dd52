#ifndef WAVEGUIDE_ECHO_H
#define WAVEGUIDE_ECHO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum WeStatus {
  WE_STATUS_OK = 0,
  WE_STATUS_NULL_POINTER = 1,
  WE_STATUS_INVALID_ARGUMENT = 2,
  WE_STATUS_NUMERIC = 3,
  WE_STATUS_CAPACITY = 4,
  WE_STATUS_IO = 5,
  WE_STATUS_PANIC = 6,
} WeStatus;

/**
 * Opaque lattice handle.
 */
typedef struct WeLattice WeLattice;

/**
 * Opaque unitary handle.
 */
typedef struct WeUnitary WeUnitary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *we_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *we_version(void);

/**
 * Chain of `num_couplings + 1` sites with detuning `delta`.
 *
 * # Safety
 * `couplings` must point to `num_couplings` doubles; `out` must be writable.
 */
enum WeStatus we_lattice_chain_new(const double *couplings,
                                   size_t num_couplings,
                                   double delta,
                                   struct WeLattice **out);

/**
 * `rows × cols` grid. Couplings list horizontal bonds row by row, then
 * vertical bonds row by row.
 *
 * # Safety
 * `couplings` must point to `num_couplings` doubles; `out` must be writable.
 */
enum WeStatus we_lattice_grid_new(size_t rows,
                                  size_t cols,
                                  const double *couplings,
                                  size_t num_couplings,
                                  double delta,
                                  struct WeLattice **out);

/**
 * # Safety
 * `lattice` must be null or a handle from this library, freed at most once.
 */
void we_lattice_free(struct WeLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum WeStatus we_lattice_dim(const struct WeLattice *lattice, size_t *out);

/**
 * New lattice with the detuning sign reversed.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum WeStatus we_lattice_flip_detuning(const struct WeLattice *lattice, struct WeLattice **out);

/**
 * Writes the real symmetric Hamiltonian, row-major, into `buf` of length
 * `len` (must be at least dim²).
 *
 * # Safety
 * `lattice` must be a live handle; `buf` must hold `len` doubles.
 */
enum WeStatus we_hamiltonian(const struct WeLattice *lattice, double *buf, size_t len);

/**
 * Propagator `exp(-i H z)` of the lattice.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum WeStatus we_evolve_unitary(const struct WeLattice *lattice, double z, struct WeUnitary **out);

/**
 * Two-segment echo of length `segment_length` each. The second segment uses
 * the detuning-flipped lattice, or `-H` when `full_reversal` is true.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum WeStatus we_echo_unitary(const struct WeLattice *lattice,
                              double segment_length,
                              bool full_reversal,
                              struct WeUnitary **out);

/**
 * # Safety
 * `unitary` must be null or a handle from this library, freed at most once.
 */
void we_unitary_free(struct WeUnitary *unitary);

/**
 * # Safety
 * `unitary` must be a live handle; `out` must be writable.
 */
enum WeStatus we_unitary_dim(const struct WeUnitary *unitary, size_t *out);

/**
 * Amplitude at `row` for unit input at `col`.
 *
 * # Safety
 * `unitary` must be a live handle; `re` and `im` must be writable.
 */
enum WeStatus we_unitary_entry(const struct WeUnitary *unitary,
                               size_t row,
                               size_t col,
                               double *re,
                               double *im);

/**
 * Copies the unitary, row-major, into `re` and `im` (each at least dim²).
 *
 * # Safety
 * `unitary` must be a live handle; `re` and `im` must each hold `len` doubles.
 */
enum WeStatus we_unitary_copy(const struct WeUnitary *unitary, double *re, double *im, size_t len);

/**
 * Single-photon fidelity for the input amplitudes `re + i im` (length `len`
 * equal to the unitary dimension; need not be normalized).
 *
 * # Safety
 * `unitary` must be a live handle; `re`, `im` must hold `len` doubles; `out`
 * must be writable.
 */
enum WeStatus we_fidelity_single(const struct WeUnitary *unitary,
                                 const double *re,
                                 const double *im,
                                 size_t len,
                                 double *out);

/**
 * Fidelity of `photons` photons launched into `site`.
 *
 * # Safety
 * `unitary` must be a live handle; `out` must be writable.
 */
enum WeStatus we_fidelity_fock(const struct WeUnitary *unitary,
                               size_t site,
                               uint32_t photons,
                               double *out);

/**
 * Fidelity of the NOON state on `site1`, `site2` with relative phase `phase`.
 *
 * # Safety
 * `unitary` must be a live handle; `out` must be writable.
 */
enum WeStatus we_fidelity_noon(const struct WeUnitary *unitary,
                               size_t site1,
                               size_t site2,
                               uint32_t photons,
                               double phase,
                               double *out);

/**
 * Fidelity of the single-photon W state over `num_sites` sites.
 *
 * # Safety
 * `unitary` must be a live handle; `sites` must hold `num_sites` values;
 * `out` must be writable.
 */
enum WeStatus we_fidelity_w(const struct WeUnitary *unitary,
                            const size_t *sites,
                            size_t num_sites,
                            double *out);

/**
 * Upper and lower band energies of the uniform binary chain at Bloch
 * momentum `q`.
 *
 * # Safety
 * `upper` and `lower` must be writable.
 */
enum WeStatus we_band_energies(double kappa, double delta, double q, double *upper, double *lower);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAVEGUIDE_ECHO_H */

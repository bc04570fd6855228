#ifndef NOMA_QUBO_H
#define NOMA_QUBO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum NqStatus {
  NQ_STATUS_OK = 0,
  NQ_STATUS_NULL_POINTER = 1,
  NQ_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Index or buffer size outside the valid range.
   */
  NQ_STATUS_OUT_OF_RANGE = 3,
  /**
   * The requested builder or engine does not support the instance.
   */
  NQ_STATUS_UNSUPPORTED = 4,
  NQ_STATUS_CONFIG = 5,
  NQ_STATUS_IO = 6,
  NQ_STATUS_INVALID_UTF8 = 7,
  /**
   * A panic was caught inside the library.
   */
  NQ_STATUS_INTERNAL = 99,
} NqStatus;

typedef enum NqScheme {
  NQ_SCHEME_BPSK = 0,
  NQ_SCHEME_QPSK = 1,
  NQ_SCHEME_QAM16 = 2,
  NQ_SCHEME_QAM64 = 3,
} NqScheme;

typedef enum NqDecoder {
  NQ_DECODER_BRUTE_FORCE = 0,
  NQ_DECODER_SIC = 1,
  NQ_DECODER_ANNEALER = 2,
} NqDecoder;

/**
 * Opaque channel realization: one complex gain per user.
 */
typedef struct NqChannel NqChannel;

/**
 * Opaque upper-triangular QUBO matrix with constant offset.
 */
typedef struct NqQubo NqQubo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *nq_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nq_version(void);

/**
 * Builds a channel from `n` complex gains given as separate real and
 * imaginary arrays. Users are placed on the default 50-100 m geometry.
 *
 * # Safety
 * `re` and `im` must point to `n` readable doubles; `out` must be writable.
 */
enum NqStatus nq_channel_new(const double *re,
                             const double *im,
                             size_t n,
                             struct NqChannel **out_channel);

/**
 * Number of users of a channel; 0 for null.
 *
 * # Safety
 * `channel` must be null or a live handle.
 */
size_t nq_channel_num_users(const struct NqChannel *channel);

/**
 * # Safety
 * `channel` must be null or a handle not yet freed.
 */
void nq_channel_free(struct NqChannel *channel);

/**
 * Builds the ML-detection QUBO for received sample `y`, transmit power
 * `p_mw` (milliwatts) and `scheme` (an [`NqScheme`] value). With
 * `closed_form` non-zero the per-scheme closed-form coefficients are used
 * (not available for 64-QAM).
 *
 * # Safety
 * `channel` must be a live handle; `out_qubo` must be writable.
 */
enum NqStatus nq_qubo_build(const struct NqChannel *channel,
                            double y_re,
                            double y_im,
                            double p_mw,
                            int32_t scheme,
                            int32_t closed_form,
                            struct NqQubo **out_qubo);

/**
 * Number of binary variables; 0 for null.
 *
 * # Safety
 * `qubo` must be null or a live handle.
 */
size_t nq_qubo_num_qubits(const struct NqQubo *qubo);

/**
 * # Safety
 * `qubo` must be a live handle; `out_value` must be writable.
 */
enum NqStatus nq_qubo_offset(const struct NqQubo *qubo, double *out_value);

/**
 * Coefficient of `q_i q_j`; the pair is read as upper-triangular, so
 * `(i, j)` and `(j, i)` address the same entry.
 *
 * # Safety
 * `qubo` must be a live handle; `out_value` must be writable.
 */
enum NqStatus nq_qubo_get(const struct NqQubo *qubo, size_t i, size_t j, double *out_value);

/**
 * Energy of a binary assignment, offset included.
 *
 * # Safety
 * `qubo` must be a live handle; `bits` must point to `len` readable bytes;
 * `out_energy` must be writable.
 */
enum NqStatus nq_qubo_energy(const struct NqQubo *qubo,
                             const uint8_t *bits,
                             size_t len,
                             double *out_energy);

/**
 * # Safety
 * `qubo` must be null or a handle not yet freed.
 */
void nq_qubo_free(struct NqQubo *qubo);

/**
 * Detects the users' symbols from `y`. The decided qubit labels are
 * written to `qubits_out` (capacity `cap`, one byte per bit, users in
 * index order) and their count to `out_len`; `out_metric` receives the
 * squared residual. `scheme` and `decoder` take [`NqScheme`] and
 * [`NqDecoder`] values. `seed` only affects the annealer, which runs with its
 * default parameters.
 *
 * # Safety
 * `channel` must be a live handle; `qubits_out` must point to `cap`
 * writable bytes; `out_len` and `out_metric` must be writable (the latter
 * may be null).
 */
enum NqStatus nq_decode(const struct NqChannel *channel,
                        double y_re,
                        double y_im,
                        double p_mw,
                        int32_t scheme,
                        int32_t decoder,
                        uint64_t seed,
                        uint8_t *qubits_out,
                        size_t cap,
                        size_t *out_len,
                        double *out_metric);

/**
 * Runs a BER sweep described by a TOML config and returns the CSV text
 * through `out_csv`; release it with [`nq_string_free`].
 *
 * # Safety
 * `config_toml` must be a NUL-terminated string; `out_csv` must be writable.
 */
enum NqStatus nq_ber_sweep_csv(const char *config_toml, char **out_csv);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void nq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOMA_QUBO_H */

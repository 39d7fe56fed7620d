#ifndef QHUFF_H
#define QHUFF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  QH_STATUS_OK = 0,
  QH_STATUS_NULL_POINTER = 1,
  QH_STATUS_INVALID_ARGUMENT = 2,
  QH_STATUS_UNSUPPORTED_ALPHABET = 3,
  QH_STATUS_INVALID_SYMBOL = 4,
  QH_STATUS_OVERFLOW = 5,
  QH_STATUS_TRUNCATED = 6,
  QH_STATUS_CORRUPT = 7,
  QH_STATUS_FORMAT = 8,
  QH_STATUS_TOO_LARGE = 9,
  QH_STATUS_STATE_CORRUPTION = 10,
  QH_STATUS_BUFFER_TOO_SMALL = 11,
  QH_STATUS_INTERNAL = 12,
} QhStatus;

/**
 * Opaque codebook handle.
 */
typedef struct QhCodebook QhCodebook;

/**
 * Opaque encoder-register handle.
 */
typedef struct QhEncoderState QhEncoderState;

/**
 * Alphabet parameters of the closed-form uniform code.
 */
typedef struct {
  uint64_t n;
  uint32_t lower;
  uint32_t upper;
  uint64_t diff;
} QhCodeParams;

/**
 * A codeword of at most 64 bits, right-aligned in `value`.
 */
typedef struct {
  uint64_t value;
  uint32_t len;
} QhCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
uintptr_t qh_last_error(char *buf, uintptr_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qh_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to a `QhCodeParams`.
 */
QhStatus qh_code_params(uint64_t n, QhCodeParams *out);

/**
 * Closed-form code of `symbol` in an alphabet of `n` equally likely symbols.
 *
 * # Safety
 * `out` must be a valid pointer to a `QhCode`.
 */
QhStatus qh_direct_encode(uint64_t n, uint64_t symbol, QhCode *out);

/**
 * Decodes a single codeword; every bit of `code` must be consumed.
 *
 * # Safety
 * `out_symbol` must be a valid pointer.
 */
QhStatus qh_direct_decode(uint64_t n, QhCode code, uint64_t *out_symbol);

/**
 * Codebook `0..n` of the closed-form uniform code.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to release
 * with [`qh_codebook_free`].
 */
QhStatus qh_codebook_direct(uint64_t n, QhCodebook **out);

/**
 * Canonical Huffman codebook for `counts[i]` occurrences of symbol `i`.
 * Symbols with a zero count receive no code.
 *
 * # Safety
 * `counts` must point to `len` readable values; `out` must be valid.
 */
QhStatus qh_codebook_huffman(const uint64_t *counts, uintptr_t len, QhCodebook **out);

/**
 * # Safety
 * `book` must be null or a handle from this library that was not freed yet.
 */
void qh_codebook_free(QhCodebook *book);

/**
 * Number of symbols with a code.
 *
 * # Safety
 * `book` and `out_len` must be valid.
 */
QhStatus qh_codebook_len(const QhCodebook *book, uintptr_t *out_len);

/**
 * Writes the code of `symbol` as a NUL-terminated string of `'0'`/`'1'`
 * characters. `out_len` receives the code length; if `cap` is too small
 * nothing is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `book` must be valid; `buf` must point to `cap` writable bytes; `out_len` must be valid.
 */
QhStatus qh_codebook_code(const QhCodebook *book,
                          uint64_t symbol,
                          char *buf,
                          uintptr_t cap,
                          uintptr_t *out_len);

/**
 * Whether the codebook is prefix-free and its Kraft sum is exactly one.
 *
 * # Safety
 * `book`, `out_prefix_free` and `out_kraft_one` must be valid.
 */
QhStatus qh_codebook_check(const QhCodebook *book, bool *out_prefix_free, bool *out_kraft_one);

/**
 * Builds the two encoder registers for `n` symbols.
 *
 * # Safety
 * `out` must be valid; release the handle with [`qh_state_free`].
 */
QhStatus qh_state_new(uint64_t n, QhEncoderState **out);

/**
 * # Safety
 * `state` must be null or a live handle from [`qh_state_new`].
 */
void qh_state_free(QhEncoderState *state);

/**
 * Number of ones in register 1 or 2.
 *
 * # Safety
 * `state` and `out_count` must be valid.
 */
QhStatus qh_state_ones(const QhEncoderState *state, uint32_t register_, uint64_t *out_count);

/**
 * # Safety
 * `state` and `out` must be valid.
 */
QhStatus qh_state_encode(const QhEncoderState *state, uint64_t symbol, QhCode *out);

/**
 * Uniform-mode container. `encoder` is 0 for the closed form, 1 for the
 * register encoder; both yield identical bytes.
 *
 * # Safety
 * `symbols` must point to `count` values; `out_buf`/`out_len` must be valid.
 * Release the buffer with [`qh_buffer_free`].
 */
QhStatus qh_compress_uniform(uint64_t n,
                             uint8_t symbol_width,
                             const uint64_t *symbols,
                             uintptr_t count,
                             uint32_t encoder,
                             uint8_t **out_buf,
                             uintptr_t *out_len);

/**
 * Byte-Huffman container.
 *
 * # Safety
 * `data` must point to `len` bytes; `out_buf`/`out_len` must be valid.
 */
QhStatus qh_compress_bytes(const uint8_t *data,
                           uintptr_t len,
                           uint8_t **out_buf,
                           uintptr_t *out_len);

/**
 * Decodes any container into symbol values. `out_mode` receives 0 for
 * uniform mode and 1 for byte Huffman. Release with [`qh_symbols_free`].
 *
 * # Safety
 * `data` must point to `len` bytes; all out-pointers must be valid.
 */
QhStatus qh_decompress(const uint8_t *data,
                       uintptr_t len,
                       uint64_t **out_symbols,
                       uintptr_t *out_count,
                       uint8_t *out_mode);

/**
 * # Safety
 * `buf`/`len` must come from a compress call and not be freed yet.
 */
void qh_buffer_free(uint8_t *buf, uintptr_t len);

/**
 * # Safety
 * `symbols`/`count` must come from [`qh_decompress`] and not be freed yet.
 */
void qh_symbols_free(uint64_t *symbols, uintptr_t count);

/**
 * Entropy in bits per symbol of `counts`.
 *
 * # Safety
 * `counts` must point to `len` values; `out` must be valid.
 */
QhStatus qh_entropy(const uint64_t *counts, uintptr_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHUFF_H */

#ifndef COSETOPO_H
#define COSETOPO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Report sections for [`cosetopo_report_json`].
#define COSETOPO_REPORT_COSET_HOMOLOGY 1

#define COSETOPO_REPORT_SUBGROUP_HOMOLOGY (1 << 1)

#define COSETOPO_REPORT_PREDICT_VERIFY (1 << 2)

#define COSETOPO_REPORT_ZETA (1 << 3)

#define COSETOPO_REPORT_CLASSIFY (1 << 4)

#define COSETOPO_REPORT_BOUNDS (1 << 5)

#define COSETOPO_REPORT_CERTIFICATE (1 << 6)

// Status codes returned by every fallible function.
typedef enum CosetopoStatus {
  COSETOPO_STATUS_OK = 0,
  COSETOPO_STATUS_NULL_POINTER = 1,
  COSETOPO_STATUS_INVALID_UTF8 = 2,
  COSETOPO_STATUS_INVALID_SPEC = 3,
  COSETOPO_STATUS_CAP_EXCEEDED = 4,
  // A caller buffer is too small; the required length is still written.
  COSETOPO_STATUS_BUFFER_TOO_SMALL = 5,
  COSETOPO_STATUS_PRECONDITION = 6,
  COSETOPO_STATUS_INTERNAL = 7,
} CosetopoStatus;

// Opaque group handle.
typedef struct CosetopoGroup CosetopoGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message on this thread into `buf` (NUL-terminated, truncated to `len`).
//
// Returns the full message length excluding the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t cosetopo_last_error(char *buf, size_t len);

// Builds a group from a catalog spec such as `alt:5`, refusing orders above `cap`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum CosetopoStatus cosetopo_group_new(const char *spec, size_t cap, struct CosetopoGroup **out);

// Releases a handle; null is ignored.
//
// # Safety
// `g` must come from [`cosetopo_group_new`] and not be used afterwards.
void cosetopo_group_free(struct CosetopoGroup *g);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum CosetopoStatus cosetopo_group_order(const struct CosetopoGroup *g, size_t *out);

// Number of subgroups, including the trivial group and the whole group.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CosetopoStatus cosetopo_group_subgroup_count(const struct CosetopoGroup *g, size_t *out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum CosetopoStatus cosetopo_group_is_solvable(const struct CosetopoGroup *g, bool *out);

// Reduced Betti numbers of the coset poset, starting at dimension -1.
//
// `*out_len` always receives the number of entries; a short `buf` yields `BufferTooSmall`.
//
// # Safety
// `g` must be a live handle, `buf` must hold `len` entries, `out_len` must be writable.
enum CosetopoStatus cosetopo_coset_betti(const struct CosetopoGroup *g,
                                         uint64_t *buf,
                                         size_t len,
                                         size_t *out_len);

// Reduced Betti numbers of the subgroup poset, starting at dimension -1.
//
// # Safety
// As for [`cosetopo_coset_betti`].
enum CosetopoStatus cosetopo_subgroup_betti(const struct CosetopoGroup *g,
                                            uint64_t *buf,
                                            size_t len,
                                            size_t *out_len);

// `P(G, -1)` from the Möbius table.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CosetopoStatus cosetopo_prob_zeta_minus_one(const struct CosetopoGroup *g, int64_t *out);

// Whether propagation on the minimal cover issues a certificate that replays.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CosetopoStatus cosetopo_pi1_certified(const struct CosetopoGroup *g, bool *out);

// JSON report for `spec` with the sections selected by `flags`, uncached.
//
// The string must be released with [`cosetopo_string_free`].
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum CosetopoStatus cosetopo_report_json(const char *spec, size_t cap, uint32_t flags, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cosetopo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COSETOPO_H */

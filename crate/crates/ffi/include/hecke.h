#ifndef HECKE_H
#define HECKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HeckeStatus {
  HECKE_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8, malformed key or out-of-range argument.
   */
  HECKE_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The requested data has not been computed or stored.
   */
  HECKE_STATUS_NOT_COMPUTED = 2,
  /**
   * A computation failed, e.g. the precision cap was reached.
   */
  HECKE_STATUS_COMPUTATION_FAILED = 3,
  /**
   * A stored record is damaged.
   */
  HECKE_STATUS_STORE_CORRUPT = 4,
  /**
   * Filesystem error.
   */
  HECKE_STATUS_IO = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  HECKE_STATUS_PANIC = 6,
} HeckeStatus;

/**
 * One Q_l-orbit of eigenforms, loaded from a store.
 */
typedef struct HeckeEigenform HeckeEigenform;

/**
 * A store directory.
 */
typedef struct HeckeStore HeckeStore;

/**
 * Exponent of a congruence in lambda-units of the comparison ring.
 */
typedef struct HeckeExponent {
  uint64_t lambda;
  /**
   * Ramification index of the comparison ring.
   */
  uint32_t e;
  /**
   * Nonzero when every compared defect vanished at the working precision.
   */
  uint8_t at_least;
} HeckeExponent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *hecke_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hecke_string_free(char *s);

/**
 * Open the store at `path`; with `create` nonzero, create it if missing.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HeckeStatus hecke_store_open(const char *path, uint8_t create, struct HeckeStore **out);

/**
 * # Safety
 * `store` must be null or a handle from [`hecke_store_open`] not yet freed.
 */
void hecke_store_free(struct HeckeStore *store);

/**
 * Ingest an HMAT file; the Q-orbit key (`L.W.n`) is returned in `key_out`.
 *
 * # Safety
 * Pointers must be valid; `key_out` receives an owned string.
 */
enum HeckeStatus hecke_store_ingest(const struct HeckeStore *store,
                                    const char *hmat_path,
                                    char **key_out);

/**
 * Decompose a Q-orbit at `ell` to precision `precision`, separating
 * Q_l-orbits with working precision at most `cap`. Counts of l-adic orbits
 * and eigenforms are written to the out-parameters.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HeckeStatus hecke_store_decompose(const struct HeckeStore *store,
                                       const char *key,
                                       uint64_t ell,
                                       uint32_t precision,
                                       uint32_t cap,
                                       size_t *orbits_out,
                                       size_t *eigenforms_out);

/**
 * Keys of the Q_l-orbits stored under a Q-orbit, one per line.
 *
 * # Safety
 * Pointers must be valid; `keys_out` receives an owned string.
 */
enum HeckeStatus hecke_store_ql_orbits(const struct HeckeStore *store,
                                       const char *key,
                                       uint64_t ell,
                                       char **keys_out);

/**
 * Load one eigenform (`L.W.n/l/i/j`).
 *
 * # Safety
 * Pointers must be valid.
 */
enum HeckeStatus hecke_eigenform_load(const struct HeckeStore *store,
                                      const char *key,
                                      struct HeckeEigenform **out);

/**
 * # Safety
 * `f` must be null or a handle from [`hecke_eigenform_load`] not yet freed.
 */
void hecke_eigenform_free(struct HeckeEigenform *f);

/**
 * Rank, precision N, ramification index e and coefficient bound.
 *
 * # Safety
 * `f` must be a valid handle; null out-parameters are skipped.
 */
enum HeckeStatus hecke_eigenform_info(const struct HeckeEigenform *f,
                                      size_t *rank,
                                      uint32_t *precision,
                                      uint32_t *e,
                                      uint64_t *bound);

/**
 * The EIGF record of the eigenform.
 *
 * # Safety
 * Pointers must be valid; `text_out` receives an owned string.
 */
enum HeckeStatus hecke_eigenform_record(const struct HeckeEigenform *f, char **text_out);

/**
 * Power-basis coordinates of `b_n` as decimal residues separated by
 * commas.
 *
 * # Safety
 * Pointers must be valid; `coords_out` receives an owned string.
 */
enum HeckeStatus hecke_eigenform_coefficient(const struct HeckeEigenform *f,
                                             uint64_t n,
                                             char **coords_out);

/**
 * Strong congruence exponent of two loaded eigenforms over indices
 * `1..=bound` (0: the largest common bound), without touching the store.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HeckeStatus hecke_congruence_strong(const struct HeckeEigenform *f,
                                         const struct HeckeEigenform *g,
                                         uint64_t bound,
                                         struct HeckeExponent *out);

/**
 * Compute and record the congruence between two stored endpoints (weak
 * when `right` is an orbit key, strong when it is an eigenform key). The
 * CONG record is returned in `record_out` if it is not null.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HeckeStatus hecke_store_congruence(const struct HeckeStore *store,
                                        const char *left,
                                        const char *right,
                                        uint64_t bound,
                                        struct HeckeExponent *out,
                                        char **record_out);

/**
 * Library version as a static string.
 */
const char *hecke_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HECKE_H */

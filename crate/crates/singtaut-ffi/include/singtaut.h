#ifndef SINGTAUT_H
#define SINGTAUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StClassification {
  ST_CLASSIFICATION_F_REGULAR = 0,
  ST_CLASSIFICATION_F_PURE333 = 1,
  ST_CLASSIFICATION_F_PURE236 = 2,
  ST_CLASSIFICATION_F_PURE244 = 3,
  ST_CLASSIFICATION_F_PURE2222 = 4,
  ST_CLASSIFICATION_F_PURE_D_TILDE = 5,
  ST_CLASSIFICATION_RDP_EQUATION_DEPENDENT = 6,
  ST_CLASSIFICATION_NOT_F_PURE = 7,
  ST_CLASSIFICATION_NOT_APPLICABLE = 8,
} StClassification;

typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_UTF8 = 2,
  ST_STATUS_SYNTAX = 3,
  ST_STATUS_NOT_PRIME = 4,
  ST_STATUS_INVALID_GRAPH = 5,
  ST_STATUS_PRECONDITION = 6,
  ST_STATUS_UNSUPPORTED = 7,
  ST_STATUS_ARITHMETIC = 8,
  ST_STATUS_PANIC = 9,
} StStatus;

typedef enum StVerdictKind {
  ST_VERDICT_KIND_TAUT_CHAIN_RULE = 0,
  ST_VERDICT_KIND_TAUT_H1_VANISHES = 1,
  ST_VERDICT_KIND_NOT_TAUT_EVIDENCE = 2,
  ST_VERDICT_KIND_MODULI_FAMILY = 3,
  ST_VERDICT_KIND_INCONCLUSIVE = 4,
} StVerdictKind;

/**
 * Parsed weighted dual graph.
 */
typedef struct StGraph StGraph;

/**
 * Result of a tautness certificate.
 */
typedef struct StVerdict StVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; valid until the next failing call.
 */
const char *st_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void st_string_free(char *s);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum StStatus st_graph_parse(const char *text, struct StGraph **out);

/**
 * # Safety
 * `g` must come from [`st_graph_parse`] or be null.
 */
void st_graph_free(struct StGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum StStatus st_graph_vertex_count(const struct StGraph *g, size_t *out);

/**
 * Classifies `g` in characteristic `p`; `lambda` is read only when `has_lambda` is true.
 *
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum StStatus st_classify(const struct StGraph *g,
                          uint64_t p,
                          bool has_lambda,
                          int64_t lambda,
                          enum StClassification *out);

/**
 * Tautness certificate; D-tilde graphs without an obstruction get a Čech check at window (8,2).
 *
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum StStatus st_taut(const struct StGraph *g, uint64_t p, struct StVerdict **out);

/**
 * # Safety
 * `v` must come from [`st_taut`] or be null.
 */
void st_verdict_free(struct StVerdict *v);

/**
 * # Safety
 * `v` must be a live verdict handle and `out` writable.
 */
enum StStatus st_verdict_kind(const struct StVerdict *v, enum StVerdictKind *out);

/**
 * Full verdict as JSON.
 *
 * # Safety
 * `v` must be a live verdict handle and `out` writable.
 */
enum StStatus st_verdict_json(const struct StVerdict *v, char **out);

/**
 * Fedder's criterion for a polynomial in `x, y, z` over F_p.
 *
 * # Safety
 * `poly` must be a NUL-terminated string and `out` writable.
 */
enum StStatus st_fedder_is_f_pure(const char *poly, uint64_t p, bool *out);

/**
 * Tab-separated coboundary table: `which` is one of t1, t2, c236, c236b, c244.
 *
 * # Safety
 * `which` must be a NUL-terminated string and `out` writable.
 */
enum StStatus st_table_text(const char *which, char **out);

/**
 * # Safety
 * `g` must be a live graph handle; `rank` and `stable` writable.
 */
enum StStatus st_cech_h1_rank(const struct StGraph *g,
                              uint64_t p,
                              int64_t s_max,
                              int64_t r_max,
                              uint64_t *rank,
                              bool *stable);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SINGTAUT_H */

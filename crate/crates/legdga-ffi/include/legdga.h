#ifndef LEGDGA_H
#define LEGDGA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LegdgaStatus {
  LEGDGA_STATUS_OK = 0,
  LEGDGA_STATUS_NULL_POINTER = 1,
  LEGDGA_STATUS_INVALID_UTF8 = 2,
  LEGDGA_STATUS_PARSE_ERROR = 3,
  LEGDGA_STATUS_INVALID_MCS = 4,
  LEGDGA_STATUS_NOT_AUGMENTATION = 5,
  LEGDGA_STATUS_MOVE_REJECTED = 6,
  LEGDGA_STATUS_PANIC = 99,
} LegdgaStatus;

/**
 * A validated front diagram.
 */
typedef struct LegdgaFront LegdgaFront;

/**
 * A validated Morse complex sequence.
 */
typedef struct LegdgaMcs LegdgaMcs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *legdga_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void legdga_string_free(char *s);

/**
 * Parse a front from the text or JSON format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum LegdgaStatus legdga_front_parse(const char *text, struct LegdgaFront **out);

/**
 * # Safety
 * `f` must be null or a handle from `legdga_front_parse`.
 */
void legdga_front_free(struct LegdgaFront *f);

/**
 * # Safety
 * `f` must be a valid front handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_front_generator_count(const struct LegdgaFront *f, size_t *out);

/**
 * The CE differential as text, one `label = element` line per generator.
 *
 * # Safety
 * `f` must be a valid front handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_front_ce_differential(const struct LegdgaFront *f, char **out);

/**
 * # Safety
 * `f` must be a valid front handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_front_augmentation_count(const struct LegdgaFront *f, size_t *out);

/**
 * Parse a front with `h` / `ic` lines into an MCS.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum LegdgaStatus legdga_mcs_parse(const char *text, struct LegdgaMcs **out);

/**
 * The A-form MCS whose marks are the crossings set in `bits`.
 *
 * # Safety
 * `f` must be a valid front handle, `bits` a nul-terminated string and
 * `out` a valid pointer.
 */
enum LegdgaStatus legdga_mcs_from_augmentation(const struct LegdgaFront *f,
                                               const char *bits,
                                               struct LegdgaMcs **out);

/**
 * # Safety
 * `m` must be null or an MCS handle from this library.
 */
void legdga_mcs_free(struct LegdgaMcs *m);

/**
 * The chord-path differential as text.
 *
 * # Safety
 * `m` must be a valid MCS handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_mcs_differential(const struct LegdgaMcs *m, char **out);

/**
 * # Safety
 * `m` must be a valid MCS handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_mcs_d_squared_vanishes(const struct LegdgaMcs *m, bool *out);

/**
 * # Safety
 * `m` must be a valid MCS handle and `out` a valid pointer.
 */
enum LegdgaStatus legdga_mcs_to_text(const struct LegdgaMcs *m, char **out);

/**
 * Apply one `move ...` statement, producing a new MCS; `m` is unchanged.
 *
 * # Safety
 * `m` must be a valid MCS handle, `stmt` a nul-terminated string and `out`
 * a valid pointer.
 */
enum LegdgaStatus legdga_mcs_apply_move(const struct LegdgaMcs *m,
                                        const char *stmt,
                                        struct LegdgaMcs **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LEGDGA_H */

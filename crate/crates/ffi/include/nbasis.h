#ifndef NBASIS_H
#define NBASIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum NbStatus {
  NB_STATUS_OK = 0,
  NB_STATUS_NULL_ARGUMENT = 1,
  NB_STATUS_INVALID_UTF8 = 2,
  NB_STATUS_BAD_WORLD = 3,
  NB_STATUS_BAD_POINT = 4,
  NB_STATUS_BAD_NAME = 5,
  NB_STATUS_NO_TRANSLATION = 6,
  // The fuel ran out; partial results are still returned.
  NB_STATUS_OUT_OF_FUEL = 7,
  // A finite name ended; partial results are still returned.
  NB_STATUS_END_OF_INPUT = 8,
  // The monitor has not accepted within the fuel.
  NB_STATUS_NOT_YET = 9,
  NB_STATUS_OVERFLOW = 10,
  NB_STATUS_UNSUPPORTED = 11,
  NB_STATUS_PANIC = 12,
} NbStatus;

typedef enum NbKind {
  NB_KIND_CAUCHY = 0,
  NB_KIND_MIN = 1,
  NB_KIND_MAX = 2,
  NB_KIND_SI = 3,
} NbKind;

typedef enum NbRelation {
  NB_RELATION_STRICT = 0,
  NB_RELATION_NON_STRICT = 1,
  NB_RELATION_EQUALITY = 2,
  NB_RELATION_SINGLETON = 3,
} NbRelation;

// A lazily evaluated name.
typedef struct NbName NbName;

// A world built from a spec string.
typedef struct NbWorld NbWorld;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a world from a spec such as `"K-space --fuel 1000"`.
//
// # Safety
// `spec` must be a nul-terminated string and `out` a valid pointer.
enum NbStatus nb_world_new(const char *spec, struct NbWorld **out);

// # Safety
// `world` must come from [`nb_world_new`] and not be used afterwards. Null
// is ignored.
void nb_world_free(struct NbWorld *world);

// The world's identifier, to be released with [`nb_string_free`].
//
// # Safety
// Pointers must be valid.
enum NbStatus nb_world_id(const struct NbWorld *world, char **out);

// A generated name of the point literal `point`.
//
// # Safety
// Pointers must be valid and `point` nul-terminated.
enum NbStatus nb_name_generate(const struct NbWorld *world,
                               const char *point,
                               enum NbKind kind,
                               struct NbName **out);

// A finite name from text with one decimal natural per line. Reading past
// its last cell reports [`NbStatus::EndOfInput`].
//
// # Safety
// Pointers must be valid and `cells` nul-terminated.
enum NbStatus nb_name_parse(const char *cells, struct NbName **out);

// Applies the realizer from `src` names to `dst` names. The input handle
// stays valid and is shared with the output.
//
// # Safety
// Pointers must be valid.
enum NbStatus nb_name_translate(const struct NbWorld *world,
                                const struct NbName *name,
                                enum NbKind src,
                                enum NbKind dst,
                                struct NbName **out);

// Evaluates up to `len` cells under `fuel` steps (0 for no limit) and
// returns them as text, one per line, to be released with
// [`nb_string_free`]. On [`NbStatus::OutOfFuel`] and
// [`NbStatus::EndOfInput`] the cells obtained so far are still returned.
//
// # Safety
// Pointers must be valid; `out_cells` may be null.
enum NbStatus nb_name_prefix(const struct NbName *name,
                             size_t len,
                             uint64_t fuel,
                             char **out_text,
                             size_t *out_cells);

// # Safety
// `name` must come from this library and not be used afterwards. Null is
// ignored.
void nb_name_free(struct NbName *name);

// Semi-decides whether the point named by the strong-inclusion name lies
// in the ball literal `target`. Returns [`NbStatus::Ok`] on acceptance and
// [`NbStatus::NotYet`] otherwise; `out_used` receives the steps spent.
//
// # Safety
// Pointers must be valid; `out_used` may be null.
enum NbStatus nb_member(const struct NbWorld *world,
                        const struct NbName *name,
                        const char *target,
                        uint64_t fuel,
                        uint64_t *out_used);

// Checks the strong-inclusion axioms on `samples` sampled codes and
// `points` sampled points; `out_violations` receives the violation count.
//
// # Safety
// Pointers must be valid.
enum NbStatus nb_check_axioms(const struct NbWorld *world,
                              enum NbRelation rel,
                              bool induced,
                              size_t samples,
                              size_t points,
                              uint64_t seed,
                              size_t *out_violations);

// The Cantor pairing of `n` and `m`.
//
// # Safety
// `out` must be valid.
enum NbStatus nb_pair(uint64_t n, uint64_t m, uint64_t *out);

// Inverse of [`nb_pair`].
//
// # Safety
// Output pointers must be valid.
enum NbStatus nb_unpair(uint64_t c, uint64_t *out_n, uint64_t *out_m);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void nb_string_free(char *s);

// Message for the last failed call on this thread, or null. Valid until
// the next call into this library on the same thread.
const char *nb_last_error(void);

// The library version as a static string.
const char *nb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NBASIS_H */

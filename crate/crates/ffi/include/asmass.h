/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ASMASS_H
#define ASMASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Splitting behavior of a Frobenius-stable 4-set.
typedef enum AsmassBehavior {
  ASMASS_BEHAVIOR_SPLIT = 0,
  ASMASS_BEHAVIOR_SPLIT_QUAD,
  ASMASS_BEHAVIOR_QUAD,
  ASMASS_BEHAVIOR_CUBIC,
  ASMASS_BEHAVIOR_QUARTIC,
  // All behaviors together.
  ASMASS_BEHAVIOR_TOTAL,
} AsmassBehavior;

// Result code of every fallible call.
typedef enum AsmassStatus {
  ASMASS_STATUS_OK = 0,
  ASMASS_STATUS_NULL_POINTER,
  ASMASS_STATUS_INVALID_UTF8,
  ASMASS_STATUS_INVALID_ARGUMENT,
  ASMASS_STATUS_NOT_PRIME,
  ASMASS_STATUS_SIZE_LIMIT_EXCEEDED,
  ASMASS_STATUS_FIELD_MISMATCH,
  ASMASS_STATUS_EVEN_CHARACTERISTIC,
  ASMASS_STATUS_DIVISION_BY_ZERO,
  ASMASS_STATUS_ZERO_FUNCTION,
  ASMASS_STATUS_P_DIVIDES_E,
  ASMASS_STATUS_BAD_T,
  ASMASS_STATUS_INVALID_RAM_DATA,
  ASMASS_STATUS_GENUS_NOT_MULTIPLE,
  ASMASS_STATUS_INCOMPATIBLE_SPLIT,
  ASMASS_STATUS_UNSUPPORTED_SHAPE,
  ASMASS_STATUS_UNSUPPORTED_GENUS,
  ASMASS_STATUS_REDUCIBLE_COVER,
  ASMASS_STATUS_PARSE,
  ASMASS_STATUS_PANIC,
} AsmassStatus;

// A finite field `F_q` together with its extension tower.
typedef struct AsmassField AsmassField;

// Validated ramification data `{eps_1, ..., eps_r}` in characteristic p.
typedef struct AsmassRamData AsmassRamData;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *asmass_last_error_message(void);

void asmass_clear_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void asmass_string_free(char *s);

// Creates `F_{p^n}`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum AsmassStatus asmass_field_new(uint32_t p, uint32_t n, struct AsmassField **out);

// # Safety
// `f` must be null or a handle from [`asmass_field_new`], not yet freed.
void asmass_field_free(struct AsmassField *f);

// Field order `q`, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live field handle.
uint64_t asmass_field_order(const struct AsmassField *f);

// # Safety
// `f` must be null or a live field handle.
uint32_t asmass_field_characteristic(const struct AsmassField *f);

// Elements are passed by index in `0..q`; 0 is zero and 1 is one.
//
// # Safety
// `f` must be a live field handle and `out` valid for writing.
enum AsmassStatus asmass_field_add(const struct AsmassField *f,
                                   uint32_t a,
                                   uint32_t b,
                                   uint32_t *out);

// # Safety
// `f` must be a live field handle and `out` valid for writing.
enum AsmassStatus asmass_field_mul(const struct AsmassField *f,
                                   uint32_t a,
                                   uint32_t b,
                                   uint32_t *out);

// # Safety
// `f` must be a live field handle and `out` valid for writing.
enum AsmassStatus asmass_field_inv(const struct AsmassField *f, uint32_t a, uint32_t *out);

// Parses ramification data such as `"2,2,3"` in characteristic `p`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` valid for writing.
enum AsmassStatus asmass_ram_new(uint32_t p, const char *spec, struct AsmassRamData **out);

// # Safety
// `r` must be null or a handle from [`asmass_ram_new`], not yet freed.
void asmass_ram_free(struct AsmassRamData *r);

// Genus of covers with this ramification, or 0 for a null handle.
//
// # Safety
// `r` must be null or a live handle.
uint64_t asmass_ram_genus(const struct AsmassRamData *r);

// Dimension of the moduli component, or -1 for a null handle.
//
// # Safety
// `r` must be null or a live handle.
int64_t asmass_ram_dimension(const struct AsmassRamData *r);

// Closed-form mass polynomial for genus `g` in characteristic `p`,
// rendered like `"2q^3 - q^2"`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum AsmassStatus asmass_mass_g_poly(uint64_t g, uint32_t p, char **out);

// Closed-form mass for genus `g` over `F_q`, as `"num/den"`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum AsmassStatus asmass_mass_g(uint64_t g, uint32_t p, uint64_t q, char **out);

// Closed-form mass of `(R, S)` over `F_q` as `"num/den"`. A null `split`
// sums over every compatible splitting behavior.
//
// # Safety
// `r` must be a live handle, `split` null or a NUL-terminated string, and
// `out` valid for writing.
enum AsmassStatus asmass_mass_rs(const struct AsmassRamData *r,
                                 const char *split,
                                 uint64_t q,
                                 char **out);

// Mass by counting every cover (population over `|PGL_2|`), as `"num/den"`.
// A null `split` sums over every compatible splitting behavior.
//
// # Safety
// As for [`asmass_mass_rs`].
enum AsmassStatus asmass_global_mass(const struct AsmassRamData *r,
                                     const char *split,
                                     uint64_t q,
                                     uint64_t max_population,
                                     char **out);

// Mass by orbit representatives and their stabilizers, as `"num/den"`.
//
// # Safety
// As for [`asmass_mass_rs`].
enum AsmassStatus asmass_structural_mass(const struct AsmassRamData *r,
                                         const char *split,
                                         uint64_t q,
                                         uint64_t max_population,
                                         char **out);

// Number of `PGL_2(F_q)`-orbits of 4-sets with the given behavior, by
// Burnside's lemma and by closed form.
//
// # Safety
// `f` must be a live field handle; both out pointers valid for writing.
enum AsmassStatus asmass_four_set_orbits(const struct AsmassField *f,
                                         enum AsmassBehavior behavior,
                                         uint64_t *out_burnside,
                                         int64_t *out_closed_form);

// Stabilizer of `{0, 1, inf, t}`: its order and a label such as `"D4"`.
//
// # Safety
// `f` must be a live field handle; both out pointers valid for writing.
enum AsmassStatus asmass_classify_gamma_t(const struct AsmassField *f,
                                          uint32_t t,
                                          uint32_t *out_order,
                                          char **out_label);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASMASS_H */

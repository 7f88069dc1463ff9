/* omegalab C API: exact nested-interval and digit-table experiments.
 *
 * Conventions
 *   - Every function returning olab_status reports OLAB_OK on success; on any
 *     other status the output parameters are untouched and olab_last_error()
 *     holds a message for the calling thread.
 *   - Strings returned through char** are NUL-terminated, owned by the
 *     caller, and released with olab_string_free.
 *   - Handles are opaque and released with their matching _close function.
 *   - All exact numbers cross the boundary as fraction strings ("7/33") or
 *     digit strings; no floating point is involved anywhere.
 */
#ifndef OMEGALAB_H
#define OMEGALAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum olab_status {
    OLAB_OK = 0,
    OLAB_ERR_USAGE = 1,    /* malformed input: spec strings, fractions, config */
    OLAB_ERR_DOMAIN = 2,   /* structurally valid input outside an operation's domain */
    OLAB_ERR_NOT_FOUND = 3,/* bounded search ended without a result */
    OLAB_ERR_INTERNAL = 4  /* engine invariant violated; indicates a bug */
} olab_status;

const char* olab_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* olab_last_error(void);

void olab_string_free(char* s);

/* ---- exact numbers ---------------------------------------------------- */

/* Canonical form of a fraction string: "14/21" -> "2/3". */
olab_status olab_rational_canonical(const char* text, char** out);

/* Decimal shape "int.pre(per)" of a non-negative fraction: "7/33" -> "0.(21)". */
olab_status olab_rational_to_decimal(const char* fraction, char** out);

/* Exact value of int_part.preperiod(period) as a fraction string.
 * int_part is a decimal integer string ("0" for none). */
olab_status olab_decimal_to_rational(const char* int_part, const char* preperiod,
                                     const char* period, char** out);

/* n-th fractional digit (n >= 1) of a fraction in (0, 1]. */
olab_status olab_digit_at(const char* fraction, uint64_t n, int* out);

/* ---- enumerations ------------------------------------------------------ */

typedef struct olab_enum olab_enum;

/* Spec grammar: "calkin-wilf" | "zigzag" | "denominator-major" |
 * "list:1/2,3/4,..." with optional modifiers "| window=lo,hi" and
 * "| reorder=swap(i,j);..." / "| reorder=blocks(B)" / "| reorder=rotate(K)". */
olab_status olab_enum_open(const char* spec, olab_enum** out);
void olab_enum_close(olab_enum* e);

olab_status olab_enum_id(const olab_enum* e, char** out);

/* i is 1-based.  Finite sequences answer OLAB_ERR_DOMAIN past their end. */
olab_status olab_enum_nth(const olab_enum* e, uint64_t i, char** out);

/* Bounded membership search; closed-form inverses may answer beyond budget. */
olab_status olab_enum_index_of(const olab_enum* e, const char* fraction, uint64_t budget,
                               uint64_t* out);

/* ---- nested-interval refinement ---------------------------------------- */

typedef struct olab_trace olab_trace;

/* Runs the first-two-elements refinement of (lo, hi) against the enumeration.
 * budget caps the number of elements examined; frontier_mode 0 rescans from
 * the start each pass, 1 resumes past the previous hit (identical traces). */
olab_status olab_nest_run(const olab_enum* e, const char* lo, const char* hi, uint64_t budget,
                          int frontier_mode, olab_trace** out);
void olab_trace_close(olab_trace* t);

uint64_t olab_trace_step_count(const olab_trace* t);

/* Step k (1-based): endpoints and the positions where they were found. */
olab_status olab_trace_step(const olab_trace* t, uint64_t k, char** a, char** b, uint64_t* idx_a,
                            uint64_t* idx_b);

/* 1 when the run ended by exhausting a finite sequence, else 0. */
int olab_trace_sequence_exhausted(const olab_trace* t);

/* Witness value inside the last interval avoiding the whole sequence; only
 * present after sequence exhaustion (OLAB_ERR_NOT_FOUND otherwise). */
olab_status olab_trace_eta(const olab_trace* t, char** out);

olab_status olab_trace_json(const olab_trace* t, char** out);
olab_status olab_trace_csv(const olab_trace* t, char** out);

/* Structural checks; both return a JSON array of violations (empty = clean). */
olab_status olab_trace_check_indices(const olab_trace* t, char** violations_json);
olab_status olab_trace_check_exclusion(const olab_trace* t, const olab_enum* e, uint64_t prefix,
                                       char** violations_json);

/* Gap occupancy between consecutive left/right endpoints vs a scanned prefix. */
olab_status olab_gap_occupancy(const olab_trace* t, const olab_enum* e, uint64_t prefix,
                               uint64_t denominator_bound, char** report_json);

/* Four-condition probe on a bounded run; see the project README. */
olab_status olab_condition_probe(const olab_enum* e, const char* lo, const char* hi,
                                 uint64_t budget, char** report_json);

/* Monotone infimum scan of the first `prefix` elements inside (lo, hi). */
olab_status olab_epilog_scan(const olab_enum* e, const char* lo, const char* hi, uint64_t prefix,
                             char** report_json);

/* ---- digit tables ------------------------------------------------------ */

typedef struct olab_table olab_table;

/* Interleaved table window: odd rows from the enumeration restricted to
 * (0,1), even rows from the stream family ("sqrt" | "champernowne" |
 * "seeded:<seed>"). */
olab_status olab_table_build(const char* enum_spec, const char* h_family, uint64_t window,
                             olab_table** out);
void olab_table_close(olab_table* t);

uint64_t olab_table_window(const olab_table* t);
olab_status olab_table_row_digits(const olab_table* t, uint64_t row, uint64_t count, char** out);
olab_status olab_table_row_id(const olab_table* t, uint64_t row, char** out);

/* One row per line: "<position> <kind> <64 digits> <id>". */
olab_status olab_table_dump(const olab_table* t, char** out);

olab_status olab_table_diagonal(const olab_table* t, uint64_t n, char** digits_out);

/* Diagonal digits remapped d -> 5 (5 -> 4); never produces nines. */
olab_status olab_table_antidiagonal(const olab_table* t, uint64_t n, char** digits_out);

/* 1 if digit n of the row equals n mod 10, 0 if not, -1 on error. */
int olab_row_is_n_modular(const olab_table* t, uint64_t row, uint64_t n);

/* One repair pass: synthesis 0 = strict window (may record failures),
 * 1 = synthesize replacements (rows may escape).  tie_seeded picks among the
 * first 16 candidate partners with the given seed instead of the first.
 * Returns the permuted window and the full trace as JSON. */
olab_status olab_permute_dmodular(const olab_table* t, int synthesis, int tie_seeded,
                                  uint64_t seed, olab_table** table_out, char** trace_json_out);

/* Members prefix+"1", prefix+"11", ... as a JSON array of fractions. */
olab_status olab_modular_family(const char* prefix_digits, uint64_t count, char** json_out);

/* n-th displaced-value family member: 0.(0123456789)^n then (45). */
olab_status olab_antidiagonal_family(uint64_t n, char** fraction_out);

/* 9^length, for length in 1..18. */
olab_status olab_count_avoiding_periods(unsigned length, uint64_t* out);

/* Before/after positions of a target fraction across window sizes under the
 * synthesis pass; JSON report. */
olab_status olab_displacement_track(const char* target, const char* enum_spec,
                                    const char* h_family, const uint64_t* windows,
                                    size_t window_count, char** report_json);

/* ---- harness ------------------------------------------------------------ */

/* Runs a full experiment from a JSON configuration, writing result files
 * atomically, and returns the run manifest as JSON. */
olab_status olab_run(const char* config_json, char** manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* OMEGALAB_H */

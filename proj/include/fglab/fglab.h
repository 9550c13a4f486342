/*
 * fglab C API: formal groups, truncated power series and torsion
 * computations over fixed-precision p-adic coefficient rings.
 *
 * All functions return fgl_status; FGL_OK means success.  On failure the
 * thread-local message from fgl_last_error() describes what went wrong and
 * no out-parameter is written.  Handles are freed with the matching
 * fgl_*_free; strings returned through char** with fgl_string_free.
 */
#ifndef FGLAB_H
#define FGLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fgl_series fgl_series; /* truncated power series document */
typedef struct fgl_group fgl_group;   /* validated formal group law */
typedef struct fgl_ring fgl_ring;     /* quotient ring (Z/p^N)[T]/(g) */
typedef struct fgl_elem fgl_elem;     /* element of an fgl_ring */

typedef enum fgl_status {
    FGL_OK = 0,
    FGL_ERR_PRECISION_EXHAUSTED = 1,
    FGL_ERR_NON_UNIT = 2,
    FGL_ERR_DENOMINATOR_CAP_EXCEEDED = 3,
    FGL_ERR_UNSUPPORTED_RING = 4,
    FGL_ERR_NEWTON_HYPOTHESIS_FAILED = 5,
    FGL_ERR_INNER_CONSTANT_TERM_NONZERO = 6,
    FGL_ERR_NON_UNIT_DERIVATIVE = 7,
    FGL_ERR_INFINITE_HEIGHT_AT_CAP = 8,
    FGL_ERR_DIVERGENT_EVALUATION = 9,
    FGL_ERR_INTEGRALITY_FAILURE = 10,
    FGL_ERR_NOT_COMMUTING = 11,
    FGL_ERR_RECONSTRUCTION_MISMATCH = 12,
    FGL_ERR_AXIOM_CHECK_FAILED = 13,
    FGL_ERR_SCHEMA = 14,
    FGL_ERR_USAGE = 15,
    FGL_ERR_CONFIG_MISMATCH = 16,
    FGL_ERR_BAD_ARGUMENT = 17,
    FGL_ERR_INTERNAL = 18
} fgl_status;

const char* fgl_version(void);
const char* fgl_status_name(fgl_status s);
const char* fgl_last_error(void);

void fgl_string_free(char* s);
void fgl_series_free(fgl_series* s);
void fgl_group_free(fgl_group* g);
void fgl_ring_free(fgl_ring* r);
void fgl_elem_free(fgl_elem* z);

/* -- series documents ---------------------------------------------------- */

fgl_status fgl_series_parse(const char* json, fgl_series** out);
fgl_status fgl_series_emit(const fgl_series* s, char** json_out);
fgl_status fgl_series_prec_floor(const fgl_series* s, int* out);
/* equal == 1 when the series agree modulo (p^prec, degree M+1); otherwise the
 * smallest offending exponent vector is reported as a JSON array. */
fgl_status fgl_series_equal_at(const fgl_series* a, const fgl_series* b, int prec, int* equal,
                               char** first_mismatch_json);

/* -- formal groups -------------------------------------------------------- */

/* name: "multiplicative" or "additive" */
fgl_status fgl_group_builtin(uint64_t p, int N, int D, int M, const char* name, fgl_group** out);
/* group with [f'(0)] = f, via the functional-equation recursion */
fgl_status fgl_group_from_lt(const fgl_series* f, fgl_group** out);
/* user-supplied law; group axioms are validated at the stated precision */
fgl_status fgl_group_from_law(const fgl_series* law, fgl_group** out);
/* returns a new handle carrying u as the registered stable endomorphism */
fgl_status fgl_group_register_endo(const fgl_group* g, const fgl_series* u, fgl_group** out);
fgl_status fgl_group_law(const fgl_group* g, fgl_series** law_out);
fgl_status fgl_group_height(const fgl_group* g, int* height, int* infinite_at_cap, int* known);

/* -- solvers and checks ---------------------------------------------------- */

/* linear: d decimal coefficient strings for L = c1*X1 + ... + cd*Xd.
 * budget_json (nullable) receives the precision budget of the solve. */
fgl_status fgl_lt_solve(const fgl_series* f, const fgl_series* g, const char* const* linear, size_t d,
                        fgl_series** out, char** budget_json);
fgl_status fgl_solve_commutant(const fgl_series* u, const char* const* linear, size_t d, fgl_series** out,
                               char** budget_json);
fgl_status fgl_mul_by(const fgl_group* g, const char* a_decimal, fgl_series** out, char** budget_json);
/* verdict: 0 stable, 1 unstable, 2 root_of_unity_at_precision */
fgl_status fgl_is_stable(const fgl_series* u, int* verdict);
fgl_status fgl_check_endomorphism(const fgl_group* g, const fgl_series* h, int* ok, char** detail_json);
fgl_status fgl_check_homomorphism(const fgl_group* F, const fgl_group* G, const fgl_series* h, int* ok,
                                  char** detail_json);
fgl_status fgl_conjugate_group(const fgl_group* F, const fgl_series* h, fgl_series** K_out);
/* result: {"scalars": [...], "checked_floor": n} */
fgl_status fgl_decompose_commuting(const fgl_group* F, const fgl_series* u, const fgl_series* h,
                                   char** result_json);
fgl_status fgl_formal_log(const fgl_group* F, fgl_series** log_out, char** budget_json);
fgl_status fgl_comp_inverse(const fgl_series* h, fgl_series** out);
fgl_status fgl_weierstrass_prep(const fgl_series* h, fgl_series** unit_out, fgl_series** dist_out, int* wdeg);
fgl_status fgl_iterate(const fgl_series* h, int k, fgl_series** out);

/* -- extension rings, points, torsion -------------------------------------- */

fgl_status fgl_ring_base(uint64_t p, int N, int D, int M, fgl_ring** out);
fgl_status fgl_ring_cyclotomic(uint64_t p, int N, int D, int M, int k, fgl_ring** out);
fgl_status fgl_elem_zero(const fgl_ring* r, fgl_elem** out);
fgl_status fgl_elem_generator(const fgl_ring* r, fgl_elem** out); /* T */
/* polynomial sum_i mantissa[i] * p^shift[i] * T^i, reduced modulo g */
fgl_status fgl_elem_from_poly(const fgl_ring* r, const char* const* mantissas, const int* shifts, size_t n,
                              fgl_elem** out);
fgl_status fgl_elem_emit(const fgl_elem* z, char** json_out);
/* exact == 0 means "valuation >= v" */
fgl_status fgl_elem_valuation(const fgl_elem* z, long* v, int* exact);
fgl_status fgl_eval_at(const fgl_series* h, const fgl_elem* z, fgl_elem** value, long* guaranteed);
fgl_status fgl_hensel_lift(const fgl_series* f, const fgl_elem* seed, long target, fgl_elem** out);
/* is_tors == 0 reports NotTorsionAtCap (a verdict, not a disproof) */
fgl_status fgl_is_torsion(const fgl_group* g, const fgl_elem* z, int max_level, int* is_tors, int* level,
                          long* guaranteed);

/* -- report-level commands -------------------------------------------------- */

fgl_status fgl_shared_torsion_demo(uint64_t p, int N, int D, int M, int n, char** report_json, int* all_pass);
fgl_status fgl_rigidity_witness(const fgl_group* g, const fgl_series* u, const fgl_series* h,
                                const fgl_elem* const* points, size_t npoints, int max_level,
                                char** report_json, int* all_pass);
fgl_status fgl_theorem_a_witness(const fgl_group* F, const fgl_group* G, const fgl_series* u,
                                 char** report_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* FGLAB_H */

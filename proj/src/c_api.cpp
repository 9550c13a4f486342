#include "fglab/fglab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "fglab/serialize.hpp"
#include "fglab/torsion.hpp"

struct fgl_series {
    fglab::TruncatedSeries v;
};
struct fgl_group {
    fglab::FormalGroup v;
};
struct fgl_ring {
    std::shared_ptr<const fglab::ExtRing> v;
};
struct fgl_elem {
    fglab::ExtElem v;
};

namespace {

thread_local std::string g_last_error;

fgl_status map_code(fglab::errc c) {
    using fglab::errc;
    switch (c) {
        case errc::ok: return FGL_OK;
        case errc::precision_exhausted: return FGL_ERR_PRECISION_EXHAUSTED;
        case errc::non_unit: return FGL_ERR_NON_UNIT;
        case errc::denominator_cap_exceeded: return FGL_ERR_DENOMINATOR_CAP_EXCEEDED;
        case errc::unsupported_ring: return FGL_ERR_UNSUPPORTED_RING;
        case errc::newton_hypothesis_failed: return FGL_ERR_NEWTON_HYPOTHESIS_FAILED;
        case errc::inner_constant_term_nonzero: return FGL_ERR_INNER_CONSTANT_TERM_NONZERO;
        case errc::non_unit_derivative: return FGL_ERR_NON_UNIT_DERIVATIVE;
        case errc::infinite_height_at_cap: return FGL_ERR_INFINITE_HEIGHT_AT_CAP;
        case errc::divergent_evaluation: return FGL_ERR_DIVERGENT_EVALUATION;
        case errc::integrality_failure: return FGL_ERR_INTEGRALITY_FAILURE;
        case errc::not_commuting: return FGL_ERR_NOT_COMMUTING;
        case errc::reconstruction_mismatch: return FGL_ERR_RECONSTRUCTION_MISMATCH;
        case errc::axiom_check_failed: return FGL_ERR_AXIOM_CHECK_FAILED;
        case errc::schema_error: return FGL_ERR_SCHEMA;
        case errc::usage_error: return FGL_ERR_USAGE;
        case errc::config_mismatch: return FGL_ERR_CONFIG_MISMATCH;
        case errc::bad_argument: return FGL_ERR_BAD_ARGUMENT;
    }
    return FGL_ERR_INTERNAL;
}

template <typename Fn>
fgl_status wrap(Fn&& fn) {
    try {
        fn();
        return FGL_OK;
    } catch (const fglab::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FGL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FGL_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

fgl_status need(bool cond, const char* what) {
    if (cond) return FGL_OK;
    g_last_error = std::string("BadArgument: ") + what;
    return FGL_ERR_BAD_ARGUMENT;
}

std::vector<fglab::PAdicNum> parse_linear(const fglab::PrimeConfig& cfg, const char* const* linear, size_t d) {
    if (!linear || d == 0) fglab::raise(fglab::errc::bad_argument, "linear form is empty");
    std::vector<fglab::PAdicNum> L;
    for (size_t i = 0; i < d; ++i) {
        if (!linear[i]) fglab::raise(fglab::errc::bad_argument, "null linear coefficient");
        L.push_back(fglab::PAdicNum::from_decimal(cfg, linear[i]));
    }
    return L;
}

fgl_status check_common(const fgl_group* F, const fgl_group* G, const fgl_series* h, int* ok,
                        char** detail_json) {
    return wrap([&] {
        fglab::CheckResult r = fglab::check_homomorphism(F->v, G->v, h->v);
        *ok = r.ok ? 1 : 0;
        if (detail_json) {
            fglab::ordered_json d{{"checked_floor", r.checked_floor}};
            if (r.first_failure) d["first_failure"] = *r.first_failure;
            *detail_json = dup_string(d.dump(2));
        }
    });
}

} // namespace

extern "C" {

const char* fgl_version(void) {
    return "0.1.0";
}

const char* fgl_status_name(fgl_status s) {
    switch (s) {
        case FGL_OK: return "Ok";
        case FGL_ERR_PRECISION_EXHAUSTED: return "PrecisionExhausted";
        case FGL_ERR_NON_UNIT: return "NonUnit";
        case FGL_ERR_DENOMINATOR_CAP_EXCEEDED: return "DenominatorCapExceeded";
        case FGL_ERR_UNSUPPORTED_RING: return "UnsupportedRing";
        case FGL_ERR_NEWTON_HYPOTHESIS_FAILED: return "NewtonHypothesisFailed";
        case FGL_ERR_INNER_CONSTANT_TERM_NONZERO: return "InnerConstantTermNonzero";
        case FGL_ERR_NON_UNIT_DERIVATIVE: return "NonUnitDerivative";
        case FGL_ERR_INFINITE_HEIGHT_AT_CAP: return "InfiniteHeightAtCap";
        case FGL_ERR_DIVERGENT_EVALUATION: return "DivergentEvaluation";
        case FGL_ERR_INTEGRALITY_FAILURE: return "IntegralityFailure";
        case FGL_ERR_NOT_COMMUTING: return "NotCommuting";
        case FGL_ERR_RECONSTRUCTION_MISMATCH: return "ReconstructionMismatch";
        case FGL_ERR_AXIOM_CHECK_FAILED: return "AxiomCheckFailed";
        case FGL_ERR_SCHEMA: return "SchemaError";
        case FGL_ERR_USAGE: return "UsageError";
        case FGL_ERR_CONFIG_MISMATCH: return "ConfigMismatch";
        case FGL_ERR_BAD_ARGUMENT: return "BadArgument";
        case FGL_ERR_INTERNAL: return "InternalError";
    }
    return "UnknownStatus";
}

const char* fgl_last_error(void) {
    return g_last_error.c_str();
}

void fgl_string_free(char* s) {
    std::free(s);
}
void fgl_series_free(fgl_series* s) {
    delete s;
}
void fgl_group_free(fgl_group* g) {
    delete g;
}
void fgl_ring_free(fgl_ring* r) {
    delete r;
}
void fgl_elem_free(fgl_elem* z) {
    delete z;
}

fgl_status fgl_series_parse(const char* json, fgl_series** out) {
    if (auto st = need(json && out, "fgl_series_parse: null argument")) return st;
    return wrap([&] { *out = new fgl_series{fglab::parse_series(json)}; });
}

fgl_status fgl_series_emit(const fgl_series* s, char** json_out) {
    if (auto st = need(s && json_out, "fgl_series_emit: null argument")) return st;
    return wrap([&] { *json_out = dup_string(fglab::emit_series(s->v)); });
}

fgl_status fgl_series_prec_floor(const fgl_series* s, int* out) {
    if (auto st = need(s && out, "fgl_series_prec_floor: null argument")) return st;
    *out = s->v.prec_floor();
    return FGL_OK;
}

fgl_status fgl_series_equal_at(const fgl_series* a, const fgl_series* b, int prec, int* equal,
                               char** first_mismatch_json) {
    if (auto st = need(a && b && equal, "fgl_series_equal_at: null argument")) return st;
    return wrap([&] {
        auto bad = fglab::series_first_mismatch(a->v, b->v, prec);
        *equal = bad ? 0 : 1;
        if (first_mismatch_json)
            *first_mismatch_json = bad ? dup_string(fglab::ordered_json(*bad).dump()) : nullptr;
    });
}

fgl_status fgl_group_builtin(uint64_t p, int N, int D, int M, const char* name, fgl_group** out) {
    if (auto st = need(name && out, "fgl_group_builtin: null argument")) return st;
    return wrap([&] {
        fglab::PrimeConfig cfg(p, N, D, M);
        std::string n(name);
        if (n == "multiplicative")
            *out = new fgl_group{fglab::FormalGroup::multiplicative(cfg)};
        else if (n == "additive")
            *out = new fgl_group{fglab::FormalGroup::additive(cfg)};
        else
            fglab::raise(fglab::errc::bad_argument, "unknown builtin group '" + n + "'");
    });
}

fgl_status fgl_group_from_lt(const fgl_series* f, fgl_group** out) {
    if (auto st = need(f && out, "fgl_group_from_lt: null argument")) return st;
    return wrap([&] { *out = new fgl_group{fglab::FormalGroup::from_lubin_tate(f->v)}; });
}

fgl_status fgl_group_from_law(const fgl_series* law, fgl_group** out) {
    if (auto st = need(law && out, "fgl_group_from_law: null argument")) return st;
    return wrap([&] { *out = new fgl_group{fglab::FormalGroup::from_law(law->v)}; });
}

fgl_status fgl_group_register_endo(const fgl_group* g, const fgl_series* u, fgl_group** out) {
    if (auto st = need(g && u && out, "fgl_group_register_endo: null argument")) return st;
    return wrap([&] { *out = new fgl_group{g->v.with_registered_endo(u->v)}; });
}

fgl_status fgl_group_law(const fgl_group* g, fgl_series** law_out) {
    if (auto st = need(g && law_out, "fgl_group_law: null argument")) return st;
    return wrap([&] { *law_out = new fgl_series{g->v.law()}; });
}

fgl_status fgl_group_height(const fgl_group* g, int* height, int* infinite_at_cap, int* known) {
    if (auto st = need(g && height && infinite_at_cap && known, "fgl_group_height: null argument")) return st;
    return wrap([&] {
        auto h = g->v.height();
        *known = h.known() ? 1 : 0;
        *infinite_at_cap = h.infinite_at_cap ? 1 : 0;
        *height = h.finite.value_or(-1);
    });
}

fgl_status fgl_lt_solve(const fgl_series* f, const fgl_series* g, const char* const* linear, size_t d,
                        fgl_series** out, char** budget_json) {
    if (auto st = need(f && g && out, "fgl_lt_solve: null argument")) return st;
    return wrap([&] {
        fglab::PrecisionBudget bud;
        auto L = parse_linear(f->v.config(), linear, d);
        auto r = fglab::lt_solve(f->v, g->v, L, &bud);
        if (budget_json) *budget_json = dup_string(fglab::budget_to_json(bud).dump(2));
        *out = new fgl_series{std::move(r)};
    });
}

fgl_status fgl_solve_commutant(const fgl_series* u, const char* const* linear, size_t d, fgl_series** out,
                               char** budget_json) {
    if (auto st = need(u && out, "fgl_solve_commutant: null argument")) return st;
    return wrap([&] {
        fglab::PrecisionBudget bud;
        auto L = parse_linear(u->v.config(), linear, d);
        auto r = fglab::solve_commutant(u->v, L, &bud);
        if (budget_json) *budget_json = dup_string(fglab::budget_to_json(bud).dump(2));
        *out = new fgl_series{std::move(r)};
    });
}

fgl_status fgl_mul_by(const fgl_group* g, const char* a_decimal, fgl_series** out, char** budget_json) {
    if (auto st = need(g && a_decimal && out, "fgl_mul_by: null argument")) return st;
    return wrap([&] {
        fglab::PrecisionBudget bud;
        auto a = fglab::PAdicNum::from_decimal(g->v.config(), a_decimal);
        auto e = fglab::mul_by(g->v, a, &bud);
        if (budget_json) *budget_json = dup_string(fglab::budget_to_json(bud).dump(2));
        *out = new fgl_series{std::move(e.series)};
    });
}

fgl_status fgl_is_stable(const fgl_series* u, int* verdict) {
    if (auto st = need(u && verdict, "fgl_is_stable: null argument")) return st;
    return wrap([&] {
        switch (fglab::is_stable(u->v)) {
            case fglab::Stability::stable: *verdict = 0; break;
            case fglab::Stability::unstable: *verdict = 1; break;
            case fglab::Stability::root_of_unity_at_precision: *verdict = 2; break;
        }
    });
}

fgl_status fgl_check_endomorphism(const fgl_group* g, const fgl_series* h, int* ok, char** detail_json) {
    if (auto st = need(g && h && ok, "fgl_check_endomorphism: null argument")) return st;
    return check_common(g, g, h, ok, detail_json);
}

fgl_status fgl_check_homomorphism(const fgl_group* F, const fgl_group* G, const fgl_series* h, int* ok,
                                  char** detail_json) {
    if (auto st = need(F && G && h && ok, "fgl_check_homomorphism: null argument")) return st;
    return check_common(F, G, h, ok, detail_json);
}

fgl_status fgl_conjugate_group(const fgl_group* F, const fgl_series* h, fgl_series** K_out) {
    if (auto st = need(F && h && K_out, "fgl_conjugate_group: null argument")) return st;
    return wrap([&] { *K_out = new fgl_series{fglab::conjugate_group(F->v, h->v)}; });
}

fgl_status fgl_decompose_commuting(const fgl_group* F, const fgl_series* u, const fgl_series* h,
                                   char** result_json) {
    if (auto st = need(F && u && h && result_json, "fgl_decompose_commuting: null argument")) return st;
    return wrap([&] {
        fglab::Decomposition dec = fglab::decompose_commuting(F->v, u->v, h->v);
        fglab::ordered_json scal = fglab::ordered_json::array();
        for (const auto& a : dec.scalars) scal.push_back(a.mantissa_decimal());
        fglab::ordered_json r{{"scalars", scal}, {"checked_floor", dec.checked_floor}};
        *result_json = dup_string(r.dump(2));
    });
}

fgl_status fgl_formal_log(const fgl_group* F, fgl_series** log_out, char** budget_json) {
    if (auto st = need(F && log_out, "fgl_formal_log: null argument")) return st;
    return wrap([&] {
        fglab::PrecisionBudget bud;
        auto l = fglab::formal_log(F->v, &bud);
        if (budget_json) *budget_json = dup_string(fglab::budget_to_json(bud).dump(2));
        *log_out = new fgl_series{std::move(l)};
    });
}

fgl_status fgl_comp_inverse(const fgl_series* h, fgl_series** out) {
    if (auto st = need(h && out, "fgl_comp_inverse: null argument")) return st;
    return wrap([&] { *out = new fgl_series{fglab::comp_inverse(h->v)}; });
}

fgl_status fgl_weierstrass_prep(const fgl_series* h, fgl_series** unit_out, fgl_series** dist_out,
                                int* wdeg) {
    if (auto st = need(h && wdeg, "fgl_weierstrass_prep: null argument")) return st;
    return wrap([&] {
        fglab::WeierstrassPrep wp = fglab::weierstrass_prep(h->v);
        *wdeg = wp.wdeg;
        if (unit_out) *unit_out = new fgl_series{std::move(wp.unit)};
        if (dist_out) *dist_out = new fgl_series{std::move(wp.distinguished)};
    });
}

fgl_status fgl_iterate(const fgl_series* h, int k, fgl_series** out) {
    if (auto st = need(h && out, "fgl_iterate: null argument")) return st;
    return wrap([&] { *out = new fgl_series{fglab::iterate(h->v, k)}; });
}

fgl_status fgl_ring_base(uint64_t p, int N, int D, int M, fgl_ring** out) {
    if (auto st = need(out != nullptr, "fgl_ring_base: null argument")) return st;
    return wrap([&] { *out = new fgl_ring{fglab::ExtRing::base(fglab::PrimeConfig(p, N, D, M))}; });
}

fgl_status fgl_ring_cyclotomic(uint64_t p, int N, int D, int M, int k, fgl_ring** out) {
    if (auto st = need(out != nullptr, "fgl_ring_cyclotomic: null argument")) return st;
    return wrap([&] { *out = new fgl_ring{fglab::ExtRing::cyclotomic(fglab::PrimeConfig(p, N, D, M), k)}; });
}

fgl_status fgl_elem_zero(const fgl_ring* r, fgl_elem** out) {
    if (auto st = need(r && out, "fgl_elem_zero: null argument")) return st;
    return wrap([&] { *out = new fgl_elem{fglab::ExtElem::zero(r->v)}; });
}

fgl_status fgl_elem_generator(const fgl_ring* r, fgl_elem** out) {
    if (auto st = need(r && out, "fgl_elem_generator: null argument")) return st;
    return wrap([&] { *out = new fgl_elem{fglab::ExtElem::generator(r->v)}; });
}

fgl_status fgl_elem_from_poly(const fgl_ring* r, const char* const* mantissas, const int* shifts, size_t n,
                              fgl_elem** out) {
    if (auto st = need(r && mantissas && out, "fgl_elem_from_poly: null argument")) return st;
    return wrap([&] {
        const auto& cfg = r->v->config();
        std::vector<fglab::PAdicNum> c;
        for (size_t i = 0; i < n; ++i) {
            if (!mantissas[i]) fglab::raise(fglab::errc::bad_argument, "null mantissa");
            fglab::PAdicNum x = fglab::PAdicNum::from_decimal(cfg, mantissas[i]);
            if (shifts && shifts[i] != 0)
                x = fglab::PAdicNum::from_parts(cfg, x.mantissa(), x.shift() + shifts[i], x.prec());
            c.push_back(std::move(x));
        }
        *out = new fgl_elem{fglab::ExtElem::from_coeffs(r->v, std::move(c))};
    });
}

fgl_status fgl_elem_emit(const fgl_elem* z, char** json_out) {
    if (auto st = need(z && json_out, "fgl_elem_emit: null argument")) return st;
    return wrap([&] { *json_out = dup_string(fglab::elem_to_json(z->v).dump(2)); });
}

fgl_status fgl_elem_valuation(const fgl_elem* z, long* v, int* exact) {
    if (auto st = need(z && v && exact, "fgl_elem_valuation: null argument")) return st;
    return wrap([&] {
        fglab::ExtVal val = z->v.valuation();
        *v = val.v;
        *exact = val.exact ? 1 : 0;
    });
}

fgl_status fgl_eval_at(const fgl_series* h, const fgl_elem* z, fgl_elem** value, long* guaranteed) {
    if (auto st = need(h && z && value && guaranteed, "fgl_eval_at: null argument")) return st;
    return wrap([&] {
        fglab::EvalResult r = fglab::eval_at(h->v, z->v);
        *guaranteed = r.guaranteed_val_prec;
        *value = new fgl_elem{std::move(r.value)};
    });
}

fgl_status fgl_hensel_lift(const fgl_series* f, const fgl_elem* seed, long target, fgl_elem** out) {
    if (auto st = need(f && seed && out, "fgl_hensel_lift: null argument")) return st;
    return wrap([&] { *out = new fgl_elem{fglab::hensel_lift(f->v, seed->v, target)}; });
}

fgl_status fgl_is_torsion(const fgl_group* g, const fgl_elem* z, int max_level, int* is_tors, int* level,
                          long* guaranteed) {
    if (auto st = need(g && z && is_tors, "fgl_is_torsion: null argument")) return st;
    return wrap([&] {
        fglab::TorsionResult r = fglab::is_torsion(g->v, z->v, max_level);
        *is_tors = r.is_torsion ? 1 : 0;
        if (level) *level = r.is_torsion ? r.certificate->level : -1;
        if (guaranteed) *guaranteed = r.is_torsion ? r.certificate->guaranteed_val_prec : 0;
    });
}

fgl_status fgl_shared_torsion_demo(uint64_t p, int N, int D, int M, int n, char** report_json,
                                   int* all_pass) {
    if (auto st = need(report_json && all_pass, "fgl_shared_torsion_demo: null argument")) return st;
    return wrap([&] {
        fglab::Report rep = fglab::shared_torsion_demo(fglab::PrimeConfig(p, N, D, M), n);
        *report_json = dup_string(rep.to_json_string());
        *all_pass = rep.all_pass() ? 1 : 0;
    });
}

fgl_status fgl_rigidity_witness(const fgl_group* g, const fgl_series* u, const fgl_series* h,
                                const fgl_elem* const* points, size_t npoints, int max_level,
                                char** report_json, int* all_pass) {
    if (auto st = need(g && u && h && report_json && all_pass, "fgl_rigidity_witness: null argument"))
        return st;
    return wrap([&] {
        std::vector<fglab::ExtElem> pts;
        for (size_t i = 0; i < npoints; ++i) {
            if (!points || !points[i]) fglab::raise(fglab::errc::bad_argument, "null sample point");
            pts.push_back(points[i]->v);
        }
        fglab::Report rep = fglab::rigidity_witness(g->v, u->v, h->v, pts, max_level);
        *report_json = dup_string(rep.to_json_string());
        *all_pass = rep.all_pass() ? 1 : 0;
    });
}

fgl_status fgl_theorem_a_witness(const fgl_group* F, const fgl_group* G, const fgl_series* u,
                                 char** report_json, int* all_pass) {
    if (auto st = need(F && G && u && report_json && all_pass, "fgl_theorem_a_witness: null argument"))
        return st;
    return wrap([&] {
        fglab::Report rep = fglab::theorem_a_witness(F->v, G->v, u->v);
        *report_json = dup_string(rep.to_json_string());
        *all_pass = rep.all_pass() ? 1 : 0;
    });
}

} // extern "C"

#include "fglab/formal_group.hpp"

#include <algorithm>
#include <sstream>

namespace fglab {

namespace {

std::string exps_to_string(const std::vector<int>& e) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ")";
    return os.str();
}

TruncatedSeries linear_form_series(const PrimeConfig& cfg, const std::vector<PAdicNum>& coeffs, int floor) {
    const int d = static_cast<int>(coeffs.size());
    SeriesBuilder b(cfg, d, floor);
    for (int i = 0; i < d; ++i) {
        std::vector<int> e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] = 1;
        b.add(*b.basis().index(e), coeffs[static_cast<std::size_t>(i)]);
    }
    return std::move(b).finish(TailModel::integral);
}

std::vector<TruncatedSeries> diagonal_inners(const TruncatedSeries& u, int d) {
    std::vector<TruncatedSeries> inners;
    inners.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) inners.push_back(u.embed(d, i));
    return inners;
}

void check_linear_form(const std::vector<PAdicNum>& L) {
    if (L.empty()) raise(errc::bad_argument, "linear form needs at least one coefficient");
    for (const auto& c : L)
        if (c.shift() < 0) raise(errc::bad_argument, "linear form coefficients must be integral");
}

} // namespace

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::root_of_unity_at_precision: return "root_of_unity_at_precision";
    }
    return "?";
}

const char* provenance_name(GroupProvenance p) {
    switch (p) {
        case GroupProvenance::multiplicative: return "multiplicative";
        case GroupProvenance::additive: return "additive";
        case GroupProvenance::lubin_tate: return "lubin_tate";
        case GroupProvenance::user_supplied: return "user_supplied";
    }
    return "?";
}

Stability is_stable(const TruncatedSeries& u) {
    if (u.vars() != 1) raise(errc::bad_argument, "stability is defined for one-variable series");
    if (!u.constant_term_zero()) raise(errc::bad_argument, "stability needs u(0) = 0");
    const PAdicNum a = u.coeff({1});
    if (a.is_zero_at_prec()) return Stability::unstable;
    if (*a.valuation() > 0) return Stability::stable; // not a unit, hence not a root of unity
    const auto& cfg = u.config();
    unsigned long e = cfg.p() == 2 ? 2 : static_cast<unsigned long>(cfg.p() - 1);
    PAdicNum t = a.pow_int(e);
    if (t.equal_at(PAdicNum::one(cfg).reduce_to(t.prec()), t.prec()))
        return Stability::root_of_unity_at_precision;
    return Stability::stable;
}

// -- rigidity solver ---------------------------------------------------------

TruncatedSeries solve_commutant(const TruncatedSeries& u, const std::vector<PAdicNum>& linear_form,
                                PrecisionBudget* budget) {
    check_linear_form(linear_form);
    Stability st = is_stable(u);
    if (st != Stability::stable)
        raise(errc::bad_argument, std::string("solve_commutant needs a stable series, got ") + stability_name(st));
    const auto& cfg = u.config();
    const int M = cfg.degree_cap();
    const int d = static_cast<int>(linear_form.size());
    const PAdicNum a = u.coeff({1});

    int floor = u.prec_floor();
    for (const auto& c : linear_form) floor = std::min(floor, c.prec());

    PrecisionBudget bud;
    bud.input_floor = floor;
    bud.internal_precision = floor;

    TruncatedSeries h = linear_form_series(cfg, linear_form, floor);
    auto inners = diagonal_inners(u, d);
    for (int m = 2; m <= M; ++m) {
        PAdicNum delta = a - a.pow_int(static_cast<unsigned long>(m));
        auto vd = delta.valuation();
        if (!vd)
            raise(errc::precision_exhausted,
                  "u'(0) - u'(0)^" + std::to_string(m) + " vanishes at the working precision");
        bud.losses.emplace_back(m, *vd);

        TruncatedSeries defect = compose(h, std::span<const TruncatedSeries>(inners)) - compose(u, {h});
        TruncatedSeries num = defect.homogeneous_part(m);
        int new_floor = h.prec_floor() - static_cast<int>(*vd);
        if (new_floor < 1)
            raise(errc::precision_exhausted, "commutant solve ran out of digits at degree " + std::to_string(m));
        if (!num.is_zero()) {
            SeriesBuilder corr(cfg, d, new_floor);
            for (std::size_t i = 0; i < num.coeffs().size(); ++i) {
                const PAdicNum& c = num.coeff_at(i);
                if (c.is_zero_at_prec()) continue;
                try {
                    corr.add(i, c.divide_integral(delta));
                } catch (const Error& err) {
                    if (err.code() == errc::integrality_failure)
                        raise(errc::integrality_failure,
                              "no integral commutant with this linear part (degree " + std::to_string(m) +
                                  ", exponent " + exps_to_string(num.basis().exponents(i)) + ")");
                    throw;
                }
            }
            h = h + std::move(corr).finish(TailModel::integral);
        }
        h = h.reduce_to(new_floor);
    }
    bud.output_floor = h.prec_floor();
    if (budget) *budget = bud;
    return h;
}

TruncatedSeries lt_solve(const TruncatedSeries& f, const TruncatedSeries& g,
                         const std::vector<PAdicNum>& linear_form, PrecisionBudget* budget) {
    check_linear_form(linear_form);
    if (f.vars() != 1 || g.vars() != 1) raise(errc::bad_argument, "lt_solve needs one-variable f and g");
    if (!f.constant_term_zero() || !g.constant_term_zero())
        raise(errc::bad_argument, "lt_solve needs f(0) = g(0) = 0");
    if (!(f.config() == g.config())) raise(errc::config_mismatch, "f and g use different configs");
    const auto& cfg = f.config();
    const int M = cfg.degree_cap();
    const int d = static_cast<int>(linear_form.size());

    const PAdicNum pif = f.coeff({1});
    const PAdicNum pig = g.coeff({1});
    if (pif.is_zero_at_prec() || pig.is_zero_at_prec())
        raise(errc::bad_argument, "lt_solve needs nonzero linear coefficients");
    if (!pif.equal_at(pig, std::min(pif.prec(), pig.prec())))
        raise(errc::bad_argument, "lt_solve needs f'(0) = g'(0)");
    const long vpi = *pif.valuation();
    if (vpi < 1) raise(errc::bad_argument, "lt_solve needs val(f'(0)) >= 1");
    if (!weierstrass_degree(f) || !weierstrass_degree(g))
        raise(errc::bad_argument, "lt_solve needs finite Weierstrass degree mod p");

    int base_floor = std::min(f.prec_floor(), g.prec_floor());
    for (const auto& c : linear_form) base_floor = std::min(base_floor, c.prec());

    // Each degree step divides by pi - pi^m and loses val(pi) digits; run the
    // recursion with that many guard digits so the declared floor survives.
    const long total_loss = static_cast<long>(M - 1) * vpi;
    PrimeConfig boosted = cfg.with_precision(base_floor + static_cast<int>(total_loss) + 2);

    PrecisionBudget bud;
    bud.input_floor = base_floor;
    bud.internal_precision = boosted.precision();

    TruncatedSeries fB = f.lift_to(boosted);
    TruncatedSeries gB = g.lift_to(boosted);
    std::vector<PAdicNum> LB;
    LB.reserve(linear_form.size());
    for (const auto& c : linear_form) LB.push_back(c.lift_to(boosted));
    const PAdicNum piB = fB.coeff({1});

    TruncatedSeries phi = linear_form_series(boosted, LB, boosted.precision());
    auto inners = diagonal_inners(fB, d);
    for (int m = 2; m <= M; ++m) {
        PAdicNum delta = piB - piB.pow_int(static_cast<unsigned long>(m));
        bud.losses.emplace_back(m, *delta.valuation());
        TruncatedSeries defect = compose(phi, std::span<const TruncatedSeries>(inners)) - compose(gB, {phi});
        TruncatedSeries num = defect.homogeneous_part(m);
        if (num.is_zero()) continue;
        SeriesBuilder corr(boosted, d, num.prec_floor() - static_cast<int>(*delta.valuation()));
        for (std::size_t i = 0; i < num.coeffs().size(); ++i) {
            const PAdicNum& c = num.coeff_at(i);
            if (c.is_zero_at_prec()) continue;
            try {
                corr.add(i, c.divide_integral(delta));
            } catch (const Error& err) {
                if (err.code() == errc::integrality_failure)
                    raise(errc::integrality_failure,
                          "no integral solution for this (f, g, L) triple (degree " + std::to_string(m) +
                              ", exponent " + exps_to_string(num.basis().exponents(i)) + ")");
                throw;
            }
        }
        phi = phi + std::move(corr).finish(TailModel::integral);
    }
    // The guard digits cover the accumulated losses; rebase to the base config.
    TruncatedSeries rebased = phi.lift_to(cfg);
    TruncatedSeries result = rebased.reduce_to(std::min(base_floor, rebased.prec_floor()));
    bud.output_floor = result.prec_floor();
    if (budget) *budget = bud;
    return result;
}

// -- formal groups -----------------------------------------------------------

namespace {

void validate_law(const TruncatedSeries& law) {
    const auto& cfg = law.config();
    if (law.vars() != 2) raise(errc::axiom_check_failed, "a group law is a 2-variable series");
    const int floor = law.prec_floor();
    if (!law.constant_term_zero()) raise(errc::axiom_check_failed, "law(0,0) != 0");
    if (!law.coeff({1, 0}).equal_at(PAdicNum::one(cfg).reduce_to(floor), floor) ||
        !law.coeff({0, 1}).equal_at(PAdicNum::one(cfg).reduce_to(floor), floor))
        raise(errc::axiom_check_failed, "law != X + Y mod degree 2");

    // law(X, 0) = X
    TruncatedSeries lx = law.at_zero(1).project_to_single_var(0);
    TruncatedSeries x1 = TruncatedSeries::variable(cfg, 1, 0).reduce_to(floor);
    if (auto bad = series_first_mismatch(lx, x1, std::min(lx.prec_floor(), floor)))
        raise(errc::axiom_check_failed, "law(X,0) != X at exponent " + exps_to_string(*bad));

    // commutativity: coefficient symmetry
    for (std::size_t i = 0; i < law.coeffs().size(); ++i) {
        const auto& e = law.basis().exponents(i);
        std::vector<int> swapped{e[1], e[0]};
        if (!law.coeff_at(i).equal_at(law.coeff(swapped), floor))
            raise(errc::axiom_check_failed, "law is not commutative at exponent " + exps_to_string(e));
    }

    // associativity: law(law(X,Y), Z) = law(X, law(Y,Z))
    TruncatedSeries left = compose(law, {law.embed(3, 0), TruncatedSeries::variable(cfg, 3, 2)});
    TruncatedSeries right = compose(law, {TruncatedSeries::variable(cfg, 3, 0), law.embed(3, 1)});
    int cmp_floor = std::min(left.prec_floor(), right.prec_floor());
    if (auto bad = series_first_mismatch(left, right, cmp_floor))
        raise(errc::axiom_check_failed, "law is not associative at exponent " + exps_to_string(*bad));
}

} // namespace

FormalGroup FormalGroup::multiplicative(const PrimeConfig& cfg) {
    TruncatedSeries law = TruncatedSeries::from_terms(
        cfg, 2, cfg.precision(),
        {{{1, 0}, PAdicNum::one(cfg)}, {{0, 1}, PAdicNum::one(cfg)}, {{1, 1}, PAdicNum::one(cfg)}});
    return FormalGroup(std::move(law), GroupProvenance::multiplicative);
}

FormalGroup FormalGroup::additive(const PrimeConfig& cfg) {
    TruncatedSeries law = TruncatedSeries::from_terms(
        cfg, 2, cfg.precision(), {{{1, 0}, PAdicNum::one(cfg)}, {{0, 1}, PAdicNum::one(cfg)}});
    return FormalGroup(std::move(law), GroupProvenance::additive);
}

FormalGroup FormalGroup::from_lubin_tate(const TruncatedSeries& f) {
    const auto& cfg = f.config();
    std::vector<PAdicNum> L{PAdicNum::one(cfg), PAdicNum::one(cfg)};
    TruncatedSeries law = lt_solve(f, f, L);
    validate_law(law);
    FormalGroup g(std::move(law), GroupProvenance::lubin_tate);
    g.lt_f_ = f;
    return g;
}

FormalGroup FormalGroup::from_law(const TruncatedSeries& law) {
    validate_law(law);
    return FormalGroup(law, GroupProvenance::user_supplied);
}

FormalGroup FormalGroup::with_registered_endo(const TruncatedSeries& u) const {
    Endomorphism e = make_endomorphism(*this, u);
    if (e.stability != Stability::stable)
        raise(errc::bad_argument, "registered endomorphism must be stable");
    FormalGroup g = *this;
    g.registered_u_ = u;
    return g;
}

FormalGroup::Height FormalGroup::height() const {
    std::optional<TruncatedSeries> mul_p;
    const PAdicNum p = PAdicNum::from_integer(config(), static_cast<long>(config().p()));
    switch (prov_) {
        case GroupProvenance::multiplicative:
        case GroupProvenance::additive:
        case GroupProvenance::lubin_tate:
            mul_p = mul_by(*this, p).series;
            break;
        case GroupProvenance::user_supplied:
            if (registered_u_) mul_p = mul_by(*this, p).series;
            break;
    }
    if (!mul_p) return {};
    auto wd = weierstrass_degree(*mul_p);
    if (!wd) return Height{std::nullopt, true};
    int h = 0;
    bigint pw = 1;
    while (pw < *wd) {
        pw *= config().p();
        ++h;
    }
    if (pw != *wd)
        raise(errc::axiom_check_failed,
              "[p] has Weierstrass degree " + std::to_string(*wd) + ", not a power of p");
    return Height{h, false};
}

Endomorphism mul_by(const FormalGroup& F, const PAdicNum& a, PrecisionBudget* budget) {
    const auto& cfg = F.config();
    const int M = cfg.degree_cap();
    TruncatedSeries series = TruncatedSeries::zero(cfg, 1);
    PrecisionBudget bud;
    switch (F.provenance()) {
        case GroupProvenance::additive: {
            series = TruncatedSeries::variable(cfg, 1, 0).scaled(a);
            bud.input_floor = bud.internal_precision = bud.output_floor = series.prec_floor();
            break;
        }
        case GroupProvenance::multiplicative: {
            // (1+X)^a - 1 via p-adic binomials, with guard digits for the
            // divisions by k.
            const long loss = factorial_valuation(cfg.p(), static_cast<unsigned long>(M));
            const int base_floor = std::min(cfg.precision(), a.prec());
            PrimeConfig boosted = cfg.with_precision(base_floor + static_cast<int>(loss) + 2);
            PAdicNum aB = a.lift_to(boosted);
            SeriesBuilder b(boosted, 1, boosted.precision());
            PAdicNum coef = aB;
            b.add(*b.basis().index({1}), coef);
            for (int k = 2; k <= M; ++k) {
                PAdicNum factor = aB - PAdicNum::from_integer(boosted, static_cast<long>(k - 1));
                coef = (coef * factor).divide_integral(PAdicNum::from_integer(boosted, static_cast<long>(k)));
                if (coef.is_zero_at_prec()) continue;
                b.add(*b.basis().index({k}), coef);
            }
            TruncatedSeries rebased = std::move(b).finish(TailModel::integral).lift_to(cfg);
            series = rebased.reduce_to(std::min(base_floor, rebased.prec_floor()));
            bud.input_floor = base_floor;
            bud.internal_precision = boosted.precision();
            bud.output_floor = series.prec_floor();
            break;
        }
        case GroupProvenance::lubin_tate:
            series = lt_solve(*F.lt_series(), *F.lt_series(), {a}, &bud);
            break;
        case GroupProvenance::user_supplied: {
            if (!F.registered_endo())
                raise(errc::bad_argument,
                      "a stable endomorphism must be registered before solving on a user-supplied group");
            series = solve_commutant(*F.registered_endo(), {a}, &bud);
            break;
        }
    }
    if (budget) *budget = bud;
    Endomorphism e = make_endomorphism(F, series);
    return e;
}

Endomorphism make_endomorphism(const FormalGroup& F, const TruncatedSeries& h) {
    if (h.vars() != 1) raise(errc::bad_argument, "an endomorphism series has one variable");
    if (!h.constant_term_zero()) raise(errc::bad_argument, "an endomorphism series has h(0) = 0");
    CheckResult r = check_endomorphism(F, h);
    if (!r.ok)
        raise(errc::axiom_check_failed,
              "endomorphism identity fails at exponent " + exps_to_string(*r.first_failure));
    return Endomorphism{h, h.coeff({1}), is_stable(h)};
}

CheckResult check_endomorphism(const FormalGroup& F, const TruncatedSeries& h) {
    return check_homomorphism(F, F, h);
}

CheckResult check_homomorphism(const FormalGroup& F, const FormalGroup& G, const TruncatedSeries& h) {
    if (h.vars() != 1) raise(errc::bad_argument, "a homomorphism series has one variable");
    if (!h.constant_term_zero()) raise(errc::bad_argument, "a homomorphism series has h(0) = 0");
    if (!(F.config() == G.config())) raise(errc::config_mismatch, "groups use different configs");
    TruncatedSeries lhs = compose(h, {F.law()});
    TruncatedSeries rhs = compose(G.law(), {h.embed(2, 0), h.embed(2, 1)});
    int floor = std::min(lhs.prec_floor(), rhs.prec_floor());
    auto bad = series_first_mismatch(lhs, rhs, floor);
    return CheckResult{!bad.has_value(), bad, floor};
}

TruncatedSeries conjugate_group(const FormalGroup& F, const TruncatedSeries& h) {
    if (h.vars() != 1 || !h.constant_term_zero())
        raise(errc::bad_argument, "conjugation needs a one-variable series with h(0) = 0");
    TruncatedSeries hinv = comp_inverse(h);
    TruncatedSeries inner = compose(F.law(), {hinv.embed(2, 0), hinv.embed(2, 1)});
    return compose(h, {inner});
}

Decomposition decompose_commuting(const FormalGroup& F, const TruncatedSeries& u, const TruncatedSeries& h) {
    if (!h.constant_term_zero()) raise(errc::bad_argument, "decomposition needs h(0) = 0");
    Endomorphism ue = make_endomorphism(F, u);
    if (ue.stability != Stability::stable) raise(errc::bad_argument, "u must be a stable endomorphism");
    const int d = h.vars();

    auto inners = diagonal_inners(u, d);
    TruncatedSeries lhs = compose(h, std::span<const TruncatedSeries>(inners));
    TruncatedSeries rhs = compose(u, {h});
    int floor = std::min(lhs.prec_floor(), rhs.prec_floor());
    if (auto bad = series_first_mismatch(lhs, rhs, floor))
        raise(errc::not_commuting, "h does not commute with u at exponent " + exps_to_string(*bad));

    Decomposition out;
    out.checked_floor = floor;
    for (int i = 0; i < d; ++i) {
        TruncatedSeries hi = h;
        for (int j = 0; j < d; ++j)
            if (j != i) hi = hi.at_zero(j);
        TruncatedSeries hi1 = hi.project_to_single_var(i);
        PAdicNum ai = hi1.coeff({1});
        out.parts.push_back(mul_by(F, ai));
        out.scalars.push_back(ai);
    }

    // rebuild [a_1](X_1) (+) ... (+) [a_d](X_d) and compare
    TruncatedSeries rebuilt = out.parts[0].series.embed(d, 0);
    for (int i = 1; i < d; ++i)
        rebuilt = compose(F.law(), {rebuilt, out.parts[static_cast<std::size_t>(i)].series.embed(d, i)});
    int cmp_floor = std::min(h.prec_floor(), rebuilt.prec_floor());
    out.checked_floor = std::min(out.checked_floor, cmp_floor);
    if (auto bad = series_first_mismatch(h, rebuilt, cmp_floor))
        raise(errc::reconstruction_mismatch,
              "h differs from the rebuilt direct sum at exponent " + exps_to_string(*bad));
    return out;
}

TruncatedSeries formal_log(const FormalGroup& F, PrecisionBudget* budget) {
    const auto& cfg = F.config();
    const int M = cfg.degree_cap();
    {
        int need = 0; // floor(log_p M)
        bigint pw = cfg.p();
        while (pw <= M) {
            pw *= cfg.p();
            ++need;
        }
        if (cfg.den_cap() < need)
            raise(errc::denominator_cap_exceeded,
                  "formal_log needs denominator cap D >= floor(log_p M) = " + std::to_string(need));
    }

    TruncatedSeries w = derivative(F.law(), 1).at_zero(1).project_to_single_var(0);
    TruncatedSeries winv = series_inv_unit(w); // Log' = (dF/dY(X,0))^{-1}

    PrecisionBudget bud;
    bud.input_floor = F.law().prec_floor();
    bud.internal_precision = winv.prec_floor();

    SeriesBuilder b(cfg, 1, winv.prec_floor());
    for (int k = 0; k < M; ++k) {
        const PAdicNum& c = winv.coeff({k});
        if (c.is_zero_at_prec()) continue;
        PAdicNum div = PAdicNum::from_integer(cfg, static_cast<long>(k + 1));
        PAdicNum q = c.divide_exact(div);
        if (q.prec() < c.prec()) bud.losses.emplace_back(k + 1, c.prec() - q.prec());
        b.add(*b.basis().index({k + 1}), q);
    }
    TruncatedSeries log = std::move(b).finish(TailModel::log_denominators);
    bud.output_floor = log.prec_floor();
    if (budget) *budget = bud;
    return log;
}

TruncatedSeries law_sum(const FormalGroup& F, int d) {
    if (d < 1) raise(errc::bad_argument, "law_sum needs d >= 1");
    TruncatedSeries cur = TruncatedSeries::variable(F.config(), d, 0);
    for (int i = 1; i < d; ++i)
        cur = compose(F.law(), {cur, TruncatedSeries::variable(F.config(), d, i)});
    return cur;
}

} // namespace fglab

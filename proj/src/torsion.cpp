#include "fglab/torsion.hpp"

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

} // namespace

TruncatedSeries iterate(const TruncatedSeries& h, int k) {
    if (h.vars() != 1) raise(errc::bad_argument, "iteration needs a one-variable series");
    if (!h.constant_term_zero()) raise(errc::bad_argument, "iteration needs h(0) = 0");
    if (k < 0) raise(errc::bad_argument, "iteration count must be >= 0");
    TruncatedSeries r = TruncatedSeries::variable(h.config(), 1, 0);
    for (int i = 0; i < k; ++i) r = compose1(h, r);
    return r;
}

OrbitResult iterate_at(const TruncatedSeries& h, const ExtElem& z, int k) {
    if (k < 0) raise(errc::bad_argument, "iteration count must be >= 0");
    OrbitResult out{z, z.precision_floor(), {}};
    for (int i = 0; i < k; ++i) {
        EvalResult step = eval_at(h, out.value);
        out.value = std::move(step.value);
        out.guaranteed_val_prec = std::min(out.guaranteed_val_prec, step.guaranteed_val_prec);
        out.step_guarantees.push_back(step.guaranteed_val_prec);
    }
    return out;
}

TorsionResult is_torsion_with(const TruncatedSeries& mul_p_series, const ExtElem& z, int max_level) {
    ExtVal v0 = z.valuation();
    if (v0.exact && v0.v < 1) raise(errc::divergent_evaluation, "point must lie in the maximal ideal");
    // level 0: the point itself is 0 at its own representation precision
    if (v0.at_least(z.precision_floor()) && !v0.exact)
        return TorsionResult{true, TorsionCertificate{z, 0, z.precision_floor(), {}}, 0};

    ExtElem cur = z;
    std::vector<long> guarantees;
    for (int k = 1; k <= max_level; ++k) {
        EvalResult step = eval_at(mul_p_series, cur);
        cur = std::move(step.value);
        guarantees.push_back(step.guaranteed_val_prec);
        ExtVal v = cur.valuation();
        if (v.at_least(step.guaranteed_val_prec))
            return TorsionResult{true, TorsionCertificate{cur, k, step.guaranteed_val_prec, guarantees}, k};
    }
    return TorsionResult{false, std::nullopt, max_level};
}

TorsionResult is_torsion(const FormalGroup& F, const ExtElem& z, int max_level) {
    PAdicNum p = PAdicNum::from_integer(F.config(), static_cast<long>(F.config().p()));
    return is_torsion_with(mul_by(F, p).series, z, max_level);
}

TruncatedSeries one_plus_x_pow_minus_one(const PrimeConfig& cfg, unsigned long m) {
    if (static_cast<long>(m) > cfg.degree_cap())
        raise(errc::bad_argument, "(1+X)^m - 1 does not fit the degree cap");
    std::vector<std::pair<std::vector<int>, PAdicNum>> terms;
    bigint c = 1;
    for (unsigned long k = 1; k <= m; ++k) {
        c = c * (m - k + 1) / k;
        terms.push_back({{static_cast<int>(k)}, PAdicNum::from_integer(cfg, c)});
    }
    return TruncatedSeries::from_terms(cfg, 1, cfg.precision(), terms);
}

SharedTorsionSeries shared_torsion_series(const PrimeConfig& cfg, int n) {
    if (n < 1) raise(errc::bad_argument, "shared-torsion level n must be >= 1");
    const std::uint64_t p = cfg.p();
    unsigned long pn = 1;
    for (int i = 0; i < n; ++i) {
        if (pn > 1000000000UL) raise(errc::bad_argument, "p^n is far beyond any usable degree cap");
        pn *= static_cast<unsigned long>(p);
    }
    const long deg_f = static_cast<long>(pn) + static_cast<long>(p) - 1;
    if (deg_f > cfg.degree_cap())
        raise(errc::bad_argument, "degree cap M=" + std::to_string(cfg.degree_cap()) +
                                      " is below deg f = p^n + p - 1 = " + std::to_string(deg_f));

    TruncatedSeries q = one_plus_x_pow_minus_one(cfg, static_cast<unsigned long>(p));
    // u = 1 + p*((1+X)^(p^n) - 1)/q(X) = 1 + p*sum_{j < p^(n-1)} (1+X)^(p*j).
    // This is the series with u(0) = 1+p^n and u == 1 mod p whose value at
    // zeta_{p^k}-1 is 1 for 2 <= k <= n, so f = u*q has f'(0) = p(1+p^n),
    // f == X^p mod p, and f(zeta_{p^k}-1) = zeta_{p^(k-1)}-1 along the chain.
    std::vector<bigint> ucoeffs(pn - static_cast<unsigned long>(p) + 1, 0);
    ucoeffs[0] = 1;
    for (unsigned long j = 0; j < pn / static_cast<unsigned long>(p); ++j) {
        bigint c = 1;
        ucoeffs[0] += p;
        for (unsigned long k = 1; k <= j * static_cast<unsigned long>(p); ++k) {
            c = c * (j * p - k + 1) / k;
            ucoeffs[k] += p * c;
        }
    }
    std::vector<std::pair<std::vector<int>, PAdicNum>> uterms;
    for (std::size_t k = 0; k < ucoeffs.size(); ++k)
        if (ucoeffs[k] != 0) uterms.push_back({{static_cast<int>(k)}, PAdicNum::from_integer(cfg, ucoeffs[k])});
    TruncatedSeries u = TruncatedSeries::from_terms(cfg, 1, cfg.precision(), uterms);
    TruncatedSeries f = u * q;
    return SharedTorsionSeries{std::move(q), std::move(u), std::move(f)};
}

Report shared_torsion_demo(const PrimeConfig& cfg, int n) {
    const std::uint64_t p = cfg.p();
    SharedTorsionSeries sts = shared_torsion_series(cfg, n);
    Report rep("shared-torsion", cfg);
    rep.data()["n"] = n;
    rep.data()["f"] = series_to_json(sts.f);

    // f'(0) = p(1 + p^n)
    bigint pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    PAdicNum expected_pi = PAdicNum::from_integer(cfg, bigint(p) * (1 + pn));
    PAdicNum actual_pi = sts.f.coeff({1});
    rep.add_verdict("f_linear_coefficient", actual_pi.equal_at(expected_pi, actual_pi.prec()),
                    ordered_json{{"expected", expected_pi.mantissa_decimal()},
                                 {"actual", actual_pi.mantissa_decimal()}});

    FormalGroup F = FormalGroup::from_lubin_tate(sts.f);
    rep.add_verdict("group_axioms", true, ordered_json{{"law_floor", F.law().prec_floor()}});
    rep.data()["law"] = series_to_json(F.law());
    FormalGroup Gm = FormalGroup::multiplicative(cfg);

    // the two laws differ at an explicit coefficient
    {
        int floor = std::min(F.law().prec_floor(), Gm.law().prec_floor());
        auto bad = series_first_mismatch(F.law(), Gm.law(), floor);
        ordered_json detail;
        if (bad) {
            detail["exponent"] = *bad;
            detail["coeff_f_group"] = F.law().coeff(*bad).mantissa_decimal();
            detail["coeff_multiplicative"] = Gm.law().coeff(*bad).mantissa_decimal();
            detail["compared_floor"] = floor;
        }
        rep.add_verdict("laws_differ", bad.has_value(), detail);
    }

    PAdicNum pscal = PAdicNum::from_integer(cfg, static_cast<long>(p));
    PrecisionBudget bud_f, bud_gm;
    TruncatedSeries mulp_F = mul_by(F, pscal, &bud_f).series;
    TruncatedSeries mulp_Gm = mul_by(Gm, pscal, &bud_gm).series;
    rep.add_budget("mul_by_p.f_group", bud_f);
    rep.add_budget("mul_by_p.multiplicative", bud_gm);

    ordered_json points = ordered_json::array();
    for (int k = 1; k <= n; ++k) {
        const std::string tag = "k=" + std::to_string(k);
        auto ring = ExtRing::cyclotomic(cfg, k);
        ExtElem T = ExtElem::generator(ring);

        // chain identity: f(zeta_{p^k} - 1) = zeta_{p^(k-1)} - 1, i.e.
        // f(T) == (1+T)^p - 1 in the cyclotomic quotient
        EvalResult fT = eval_at(sts.f, T);
        EvalResult qT = eval_at(sts.q, T);
        long g = std::min(fT.guaranteed_val_prec, qT.guaranteed_val_prec);
        bool chain = fT.value.equal_at_val(qT.value, g);
        rep.add_verdict("chain." + tag, chain, ordered_json{{"guarantee", g}});
        rep.add_precision("chain." + tag + ".eval_f", fT.guaranteed_val_prec);
        rep.add_precision("chain." + tag + ".eval_q", qT.guaranteed_val_prec);

        TorsionResult tf = is_torsion_with(mulp_F, T, n + 1);
        TorsionResult tg = is_torsion_with(mulp_Gm, T, n + 1);
        rep.add_verdict("torsion_f_group." + tag, tf.is_torsion && tf.certificate->level == k,
                        ordered_json{{"level", tf.is_torsion ? tf.certificate->level : -1}});
        rep.add_verdict("torsion_multiplicative." + tag, tg.is_torsion && tg.certificate->level == k,
                        ordered_json{{"level", tg.is_torsion ? tg.certificate->level : -1}});
        if (tf.is_torsion)
            rep.add_precision("torsion_f_group." + tag, tf.certificate->guaranteed_val_prec);
        if (tg.is_torsion)
            rep.add_precision("torsion_multiplicative." + tag, tg.certificate->guaranteed_val_prec);

        ordered_json pt;
        pt["name"] = "zeta_" + std::to_string(p) + "^" + std::to_string(k) + "-1";
        pt["ring_level"] = k;
        pt["point"] = elem_to_json(T);
        if (tf.is_torsion) pt["level_f_group"] = tf.certificate->level;
        if (tg.is_torsion) pt["level_multiplicative"] = tg.certificate->level;
        points.push_back(std::move(pt));
    }
    rep.data()["shared_nonzero_points"] = std::move(points);
    rep.data()["shared_nonzero_count"] = n;
    return rep;
}

Report rigidity_witness(const FormalGroup& F, const TruncatedSeries& u, const TruncatedSeries& h,
                        const std::vector<ExtElem>& sample_points, int max_level) {
    Endomorphism ue = make_endomorphism(F, u);
    if (ue.stability != Stability::stable)
        raise(errc::bad_argument, "rigidity witness needs a stable endomorphism u");
    Report rep("rigidity", F.config());

    const int d = h.vars();
    std::vector<TruncatedSeries> inners;
    for (int i = 0; i < d; ++i) inners.push_back(u.embed(d, i));
    TruncatedSeries lhs = compose(h, std::span<const TruncatedSeries>(inners));
    TruncatedSeries rhs = compose(u, {h});
    int floor = std::min(lhs.prec_floor(), rhs.prec_floor());
    if (auto bad = series_first_mismatch(lhs, rhs, floor))
        raise(errc::not_commuting,
              "u o h != h o u at exponent " + exps_to_string(*bad) + " (precision " + std::to_string(floor) + ")");
    rep.add_verdict("commutes_with_u", true, ordered_json{{"checked_floor", floor}});

    Decomposition dec = decompose_commuting(F, u, h);
    ordered_json scalars = ordered_json::array();
    for (const auto& a : dec.scalars) scalars.push_back(a.mantissa_decimal());
    rep.add_verdict("decomposes_into_endomorphisms", true,
                    ordered_json{{"scalars", scalars}, {"checked_floor", dec.checked_floor}});

    if (d == 1) {
        CheckResult ce = check_endomorphism(F, h);
        rep.add_verdict("endomorphism_identity", ce.ok, ordered_json{{"checked_floor", ce.checked_floor}});
    }

    int idx = 0;
    for (const auto& z : sample_points) {
        const std::string tag = "point[" + std::to_string(idx++) + "]";
        TorsionResult tz = is_torsion(F, z, max_level);
        rep.add_verdict(tag + ".in_torsion", tz.is_torsion,
                        ordered_json{{"level", tz.is_torsion ? tz.certificate->level : -1}});
        if (d == 1) {
            EvalResult hz = eval_at(h, z);
            rep.add_precision(tag + ".eval_h", hz.guaranteed_val_prec);
            TorsionResult th = is_torsion(F, hz.value, max_level);
            rep.add_verdict(tag + ".maps_into_torsion", th.is_torsion,
                            ordered_json{{"level", th.is_torsion ? th.certificate->level : -1}});
        }
    }
    return rep;
}

Report theorem_a_witness(const FormalGroup& F, const FormalGroup& G, const TruncatedSeries& u) {
    Endomorphism ue = make_endomorphism(F, u);
    if (ue.stability != Stability::stable)
        raise(errc::bad_argument, "theorem-a witness needs a stable endomorphism u of F");
    Report rep("theorem-a", F.config());
    rep.add_verdict("u_stable_endo_of_F", true,
                    ordered_json{{"a", ue.a.mantissa_decimal()}, {"stability", stability_name(ue.stability)}});

    CheckResult cg = check_endomorphism(G, u);
    ordered_json detail{{"checked_floor", cg.checked_floor}};
    if (!cg.ok) detail["obstruction_exponent"] = *cg.first_failure;
    rep.add_verdict("u_endo_of_G", cg.ok, detail);

    int floor = std::min(F.law().prec_floor(), G.law().prec_floor());
    auto bad = series_first_mismatch(F.law(), G.law(), floor);
    if (cg.ok) {
        ordered_json d2{{"compared_floor", floor}};
        if (bad) d2["first_mismatch"] = *bad;
        rep.add_verdict("laws_equal_at_precision", !bad.has_value(), d2);
    } else {
        ordered_json d2{{"compared_floor", floor}};
        if (bad) {
            d2["first_mismatch"] = *bad;
            d2["coeff_F"] = F.law().coeff(*bad).mantissa_decimal();
            d2["coeff_G"] = G.law().coeff(*bad).mantissa_decimal();
        }
        rep.data()["laws_differ"] = std::move(d2);
    }
    return rep;
}

} // namespace fglab

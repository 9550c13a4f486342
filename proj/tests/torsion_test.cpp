#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglab/torsion.hpp"
#include "test_util.hpp"

using namespace fglab;

namespace {

TruncatedSeries poly1(const PrimeConfig& cfg, std::initializer_list<long> ascending) {
    std::vector<std::pair<std::vector<int>, PAdicNum>> terms;
    int k = 0;
    for (long c : ascending) {
        if (c != 0) terms.push_back({{k}, PAdicNum::from_integer(cfg, c)});
        ++k;
    }
    return TruncatedSeries::from_terms(cfg, 1, cfg.precision(), terms);
}

} // namespace

TEST_CASE("iterate") {
    PrimeConfig cfg(2, 10, 0, 4);
    TruncatedSeries q = poly1(cfg, {0, 2, 1});
    // two steps of (1+X)^2 - 1 is (1+X)^4 - 1
    CHECK(series_equal_at(iterate(q, 2), poly1(cfg, {0, 4, 6, 4, 1}), 10));
    CHECK(series_equal_at(iterate(q, 0), TruncatedSeries::variable(cfg, 1, 0), 10));
}

TEST_CASE("iterate_at walks the cyclotomic tower") {
    PrimeConfig cfg(3, 8, 0, 9);
    auto ring = ExtRing::cyclotomic(cfg, 2);
    ExtElem T = ExtElem::generator(ring);
    TruncatedSeries q3 = poly1(cfg, {0, 3, 3, 1}); // (1+X)^3 - 1

    // zeta_9 - 1 |-> zeta_3 - 1 (valuation e/2 = 3) |-> 0
    OrbitResult one_step = iterate_at(q3, T, 1);
    ExtVal v1 = one_step.value.valuation();
    CHECK(v1.exact);
    CHECK(v1.v == 3);
    OrbitResult two_steps = iterate_at(q3, T, 2);
    CHECK(two_steps.value.valuation().at_least(two_steps.guaranteed_val_prec));

    // orbit/series consistency
    OrbitResult orbit = iterate_at(q3, T, 2);
    EvalResult direct = eval_at(iterate(q3, 2), T);
    long g = std::min(orbit.guaranteed_val_prec, direct.guaranteed_val_prec);
    CHECK(orbit.value.equal_at_val(direct.value, g));
}

TEST_CASE("is_torsion on the multiplicative group") {
    PrimeConfig cfg(3, 8, 0, 9);
    FormalGroup Gm = FormalGroup::multiplicative(cfg);
    auto ring = ExtRing::cyclotomic(cfg, 1);

    TorsionResult r = is_torsion(Gm, ExtElem::generator(ring), 3);
    REQUIRE(r.is_torsion);
    CHECK(r.certificate->level == 1);

    TorsionResult rz = is_torsion(Gm, ExtElem::zero(ring), 3);
    REQUIRE(rz.is_torsion);
    CHECK(rz.certificate->level == 0);

    // T + T^... a non-torsion point: p itself is not torsion for Gm
    ExtElem pp = ExtElem::constant(ring, PAdicNum::from_integer(cfg, 3));
    TorsionResult rp = is_torsion(Gm, pp, 4);
    CHECK_FALSE(rp.is_torsion);
    CHECK(rp.max_level_tested == 4);
}

TEST_CASE("torsion is forward-invariant") {
    PrimeConfig cfg(3, 8, 0, 9);
    FormalGroup Gm = FormalGroup::multiplicative(cfg);
    auto ring = ExtRing::cyclotomic(cfg, 2);
    ExtElem T = ExtElem::generator(ring);
    TruncatedSeries mp = mul_by(Gm, PAdicNum::from_integer(cfg, 3)).series;

    TorsionResult r = is_torsion_with(mp, T, 4);
    REQUIRE(r.is_torsion);
    CHECK(r.certificate->level == 2);
    EvalResult next = eval_at(mp, T);
    TorsionResult r2 = is_torsion_with(mp, next.value, 4);
    REQUIRE(r2.is_torsion);
    CHECK(r2.certificate->level == r.certificate->level - 1);
}

TEST_CASE("shared_torsion_series shape") {
    PrimeConfig cfg(3, 12, 0, 16);
    SharedTorsionSeries s = shared_torsion_series(cfg, 1);
    // q = 3X + 3X^2 + X^3, u* = 4, f = 12X + 12X^2 + 4X^3
    CHECK(series_equal_at(s.q, poly1(cfg, {0, 3, 3, 1}), 12));
    CHECK(series_equal_at(s.u, poly1(cfg, {4}), 12));
    CHECK(series_equal_at(s.f, poly1(cfg, {0, 12, 12, 4}), 12));
    CHECK(s.f.coeff({1}).equal_at(PAdicNum::from_integer(cfg, 12), 12)); // p(1+p^n) = 12

    PrimeConfig cfg2(2, 12, 0, 16);
    SharedTorsionSeries s2 = shared_torsion_series(cfg2, 2);
    // u* = 1 + 2(1 + (1+X)^2) = 3 + 4X + 2X^2, f = u* q, deg f = p^n = 4
    CHECK(series_equal_at(s2.u, poly1(cfg2, {5, 4, 2}), 12));
    CHECK(series_equal_at(s2.f, poly1(cfg2, {0, 10, 13, 8, 2}), 12));
    CHECK(s2.f.coeff({1}).equal_at(PAdicNum::from_integer(cfg2, 10), 12)); // 2(1+4)

    // f == X^p mod p (the Lubin-Tate congruence)
    CHECK(weierstrass_degree(s2.f) == 2);
    CHECK(s2.f.coeff({3}).valuation_floor() >= 1);

    // the degree cap must fit
    PrimeConfig small(2, 12, 0, 3);
    CHECK_THROWS_AS(shared_torsion_series(small, 2), Error);
}

TEST_CASE("shared_torsion_demo: p=2 n=1") {
    PrimeConfig cfg(2, 16, 0, 8);
    Report rep = shared_torsion_demo(cfg, 1);
    CHECK(rep.all_pass());
    auto j = rep.to_json();
    CHECK(j.at("data").at("shared_nonzero_count").get<int>() == 1);
    bool found_laws_differ = false;
    for (const auto& v : j.at("verdicts")) {
        if (v.at("name") == "laws_differ") {
            found_laws_differ = true;
            CHECK(v.at("pass").get<bool>());
            CHECK(v.at("detail").at("exponent") == ordered_json::array({1, 1}));
        }
    }
    CHECK(found_laws_differ);
}

TEST_CASE("shared_torsion_demo: p=3 n=2 certifies two nonzero shared points") {
    PrimeConfig cfg(3, 16, 0, 12);
    Report rep = shared_torsion_demo(cfg, 2);
    CHECK(rep.all_pass());
    auto j = rep.to_json();
    CHECK(j.at("data").at("shared_nonzero_points").size() == 2);
}

TEST_CASE("rigidity witness on the multiplicative group") {
    PrimeConfig cfg(3, 14, 0, 8);
    FormalGroup Gm = FormalGroup::multiplicative(cfg);
    TruncatedSeries u = mul_by(Gm, PAdicNum::from_integer(cfg, 4)).series; // [1+p]
    TruncatedSeries h = mul_by(Gm, PAdicNum::from_integer(cfg, 7)).series;

    auto ring = ExtRing::cyclotomic(cfg, 1);
    std::vector<ExtElem> pts{ExtElem::generator(ring)};
    Report rep = rigidity_witness(Gm, u, h, pts, 4);
    CHECK(rep.all_pass());

    // identity series is the trivial witness
    Report rid = rigidity_witness(Gm, u, TruncatedSeries::variable(cfg, 1, 0), {}, 4);
    CHECK(rid.all_pass());

    // perturbed endomorphism fails with NotCommuting
    SeriesBuilder b(mul_by(Gm, PAdicNum::from_integer(cfg, 2)).series);
    b.add(*b.basis().index({5}), PAdicNum::from_integer(cfg, 3));
    TruncatedSeries bad = std::move(b).finish(TailModel::integral);
    CHECK_THROWS_AS(rigidity_witness(Gm, u, bad, {}, 4), Error);
    try {
        rigidity_witness(Gm, u, bad, {}, 4);
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_commuting);
    }
}

TEST_CASE("theorem-a witness") {
    PrimeConfig cfg(3, 14, 0, 8);
    FormalGroup Gm = FormalGroup::multiplicative(cfg);
    TruncatedSeries u2 = mul_by(Gm, PAdicNum::from_integer(cfg, 2)).series;

    // F = G = multiplicative: equal at precision
    Report r1 = theorem_a_witness(Gm, Gm, u2);
    CHECK(r1.all_pass());

    // user-supplied copy of the multiplicative law
    FormalGroup user = FormalGroup::from_law(Gm.law());
    Report r2 = theorem_a_witness(Gm, user, u2);
    CHECK(r2.all_pass());

    // F_f vs multiplicative with u = f: obstruction reported, laws differ
    SharedTorsionSeries sts = shared_torsion_series(cfg, 1);
    FormalGroup Ff = FormalGroup::from_lubin_tate(sts.f);
    Report r3 = theorem_a_witness(Ff, Gm, sts.f);
    CHECK_FALSE(r3.all_pass());
    auto j = r3.to_json();
    bool saw_obstruction = false;
    for (const auto& v : j.at("verdicts"))
        if (v.at("name") == "u_endo_of_G" && !v.at("pass").get<bool>())
            saw_obstruction = v.at("detail").contains("obstruction_exponent");
    CHECK(saw_obstruction);
    CHECK(j.at("data").contains("laws_differ"));
}

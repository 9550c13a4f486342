#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglab/series.hpp"
#include "oracles.hpp"
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

TruncatedSeries random_series(std::mt19937_64& rng, const PrimeConfig& cfg, int d, bool zero_const) {
    SeriesBuilder b(cfg, d, cfg.precision());
    for (std::size_t i = zero_const ? 1 : 0; i < b.basis().size(); ++i)
        if (rng() % 3 != 0) b.set(i, testutil::random_padic(rng, cfg));
    return std::move(b).finish(TailModel::integral);
}

} // namespace

TEST_CASE("series mul basics") {
    PrimeConfig cfg(2, 10, 0, 3);
    // (X+Y)(X-Y) = X^2 - Y^2
    TruncatedSeries xpy = TruncatedSeries::from_terms(
        cfg, 2, 10, {{{1, 0}, PAdicNum::one(cfg)}, {{0, 1}, PAdicNum::one(cfg)}});
    TruncatedSeries xmy = TruncatedSeries::from_terms(
        cfg, 2, 10, {{{1, 0}, PAdicNum::one(cfg)}, {{0, 1}, -PAdicNum::one(cfg)}});
    TruncatedSeries expect = TruncatedSeries::from_terms(
        cfg, 2, 10, {{{2, 0}, PAdicNum::one(cfg)}, {{0, 2}, -PAdicNum::one(cfg)}});
    CHECK(series_equal_at(xpy * xmy, expect, 10));

    // a * 1 = a
    TruncatedSeries one = TruncatedSeries::constant(cfg, 2, PAdicNum::one(cfg));
    CHECK(series_equal_at(xpy * one, xpy, 10));

    // (2X+X^2)(3+X) = 6X + 5X^2 + X^3
    TruncatedSeries q = poly1(cfg, {0, 2, 1});
    TruncatedSeries u = poly1(cfg, {3, 1});
    CHECK(series_equal_at(q * u, poly1(cfg, {0, 6, 5, 1}), 10));
}

TEST_CASE("compose basics") {
    PrimeConfig cfg(2, 10, 0, 4);
    TruncatedSeries q = poly1(cfg, {0, 2, 1}); // (1+X)^2 - 1
    // q o q = (1+X)^4 - 1
    CHECK(series_equal_at(compose1(q, q), poly1(cfg, {0, 4, 6, 4, 1}), 10));
    // h o X = h
    TruncatedSeries x = TruncatedSeries::variable(cfg, 1, 0);
    CHECK(series_equal_at(compose1(q, x), q, 10));
    // X^2 o (X+Y) = X^2 + 2XY + Y^2
    TruncatedSeries sq = poly1(cfg, {0, 0, 1});
    TruncatedSeries xpy = TruncatedSeries::from_terms(
        cfg, 2, 10, {{{1, 0}, PAdicNum::one(cfg)}, {{0, 1}, PAdicNum::one(cfg)}});
    TruncatedSeries got = compose(sq, {xpy});
    TruncatedSeries expect = TruncatedSeries::from_terms(cfg, 2, 10,
                                                         {{{2, 0}, PAdicNum::one(cfg)},
                                                          {{1, 1}, PAdicNum::from_integer(cfg, 2)},
                                                          {{0, 2}, PAdicNum::one(cfg)}});
    CHECK(series_equal_at(got, expect, 10));
    // nonzero inner constant term is refused
    TruncatedSeries bad = poly1(cfg, {1, 1});
    CHECK_THROWS_AS(compose1(q, bad), Error);
}

TEST_CASE("compose is associative (seeded)") {
    std::mt19937_64 rng(testutil::test_seed() ^ 0x66);
    PrimeConfig cfg(3, 8, 0, 6);
    for (int i = 0; i < 10; ++i) {
        TruncatedSeries a = random_series(rng, cfg, 1, true);
        TruncatedSeries b = random_series(rng, cfg, 1, true);
        TruncatedSeries c = random_series(rng, cfg, 1, true);
        CHECK(series_equal_at(compose1(compose1(a, b), c), compose1(a, compose1(b, c)), 8));
    }
}

TEST_CASE("derivative and linear part") {
    PrimeConfig cfg(2, 10, 0, 4);
    TruncatedSeries cube = poly1(cfg, {0, 0, 0, 1});
    CHECK(series_equal_at(derivative(cube, 0), poly1(cfg, {0, 0, 3}), 10));

    TruncatedSeries xy = TruncatedSeries::from_terms(cfg, 2, 10, {{{1, 1}, PAdicNum::one(cfg)}});
    TruncatedSeries dxy = derivative(xy, 1);
    CHECK(series_equal_at(dxy, TruncatedSeries::from_terms(cfg, 2, 10, {{{1, 0}, PAdicNum::one(cfg)}}), 10));

    // f = 6X + 5X^2 + X^3 has f'(0) = 6
    TruncatedSeries f = poly1(cfg, {0, 6, 5, 1});
    CHECK(derivative(f, 0).coeff({0}).equal_at(PAdicNum::from_integer(cfg, 6), 10));
    CHECK(linear_part(f)[0].equal_at(PAdicNum::from_integer(cfg, 6), 10));

    TruncatedSeries xpyxy = TruncatedSeries::from_terms(cfg, 2, 10,
                                                        {{{1, 0}, PAdicNum::one(cfg)},
                                                         {{0, 1}, PAdicNum::one(cfg)},
                                                         {{1, 1}, PAdicNum::one(cfg)}});
    auto lp = linear_part(xpyxy);
    CHECK(lp[0].equal_at(PAdicNum::one(cfg), 10));
    CHECK(lp[1].equal_at(PAdicNum::one(cfg), 10));
}

TEST_CASE("derivative is a derivation (seeded)") {
    std::mt19937_64 rng(testutil::test_seed() ^ 0x77);
    PrimeConfig cfg(5, 8, 0, 6);
    for (int i = 0; i < 10; ++i) {
        TruncatedSeries a = random_series(rng, cfg, 2, false);
        TruncatedSeries b = random_series(rng, cfg, 2, false);
        for (int var = 0; var < 2; ++var) {
            TruncatedSeries lhs = derivative(a * b, var);
            TruncatedSeries rhs = derivative(a, var) * b + a * derivative(b, var);
            // the product rule holds through degree M-1 on truncations
            bool ok = true;
            for (int deg = 0; deg < 6; ++deg)
                ok = ok && series_equal_at(lhs.homogeneous_part(deg), rhs.homogeneous_part(deg), 8);
            CHECK(ok);
        }
    }
}

TEST_CASE("comp_inverse: Catalan coefficients via the substitute-and-solve oracle") {
    PrimeConfig cfg(5, 12, 0, 6);
    TruncatedSeries h = poly1(cfg, {0, 1, 1}); // X + X^2
    TruncatedSeries g = comp_inverse(h);

    oracle::Poly oh = oracle::pzero(6);
    oh[1] = 1;
    oh[2] = 1;
    oracle::Poly og = oracle::comp_inverse_oracle(oh, 5, cfg.pow(12));
    for (int k = 1; k <= 6; ++k)
        CHECK(g.coeff({k}).mantissa() == og[static_cast<std::size_t>(k)]);

    // frozen signed Catalan numbers 1, -1, 2, -5, 14, -42
    const long expect[] = {0, 1, -1, 2, -5, 14, -42};
    for (int k = 1; k <= 6; ++k)
        CHECK(g.coeff({k}).equal_at(PAdicNum::from_integer(cfg, expect[k]), 12));

    // round trips
    CHECK(series_equal_at(compose1(h, g), TruncatedSeries::variable(cfg, 1, 0).reduce_to(12), 12));
    CHECK(series_equal_at(compose1(g, h), TruncatedSeries::variable(cfg, 1, 0).reduce_to(12), 12));

    CHECK(series_equal_at(comp_inverse(TruncatedSeries::variable(cfg, 1, 0)),
                          TruncatedSeries::variable(cfg, 1, 0), 12));
    // u*X inverts to u^{-1}X
    PAdicNum u = PAdicNum::from_integer(cfg, 7);
    TruncatedSeries ux = TruncatedSeries::variable(cfg, 1, 0).scaled(u);
    CHECK(comp_inverse(ux).coeff({1}).equal_at(u.inv(), 12));
    // non-unit derivative refused
    CHECK_THROWS_AS(comp_inverse(poly1(cfg, {0, 5, 1})), Error);
}

TEST_CASE("comp_inverse round trip (seeded)") {
    std::mt19937_64 rng(testutil::test_seed() ^ 0x88);
    PrimeConfig cfg(3, 10, 0, 8);
    for (int i = 0; i < 10; ++i) {
        TruncatedSeries h = random_series(rng, cfg, 1, true);
        SeriesBuilder b(h);
        b.set(*h.basis().index({1}), testutil::random_unit(rng, cfg));
        h = std::move(b).finish(TailModel::integral);
        TruncatedSeries g = comp_inverse(h);
        TruncatedSeries x = TruncatedSeries::variable(cfg, 1, 0).reduce_to(10);
        CHECK(series_equal_at(compose1(h, g), x, 10));
        CHECK(series_equal_at(compose1(g, h), x, 10));
    }
}

TEST_CASE("series_inv_unit") {
    PrimeConfig cfg(3, 10, 0, 6);
    TruncatedSeries w = poly1(cfg, {1, 1}); // 1 + X
    TruncatedSeries winv = series_inv_unit(w);
    // 1/(1+X) = 1 - X + X^2 - ...
    for (int k = 0; k <= 6; ++k)
        CHECK(winv.coeff({k}).equal_at(PAdicNum::from_integer(cfg, k % 2 ? -1 : 1), 10));
    CHECK(series_equal_at(w * winv, TruncatedSeries::constant(cfg, 1, PAdicNum::one(cfg)), 10));
}

TEST_CASE("weierstrass degree and preparation") {
    PrimeConfig cfg2(2, 10, 0, 6);
    TruncatedSeries f = poly1(cfg2, {0, 6, 5, 1});
    // mod 2 the series is X^2 + X^3, so wdeg = 2
    CHECK(weierstrass_degree(f) == 2);
    WeierstrassPrep wp = weierstrass_prep(f);
    CHECK(wp.wdeg == 2);
    CHECK(wp.unit.coeff({0}).valuation() == 0);
    for (int k = 0; k < wp.wdeg; ++k) CHECK(wp.distinguished.coeff({k}).valuation_floor() >= 1);
    CHECK(wp.distinguished.coeff({wp.wdeg}).equal_at(PAdicNum::one(cfg2), wp.distinguished.prec_floor()));
    CHECK(series_equal_at(wp.unit * wp.distinguished, f.reduce_to(wp.unit.prec_floor()),
                          std::min(wp.unit.prec_floor(), f.prec_floor())));

    // pX + X^p
    PrimeConfig cfg3(3, 10, 0, 6);
    TruncatedSeries lt = poly1(cfg3, {0, 3, 0, 1});
    CHECK(weierstrass_degree(lt) == 3);
    CHECK(weierstrass_prep(lt).wdeg == 3);

    // unit * X
    CHECK(weierstrass_prep(poly1(cfg3, {0, 2})).wdeg == 1);

    // 0 mod p through degree M
    CHECK_THROWS_AS(weierstrass_prep(poly1(cfg3, {0, 3, 3})), Error);
}

TEST_CASE("weierstrass reconstruction (seeded)") {
    std::mt19937_64 rng(testutil::test_seed() ^ 0x99);
    PrimeConfig cfg(3, 10, 0, 8);
    for (int i = 0; i < 10; ++i) {
        // random series with a forced unit coefficient somewhere in [1, 4]
        TruncatedSeries h = random_series(rng, cfg, 1, false);
        int pos = 1 + static_cast<int>(rng() % 4);
        SeriesBuilder b(h);
        for (int k = 0; k < pos; ++k) {
            PAdicNum c = h.coeff({k});
            if (c.valuation_floor() == 0)
                b.set(*h.basis().index({k}), c * PAdicNum::from_integer(cfg, 3));
        }
        b.set(*h.basis().index({pos}), testutil::random_unit(rng, cfg));
        h = std::move(b).finish(TailModel::integral);
        WeierstrassPrep wp = weierstrass_prep(h);
        CHECK(wp.wdeg == pos);
        int floor = std::min(wp.unit.prec_floor(), h.prec_floor());
        CHECK(series_equal_at(wp.unit * wp.distinguished, h.reduce_to(floor), floor));
        CHECK(wp.unit.coeff({0}).valuation() == 0);
    }
}

TEST_CASE("eval_at in cyclotomic rings") {
    PrimeConfig cfg(3, 8, 0, 8);
    auto ring = ExtRing::cyclotomic(cfg, 1);
    ExtElem T = ExtElem::generator(ring);

    // (1+X)^3 - 1 at T: exact zero since zeta_3 cubes to 1
    TruncatedSeries q3 = poly1(cfg, {0, 3, 3, 1});
    EvalResult r = eval_at(q3, T);
    CHECK(r.value.valuation().at_least(r.guaranteed_val_prec));

    // X at z is z
    EvalResult rx = eval_at(TruncatedSeries::variable(cfg, 1, 0), T);
    CHECK((rx.value - T).valuation().at_least(rx.guaranteed_val_prec));

    // guarantee formula: min(e*floor, (M+1)*val(z))
    CHECK(r.guaranteed_val_prec == std::min<long>(2 * 8, 9 * 1));

    // divergence outside the maximal ideal
    ExtElem unit_pt = ExtElem::one(ring);
    CHECK_THROWS_AS(eval_at(q3, unit_pt), Error);
}

TEST_CASE("eval_at respects composition (seeded)") {
    std::mt19937_64 rng(testutil::test_seed() ^ 0xaa);
    PrimeConfig cfg(3, 10, 0, 6);
    auto ring = ExtRing::cyclotomic(cfg, 1);
    ExtElem T = ExtElem::generator(ring);
    for (int i = 0; i < 8; ++i) {
        TruncatedSeries a = random_series(rng, cfg, 1, true);
        TruncatedSeries b = random_series(rng, cfg, 1, true);
        EvalResult direct = eval_at(compose1(a, b), T);
        EvalResult inner = eval_at(b, T);
        EvalResult outer = eval_at(a, inner.value);
        long g = std::min({direct.guaranteed_val_prec, inner.guaranteed_val_prec, outer.guaranteed_val_prec});
        CHECK(direct.value.equal_at_val(outer.value, g));
    }
}

TEST_CASE("first mismatch order is graded lexicographic") {
    PrimeConfig cfg(2, 8, 0, 4);
    TruncatedSeries a = TruncatedSeries::from_terms(cfg, 2, 8, {{{0, 2}, PAdicNum::one(cfg)}});
    TruncatedSeries b = TruncatedSeries::from_terms(cfg, 2, 8, {{{2, 0}, PAdicNum::one(cfg)}});
    auto bad = series_first_mismatch(a, b, 8);
    REQUIRE(bad.has_value());
    CHECK(*bad == std::vector<int>{0, 2});
}

TEST_CASE("lift and reduce round trip") {
    PrimeConfig lo(3, 6, 0, 4), hi(3, 12, 0, 4);
    std::mt19937_64 rng(testutil::test_seed() ^ 0xbb);
    TruncatedSeries s = random_series(rng, lo, 2, false);
    TruncatedSeries up = s.lift_to(hi);
    CHECK(up.prec_floor() == 12);
    TruncatedSeries back = up.lift_to(lo).reduce_to(s.prec_floor());
    CHECK(series_equal_at(s, back, s.prec_floor()));
}

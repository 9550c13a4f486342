#include "fglab/ext_ring.hpp"

#include <algorithm>

namespace fglab {

namespace {

// Ascending coefficients of (1+T)^n, exact.
std::vector<bigint> binomial_row(unsigned long n) {
    std::vector<bigint> row(n + 1);
    row[0] = 1;
    for (unsigned long k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
}

void check_eisenstein(const PrimeConfig& cfg, const std::vector<PAdicNum>& g) {
    const int deg = static_cast<int>(g.size()) - 1;
    if (deg < 1) raise(errc::bad_argument, "modulus must have degree >= 1");
    if (!g.back().equal_at(PAdicNum::one(cfg), g.back().prec()))
        raise(errc::bad_argument, "modulus must be monic");
    for (int i = 1; i < deg; ++i) {
        if (g[i].valuation_floor() < 1)
            raise(errc::bad_argument, "non-leading modulus coefficient of valuation 0");
    }
    auto v0 = g[0].valuation();
    if (!v0 || *v0 != 1)
        raise(errc::bad_argument, "Eisenstein modulus needs constant term of valuation exactly 1");
}

} // namespace

std::shared_ptr<const ExtRing> ExtRing::base(const PrimeConfig& cfg) {
    std::vector<PAdicNum> g{PAdicNum::zero(cfg), PAdicNum::one(cfg)}; // T
    return std::shared_ptr<const ExtRing>(new ExtRing(cfg, std::move(g), RingKind::base, 1, 0));
}

std::shared_ptr<const ExtRing> ExtRing::cyclotomic(const PrimeConfig& cfg, int k) {
    if (k < 1) raise(errc::bad_argument, "cyclotomic level k must be >= 1");
    // Phi_{p^k}(1+T) = sum_{j<p} (1+T)^(j*p^(k-1))
    const std::uint64_t p = cfg.p();
    unsigned long step = 1;
    for (int i = 1; i < k; ++i) step *= static_cast<unsigned long>(p);
    unsigned long deg = static_cast<unsigned long>(p - 1) * step;
    std::vector<bigint> acc(deg + 1);
    for (std::uint64_t j = 0; j < p; ++j) {
        auto row = binomial_row(j * step);
        for (std::size_t i = 0; i < row.size(); ++i) acc[i] += row[i];
    }
    std::vector<PAdicNum> g;
    g.reserve(acc.size());
    for (auto& c : acc) g.push_back(PAdicNum::from_integer(cfg, c));
    check_eisenstein(cfg, g);
    return std::shared_ptr<const ExtRing>(
        new ExtRing(cfg, std::move(g), RingKind::cyclotomic, static_cast<int>(deg), k));
}

std::shared_ptr<const ExtRing> ExtRing::from_modulus(const PrimeConfig& cfg,
                                                     std::vector<PAdicNum> monic_modulus,
                                                     RingKind kind) {
    const int deg = static_cast<int>(monic_modulus.size()) - 1;
    if (deg < 1) raise(errc::bad_argument, "modulus must have degree >= 1");
    if (kind == RingKind::eisenstein) check_eisenstein(cfg, monic_modulus);
    if (kind == RingKind::cyclotomic || kind == RingKind::base)
        raise(errc::bad_argument, "use the dedicated constructor for base/cyclotomic rings");
    int e = kind == RingKind::eisenstein ? deg : 0;
    return std::shared_ptr<const ExtRing>(new ExtRing(cfg, std::move(monic_modulus), kind, e, 0));
}

bool ExtRing::same_ring(const ExtRing& o) const {
    if (this == &o) return true;
    if (!(cfg_ == o.cfg_) || kind_ != o.kind_ || degree() != o.degree() || level_ != o.level_) return false;
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
        int n = std::min(modulus_[i].prec(), o.modulus_[i].prec());
        if (!modulus_[i].equal_at(o.modulus_[i], n)) return false;
    }
    return true;
}

ExtElem ExtElem::zero(std::shared_ptr<const ExtRing> ring) {
    std::vector<PAdicNum> c(static_cast<std::size_t>(ring->degree()), PAdicNum::zero(ring->config()));
    return ExtElem(std::move(ring), std::move(c));
}

ExtElem ExtElem::one(std::shared_ptr<const ExtRing> ring) {
    PAdicNum v = PAdicNum::one(ring->config());
    return constant(std::move(ring), std::move(v));
}

ExtElem ExtElem::constant(std::shared_ptr<const ExtRing> ring, PAdicNum v) {
    ExtElem r = zero(ring);
    r.c_[0] = std::move(v);
    return r;
}

ExtElem ExtElem::generator(std::shared_ptr<const ExtRing> ring) {
    if (ring->degree() < 2) {
        // T reduces to a constant: T = -g[0].
        PAdicNum t = -ring->modulus()[0];
        return constant(std::move(ring), std::move(t));
    }
    ExtElem r = zero(ring);
    r.c_[1] = PAdicNum::one(r.ring_->config());
    return r;
}

ExtElem ExtElem::from_coeffs(std::shared_ptr<const ExtRing> ring, std::vector<PAdicNum> coeffs) {
    const int e = ring->degree();
    const auto& g = ring->modulus();
    // monic reduction from the top
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= e; --j) {
        if (coeffs[static_cast<std::size_t>(j)].is_zero_at_prec()) continue;
        PAdicNum lead = coeffs[static_cast<std::size_t>(j)];
        for (int i = 0; i <= e; ++i) {
            auto& slot = coeffs[static_cast<std::size_t>(j - e + i)];
            slot = slot - lead * g[static_cast<std::size_t>(i)];
        }
    }
    coeffs.resize(static_cast<std::size_t>(e), PAdicNum::zero(ring->config()));
    return ExtElem(std::move(ring), std::move(coeffs));
}

bool ExtElem::is_zero_at_prec() const {
    return std::all_of(c_.begin(), c_.end(), [](const PAdicNum& x) { return x.is_zero_at_prec(); });
}

long ExtElem::precision_floor() const {
    const long e = ring_->ram_index();
    long m = e * ring_->config().precision();
    for (std::size_t i = 0; i < c_.size(); ++i)
        m = std::min(m, e * c_[i].prec() + static_cast<long>(i));
    return m;
}

ExtVal ExtElem::valuation() const {
    if (!ring_->has_valuation())
        raise(errc::unsupported_ring, "valuation is defined only for base/cyclotomic/eisenstein rings");
    const long e = ring_->ram_index();
    const long cap = e * ring_->config().precision();
    long exact_min = cap + 1;
    long bound_min = cap + 1;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (auto v = c_[i].valuation())
            exact_min = std::min(exact_min, e * *v + static_cast<long>(i));
        else
            bound_min = std::min(bound_min, e * c_[i].prec() + static_cast<long>(i));
    }
    // Distinct residues of i mod e make the minimum exact when it is certified
    // below every zero-at-precision bound.
    if (exact_min < bound_min && exact_min <= cap) return {exact_min, true};
    return {std::min(std::min(exact_min, bound_min), cap), false};
}

ExtElem ExtElem::operator-() const {
    std::vector<PAdicNum> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(-x);
    return ExtElem(ring_, std::move(c));
}

ExtElem operator+(const ExtElem& a, const ExtElem& b) {
    if (!a.ring_->same_ring(*b.ring_)) raise(errc::config_mismatch, "elements of different rings");
    std::vector<PAdicNum> c;
    c.reserve(a.c_.size());
    for (std::size_t i = 0; i < a.c_.size(); ++i) c.push_back(a.c_[i] + b.c_[i]);
    return ExtElem(a.ring_, std::move(c));
}

ExtElem operator-(const ExtElem& a, const ExtElem& b) {
    return a + (-b);
}

ExtElem operator*(const ExtElem& a, const ExtElem& b) {
    if (!a.ring_->same_ring(*b.ring_)) raise(errc::config_mismatch, "elements of different rings");
    const auto& cfg = a.ring_->config();
    std::vector<PAdicNum> prod(2 * a.c_.size(), PAdicNum::zero(cfg));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero_at_prec()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j].is_zero_at_prec()) continue;
            prod[i + j] = prod[i + j] + a.c_[i] * b.c_[j];
        }
    }
    return ExtElem::from_coeffs(a.ring_, std::move(prod));
}

ExtElem ExtElem::scaled(const PAdicNum& s) const {
    std::vector<PAdicNum> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(x * s);
    return ExtElem(ring_, std::move(c));
}

ExtElem ExtElem::pow_int(unsigned long e) const {
    ExtElem r = one(ring_);
    ExtElem base = *this;
    while (e) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

ExtElem ExtElem::inv() const {
    ExtVal v = valuation();
    if (!v.exact || v.v != 0) raise(errc::non_unit, "element is not a unit at available precision");
    // Newton iteration from the inverse of the constant term.
    ExtElem w = constant(ring_, c_[0].inv());
    const ExtElem one_ = one(ring_);
    const long cap = static_cast<long>(ring_->ram_index()) * ring_->config().precision();
    for (int it = 0; it < 64; ++it) {
        ExtElem resid = one_ - *this * w;
        if (resid.is_zero_at_prec() || resid.valuation().at_least(cap)) break;
        w = w + w * resid;
    }
    return w;
}

ExtElem ExtElem::solve_mul(const ExtElem& rhs) const {
    const std::size_t e = static_cast<std::size_t>(ring_->degree());
    const auto& cfg = ring_->config();
    // A[i][j] = coefficient i of this * T^j; Gauss-Jordan on [A | b].
    std::vector<std::vector<PAdicNum>> a(e, std::vector<PAdicNum>(e, PAdicNum::zero(cfg)));
    ExtElem t = generator(ring_);
    ExtElem cur = *this;
    for (std::size_t j = 0; j < e; ++j) {
        for (std::size_t i = 0; i < e; ++i) a[i][j] = cur.c_[i];
        cur = cur * t;
    }
    std::vector<PAdicNum> b = rhs.c_;
    std::vector<bool> used(e, false);
    std::vector<std::size_t> pivot_row(e, 0);

    for (std::size_t j = 0; j < e; ++j) {
        std::size_t best = e;
        long best_val = 0;
        for (std::size_t i = 0; i < e; ++i) {
            if (used[i] || a[i][j].is_zero_at_prec()) continue;
            long v = *a[i][j].valuation();
            if (best == e || v < best_val) { best = i; best_val = v; }
        }
        if (best == e)
            raise(errc::precision_exhausted, "multiplication matrix is singular at available precision");
        used[best] = true;
        pivot_row[j] = best;
        const PAdicNum piv = a[best][j];
        for (std::size_t i = 0; i < e; ++i) {
            if (i == best || a[i][j].is_zero_at_prec()) continue;
            const PAdicNum f = a[i][j].divide_exact(piv);
            for (std::size_t jj = j; jj < e; ++jj) a[i][jj] = a[i][jj] - f * a[best][jj];
            b[i] = b[i] - f * b[best];
        }
    }
    std::vector<PAdicNum> x(e, PAdicNum::zero(cfg));
    for (std::size_t j = 0; j < e; ++j) x[j] = b[pivot_row[j]].divide_exact(a[pivot_row[j]][j]);
    return ExtElem(ring_, std::move(x));
}

bool ExtElem::equal_at_val(const ExtElem& b, long bound) const {
    return (*this - b).valuation().at_least(bound);
}

} // namespace fglab

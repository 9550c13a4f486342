#include "fglab/padic.hpp"

#include <sstream>

namespace fglab {

const char* errc_name(errc c) {
    switch (c) {
        case errc::ok: return "Ok";
        case errc::precision_exhausted: return "PrecisionExhausted";
        case errc::non_unit: return "NonUnit";
        case errc::denominator_cap_exceeded: return "DenominatorCapExceeded";
        case errc::unsupported_ring: return "UnsupportedRing";
        case errc::newton_hypothesis_failed: return "NewtonHypothesisFailed";
        case errc::inner_constant_term_nonzero: return "InnerConstantTermNonzero";
        case errc::non_unit_derivative: return "NonUnitDerivative";
        case errc::infinite_height_at_cap: return "InfiniteHeightAtCap";
        case errc::divergent_evaluation: return "DivergentEvaluation";
        case errc::integrality_failure: return "IntegralityFailure";
        case errc::not_commuting: return "NotCommuting";
        case errc::reconstruction_mismatch: return "ReconstructionMismatch";
        case errc::axiom_check_failed: return "AxiomCheckFailed";
        case errc::schema_error: return "SchemaError";
        case errc::usage_error: return "UsageError";
        case errc::config_mismatch: return "ConfigMismatch";
        case errc::bad_argument: return "BadArgument";
    }
    return "UnknownError";
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    // Deterministic Miller-Rabin for 64-bit with the base set above.
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

long factorial_valuation(std::uint64_t p, unsigned long n) {
    long v = 0;
    unsigned long q = n;
    while (q >= p) {
        q /= p;
        v += static_cast<long>(q);
    }
    return v;
}

PrimeConfig::PrimeConfig(std::uint64_t p, int N, int D, int M) : p_(p), N_(N), D_(D), M_(M) {
    if (!is_prime_u64(p)) raise(errc::bad_argument, "p = " + std::to_string(p) + " is not prime");
    if (N < 1) raise(errc::bad_argument, "precision N must be >= 1");
    if (D < 0) raise(errc::bad_argument, "denominator cap D must be >= 0");
    if (M < 1) raise(errc::bad_argument, "degree cap M must be >= 1");
    auto tbl = std::make_shared<std::vector<bigint>>();
    tbl->reserve(static_cast<std::size_t>(N + D + 3));
    bigint x = 1;
    for (int i = 0; i <= N + D + 2; ++i) {
        tbl->push_back(x);
        x *= p;
    }
    powers_ = std::move(tbl);
}

bigint PrimeConfig::pow(int k) const {
    if (k < 0) raise(errc::bad_argument, "negative power of p requested");
    if (static_cast<std::size_t>(k) < powers_->size()) return (*powers_)[static_cast<std::size_t>(k)];
    bigint x = powers_->back();
    for (int i = static_cast<int>(powers_->size()) - 1; i < k; ++i) x *= p_;
    return x;
}

PAdicNum PAdicNum::from_parts(const PrimeConfig& cfg, bigint m, int s, int prec, bool exact_hint) {
    if (prec <= 0) raise(errc::precision_exhausted, "resulting precision is not positive");
    if (prec > cfg.precision()) prec = cfg.precision();
    if (s > 0) { // fold positive shifts into the mantissa
        m *= cfg.pow(s);
        s = 0;
    }
    int r = prec - s;
    bigint mod = cfg.pow(r);
    bool exact = exact_hint && m >= 0 && m < mod; // reduction must not touch the value
    m %= mod;
    if (m < 0) m += mod;
    if (m == 0) return PAdicNum(cfg, bigint(0), 0, prec, exact);
    if (s < 0) {
        const bigint p(cfg.p());
        while (s < 0 && m % p == 0) {
            m /= p;
            ++s;
        }
        if (m == 0) return PAdicNum(cfg, bigint(0), 0, prec, exact);
    }
    if (s < -cfg.den_cap()) {
        raise(errc::denominator_cap_exceeded,
              "denominator p^" + std::to_string(-s) + " exceeds cap D=" + std::to_string(cfg.den_cap()));
    }
    return PAdicNum(cfg, std::move(m), s, prec, exact);
}

PAdicNum PAdicNum::from_integer(const PrimeConfig& cfg, const bigint& v) {
    return from_parts(cfg, v, 0, cfg.precision(), true);
}

PAdicNum PAdicNum::from_integer(const PrimeConfig& cfg, long v) {
    return from_integer(cfg, bigint(v));
}

PAdicNum PAdicNum::from_decimal(const PrimeConfig& cfg, std::string_view dec) {
    if (dec.empty()) raise(errc::bad_argument, "empty decimal literal");
    std::size_t i = 0;
    bool neg = false;
    if (dec[0] == '+' || dec[0] == '-') {
        neg = dec[0] == '-';
        i = 1;
    }
    if (i == dec.size()) raise(errc::bad_argument, "decimal literal has no digits");
    bigint v = 0;
    for (; i < dec.size(); ++i) {
        if (dec[i] < '0' || dec[i] > '9')
            raise(errc::bad_argument, "invalid decimal literal '" + std::string(dec) + "'");
        v = v * 10 + (dec[i] - '0');
    }
    if (neg) v = -v;
    return from_integer(cfg, v);
}

PAdicNum PAdicNum::zero(const PrimeConfig& cfg) {
    return PAdicNum(cfg, bigint(0), 0, cfg.precision(), true);
}

PAdicNum PAdicNum::one(const PrimeConfig& cfg) {
    return PAdicNum(cfg, bigint(1), 0, cfg.precision(), true);
}

std::optional<long> PAdicNum::valuation() const {
    if (m_ == 0) return std::nullopt;
    long v = 0;
    bigint t = m_;
    const bigint p(cfg_.p());
    while (t % p == 0) {
        t /= p;
        ++v;
    }
    return v + s_;
}

PAdicNum PAdicNum::operator-() const {
    return from_parts(cfg_, -m_, s_, prec_, exact_ && m_ == 0);
}

PAdicNum operator+(const PAdicNum& a, const PAdicNum& b) {
    if (!a.cfg_.compatible(b.cfg_)) raise(errc::config_mismatch, "operands use different PrimeConfigs");
    int n = std::min(a.prec_, b.prec_);
    int s = std::min(a.s_, b.s_);
    bigint m = a.m_ * a.cfg_.pow(a.s_ - s) + b.m_ * a.cfg_.pow(b.s_ - s);
    return PAdicNum::from_parts(a.cfg_, std::move(m), s, n, a.exact_ && b.exact_);
}

PAdicNum operator-(const PAdicNum& a, const PAdicNum& b) {
    return a + (-b);
}

PAdicNum operator*(const PAdicNum& a, const PAdicNum& b) {
    if (!a.cfg_.compatible(b.cfg_)) raise(errc::config_mismatch, "operands use different PrimeConfigs");
    long va = a.valuation_floor();
    long vb = b.valuation_floor();
    long n = std::min<long>(a.prec_ + vb, b.prec_ + va);
    n = std::min<long>(n, a.cfg_.precision());
    return PAdicNum::from_parts(a.cfg_, a.m_ * b.m_, a.s_ + b.s_, static_cast<int>(n),
                                a.exact_ && b.exact_);
}

namespace {

// Inverse of a unit u modulo p^k: Hensel lift from the inverse mod p.
bigint inv_mod_pow(const PrimeConfig& cfg, const bigint& u, int k) {
    const bigint p(cfg.p());
    bigint x = cfg.p() == 2 ? bigint(1) : boost::multiprecision::powm(u % p, bigint(cfg.p() - 2), p);
    int known = 1;
    while (known < k) {
        known = std::min(2 * known, k);
        bigint mod = cfg.pow(known);
        x = x * (2 - ((u * x) % mod)) % mod;
        if (x < 0) x += mod;
    }
    return x;
}

} // namespace

PAdicNum PAdicNum::inv() const {
    if (m_ == 0) raise(errc::non_unit, "cannot invert zero at available precision");
    const bigint p(cfg_.p());
    if (s_ != 0 || m_ % p == 0) raise(errc::non_unit, "valuation is nonzero at available precision");
    return from_parts(cfg_, inv_mod_pow(cfg_, m_, prec_), 0, prec_, exact_ && m_ == 1);
}

PAdicNum PAdicNum::divide_exact(const PAdicNum& b) const {
    if (!cfg_.compatible(b.cfg_)) raise(errc::config_mismatch, "operands use different PrimeConfigs");
    if (b.m_ == 0) raise(errc::precision_exhausted, "divisor is zero at available precision");
    long vb = *b.valuation();
    long va = valuation_floor();
    // Error in a contributes p^(na - vb); error in b contributes p^(nb + va - 2 vb).
    long n = std::min<long>(prec_ + vb, b.prec_ + va) - 2 * vb;
    if (n <= 0) raise(errc::precision_exhausted, "division leaves no guaranteed digits");
    bigint u = b.m_;
    const bigint p(cfg_.p());
    for (long i = 0; i < vb - b.s_; ++i) u /= p;
    int s_out = s_ - static_cast<int>(vb);
    if (exact_ && b.exact_ && u != 0 && m_ % u == 0) {
        // exact integer quotient: no divisor fuzz, cost is a single val(b)
        return from_parts(cfg_, m_ / u, s_out, static_cast<int>(std::min(prec_, b.prec_) - vb), true);
    }
    int digits = static_cast<int>(std::min<long>(n, cfg_.precision())) - std::min(s_out, 0);
    return from_parts(cfg_, m_ * inv_mod_pow(cfg_, u, digits), s_out, static_cast<int>(n));
}

PAdicNum PAdicNum::divide_integral(const PAdicNum& b) const {
    if (b.m_ == 0) raise(errc::precision_exhausted, "divisor is zero at available precision");
    long vb = *b.valuation();
    if (m_ != 0 && *valuation() < vb)
        raise(errc::integrality_failure,
              "quotient is not integral: val " + std::to_string(*valuation()) + " < " + std::to_string(vb));
    PAdicNum q = divide_exact(b);
    if (q.s_ < 0) raise(errc::integrality_failure, "quotient acquired a denominator");
    return q;
}

PAdicNum PAdicNum::pow_int(unsigned long e) const {
    PAdicNum r = one(cfg_).reduce_to(prec_);
    PAdicNum base = *this;
    while (e) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

PAdicNum PAdicNum::reduce_to(int n) const {
    if (n > prec_) raise(errc::bad_argument, "cannot raise declared precision");
    return from_parts(cfg_, m_, s_, n, exact_);
}

PAdicNum PAdicNum::lift_to(const PrimeConfig& cfg2) const {
    if (cfg2.p() != cfg_.p()) raise(errc::config_mismatch, "lift across different primes");
    int n = exact_ ? cfg2.precision() : std::min(prec_, cfg2.precision());
    return from_parts(cfg2, m_, s_, n, exact_);
}

bool PAdicNum::equal_at(const PAdicNum& b, int n) const {
    if (n > std::min(prec_, b.prec_))
        raise(errc::precision_exhausted,
              "equality requested at precision " + std::to_string(n) + " beyond guaranteed digits");
    PAdicNum d = *this - b;
    return d.valuation_floor() >= n;
}

std::string PAdicNum::mantissa_decimal() const {
    std::ostringstream os;
    os << m_;
    return os.str();
}

} // namespace fglab

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fglab/errors.hpp"

namespace fglab {

using bigint = boost::multiprecision::cpp_int;

bool is_prime_u64(std::uint64_t n);

// Finite working model of Z_p.  Every value is a congruence class modulo
// p^prec, denominators are powers of p bounded by p^D, and power series are
// truncated at total degree M.  Immutable; copies share the power table.
class PrimeConfig {
public:
    PrimeConfig(std::uint64_t p, int N, int D, int M);

    std::uint64_t p() const noexcept { return p_; }
    int precision() const noexcept { return N_; }   // N: guaranteed p-digits
    int den_cap() const noexcept { return D_; }     // D: max power of p in denominators
    int degree_cap() const noexcept { return M_; }  // M: total-degree cap for series

    // p^k (k >= 0).
    bigint pow(int k) const;

    PrimeConfig with_precision(int N2) const { return PrimeConfig(p_, N2, D_, M_); }
    PrimeConfig with_degree_cap(int M2) const { return PrimeConfig(p_, N_, D_, M2); }

    // Arithmetic compatibility for scalars (series additionally require equal M).
    bool compatible(const PrimeConfig& o) const noexcept {
        return p_ == o.p_ && N_ == o.N_ && D_ == o.D_;
    }
    bool operator==(const PrimeConfig& o) const noexcept {
        return p_ == o.p_ && N_ == o.N_ && D_ == o.D_ && M_ == o.M_;
    }

private:
    std::uint64_t p_;
    int N_, D_, M_;
    std::shared_ptr<const std::vector<bigint>> powers_; // p^0 .. p^(N+D+2)
};

// Scaled fixed-precision p-adic number: value = p^shift * mantissa, known
// modulo p^prec.  Canonical form: shift == 0, or shift in [-D, 0) with
// p not dividing the mantissa; mantissa reduced to [0, p^(prec-shift)).
// The exact bit records that the stored pair IS the value (no truncation
// happened anywhere in its history), which lets precision boosts reinterpret
// it at a higher working precision without overclaiming digits.
class PAdicNum {
public:
    static PAdicNum from_integer(const PrimeConfig& cfg, const bigint& v);
    static PAdicNum from_integer(const PrimeConfig& cfg, long v);
    // Canonicalizes (mantissa, shift) at the stated precision.  exact_hint
    // is kept only when the canonical reduction preserves the value.
    static PAdicNum from_parts(const PrimeConfig& cfg, bigint mantissa, int shift, int prec,
                               bool exact_hint = false);
    static PAdicNum from_decimal(const PrimeConfig& cfg, std::string_view dec);
    static PAdicNum zero(const PrimeConfig& cfg);
    static PAdicNum one(const PrimeConfig& cfg);

    const PrimeConfig& config() const noexcept { return cfg_; }
    const bigint& mantissa() const noexcept { return m_; }
    int shift() const noexcept { return s_; }
    int prec() const noexcept { return prec_; }
    bool is_exact() const noexcept { return exact_; }

    // Mantissa congruent to 0 at the stated precision.
    bool is_zero_at_prec() const noexcept { return m_ == 0; }
    // p-adic valuation of the value; nullopt means ">= prec".
    std::optional<long> valuation() const;
    // Lower bound on the valuation that is always defined.
    long valuation_floor() const { return valuation().value_or(prec_); }

    PAdicNum operator-() const;
    friend PAdicNum operator+(const PAdicNum& a, const PAdicNum& b);
    friend PAdicNum operator-(const PAdicNum& a, const PAdicNum& b);
    friend PAdicNum operator*(const PAdicNum& a, const PAdicNum& b);

    // Multiplicative inverse of a unit (valuation 0); errors: NonUnit.
    PAdicNum inv() const;
    // a/b, allowing a negative-shift (denominator) result within cap D.
    PAdicNum divide_exact(const PAdicNum& b) const;
    // a/b requiring an integral quotient; errors: IntegralityFailure.
    PAdicNum divide_integral(const PAdicNum& b) const;
    PAdicNum pow_int(unsigned long e) const;

    // Weaken the declared precision to n (n <= prec).
    PAdicNum reduce_to(int n) const;
    // Move to another config: exact values keep full precision there,
    // inexact ones keep their declared digits.
    PAdicNum lift_to(const PrimeConfig& cfg2) const;

    // Values agree modulo p^n; requires n <= min(prec, b.prec).
    bool equal_at(const PAdicNum& b, int n) const;

    std::string mantissa_decimal() const;

private:
    PAdicNum(const PrimeConfig& cfg, bigint m, int s, int prec, bool exact)
        : cfg_(cfg), m_(std::move(m)), s_(s), prec_(prec), exact_(exact) {}

    PrimeConfig cfg_;
    bigint m_;
    int s_;
    int prec_;
    bool exact_;
};

// Legendre's formula: v_p(n!).
long factorial_valuation(std::uint64_t p, unsigned long n);

} // namespace fglab

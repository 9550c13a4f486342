#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fglab/padic.hpp"

namespace fglab {

enum class RingKind { base, cyclotomic, eisenstein, generic };

// Quotient ring (Z/p^N)[T]/(g(T)) with g monic.  For base/cyclotomic/
// eisenstein kinds the T-adic valuation is available, normalized so that
// val(p) = e (the ramification index).
class ExtRing : public std::enable_shared_from_this<ExtRing> {
public:
    // (Z/p^N)[T]/(T): scalars, e = 1.
    static std::shared_ptr<const ExtRing> base(const PrimeConfig& cfg);
    // (Z/p^N)[T]/(Phi_{p^k}(1+T)), e = phi(p^k); T represents zeta_{p^k}-1.
    static std::shared_ptr<const ExtRing> cyclotomic(const PrimeConfig& cfg, int k);
    // User modulus; kind eisenstein requires the Eisenstein shape, generic skips it.
    static std::shared_ptr<const ExtRing> from_modulus(const PrimeConfig& cfg,
                                                       std::vector<PAdicNum> monic_modulus,
                                                       RingKind kind);

    const PrimeConfig& config() const noexcept { return cfg_; }
    RingKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return static_cast<int>(modulus_.size()) - 1; }
    int ram_index() const noexcept { return e_; }
    int cyclotomic_level() const noexcept { return level_; }
    const std::vector<PAdicNum>& modulus() const noexcept { return modulus_; }
    bool has_valuation() const noexcept { return kind_ != RingKind::generic; }

    bool same_ring(const ExtRing& o) const;

private:
    ExtRing(const PrimeConfig& cfg, std::vector<PAdicNum> modulus, RingKind kind, int e, int level)
        : cfg_(cfg), modulus_(std::move(modulus)), kind_(kind), e_(e), level_(level) {}

    PrimeConfig cfg_;
    std::vector<PAdicNum> modulus_; // ascending, monic
    RingKind kind_;
    int e_;
    int level_;
};

// Valuation of an ExtElem: exact value, or a lower bound when every
// contributing coefficient is zero at its precision.
struct ExtVal {
    long v;
    bool exact;

    bool at_least(long bound) const noexcept { return v >= bound; }
};

class ExtElem {
public:
    static ExtElem zero(std::shared_ptr<const ExtRing> ring);
    static ExtElem one(std::shared_ptr<const ExtRing> ring);
    static ExtElem generator(std::shared_ptr<const ExtRing> ring); // T
    static ExtElem constant(std::shared_ptr<const ExtRing> ring, PAdicNum c);
    // Reduces the given polynomial (ascending coefficients) modulo g.
    static ExtElem from_coeffs(std::shared_ptr<const ExtRing> ring, std::vector<PAdicNum> coeffs);

    const std::shared_ptr<const ExtRing>& ring() const noexcept { return ring_; }
    const std::vector<PAdicNum>& coeffs() const noexcept { return c_; } // size deg g

    bool is_zero_at_prec() const;
    // Valuation normalized with val(p) = e; capped at e*N.  Errors: UnsupportedRing.
    ExtVal valuation() const;
    // Lowest guaranteed precision (as a T-valuation) of the representation.
    long precision_floor() const;

    ExtElem operator-() const;
    friend ExtElem operator+(const ExtElem& a, const ExtElem& b);
    friend ExtElem operator-(const ExtElem& a, const ExtElem& b);
    friend ExtElem operator*(const ExtElem& a, const ExtElem& b);
    ExtElem scaled(const PAdicNum& c) const;
    ExtElem pow_int(unsigned long e) const;

    // Inverse of a unit (valuation exactly 0).
    ExtElem inv() const;
    // Solve this * x = rhs (Gaussian elimination over the coefficient ring;
    // denominators within cap D are permitted in intermediate steps).
    ExtElem solve_mul(const ExtElem& rhs) const;

    bool equal_at_val(const ExtElem& b, long bound) const;

private:
    ExtElem(std::shared_ptr<const ExtRing> ring, std::vector<PAdicNum> c)
        : ring_(std::move(ring)), c_(std::move(c)) {}

    std::shared_ptr<const ExtRing> ring_;
    std::vector<PAdicNum> c_;
};

} // namespace fglab

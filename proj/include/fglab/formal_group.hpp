#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fglab/series.hpp"

namespace fglab {

enum class Stability { stable, unstable, root_of_unity_at_precision };

// Verdict on u'(0): stable iff it is neither 0 nor a root of unity, both
// tested at the working precision.
Stability is_stable(const TruncatedSeries& u);
const char* stability_name(Stability s);

// Per-solver account of where p-adic digits were spent.
struct PrecisionBudget {
    int input_floor = 0;
    int internal_precision = 0;
    int output_floor = 0;
    std::vector<std::pair<int, long>> losses; // degree -> valuation of the divisor
    long total_loss() const {
        long t = 0;
        for (auto& [d, v] : losses) t += v;
        return t;
    }
};

// Solve g o phi = phi o (f, ..., f) degree by degree, phi == L mod degree 2.
// Every division is checked for exact divisibility; a failure means the
// (f, g, L) triple admits no integral solution.
TruncatedSeries lt_solve(const TruncatedSeries& f, const TruncatedSeries& g,
                         const std::vector<PAdicNum>& linear_form, PrecisionBudget* budget = nullptr);

// Unique h with h == L mod degree 2 and h o (u,...,u) = u o h, for stable u.
// Output floor shrinks by val(u'(0) - u'(0)^m) at each degree m.
TruncatedSeries solve_commutant(const TruncatedSeries& u, const std::vector<PAdicNum>& linear_form,
                                PrecisionBudget* budget = nullptr);

enum class GroupProvenance { multiplicative, additive, lubin_tate, user_supplied };
const char* provenance_name(GroupProvenance p);

struct Endomorphism {
    TruncatedSeries series; // one variable, series(0) = 0
    PAdicNum a;             // series'(0)
    Stability stability;
};

struct CheckResult {
    bool ok;
    std::optional<std::vector<int>> first_failure; // smallest offending exponent vector
    int checked_floor;
};

// Validated formal group law: law == X+Y mod degree 2, commutative,
// associative at the stated precision, law(X, 0) = X.
class FormalGroup {
public:
    static FormalGroup multiplicative(const PrimeConfig& cfg); // X + Y + XY
    static FormalGroup additive(const PrimeConfig& cfg);       // X + Y
    // Group with [f'(0)] = f, built by the functional-equation recursion.
    static FormalGroup from_lubin_tate(const TruncatedSeries& f);
    // User-supplied law; axioms are validated at the stated precision.
    static FormalGroup from_law(const TruncatedSeries& law);

    const PrimeConfig& config() const noexcept { return law_.config(); }
    const TruncatedSeries& law() const noexcept { return law_; }
    GroupProvenance provenance() const noexcept { return prov_; }
    const std::optional<TruncatedSeries>& lt_series() const noexcept { return lt_f_; }

    // Stable endomorphism used to seed solves on user-supplied groups.
    FormalGroup with_registered_endo(const TruncatedSeries& u) const;
    const std::optional<TruncatedSeries>& registered_endo() const noexcept { return registered_u_; }

    // Height read off the Weierstrass degree of [p] mod p; nullopt while it
    // cannot be computed (user-supplied law without a registered endo).
    struct Height {
        std::optional<int> finite;
        bool infinite_at_cap = false;
        bool known() const { return finite.has_value() || infinite_at_cap; }
    };
    Height height() const;

    // x (+) y for ring elements of positive valuation.
    ExtElem add_points(const ExtElem& x, const ExtElem& y) const;

private:
    FormalGroup(TruncatedSeries law, GroupProvenance prov) : law_(std::move(law)), prov_(prov) {}

    TruncatedSeries law_;
    GroupProvenance prov_;
    std::optional<TruncatedSeries> lt_f_;
    std::optional<TruncatedSeries> registered_u_;
};

// [a]: the endomorphism with derivative a at 0.  Construction depends on the
// provenance: binomial series for the multiplicative group, a*X for the
// additive one, lt_solve(f, f, aX) for Lubin-Tate groups, and
// solve_commutant against the registered endomorphism otherwise.
Endomorphism mul_by(const FormalGroup& F, const PAdicNum& a, PrecisionBudget* budget = nullptr);

// Validates h as an endomorphism series of F (defining identity at precision).
Endomorphism make_endomorphism(const FormalGroup& F, const TruncatedSeries& h);

// h(F(X,Y)) == F(h(X), h(Y)) at precision, with the first offending
// exponent vector on failure.
CheckResult check_endomorphism(const FormalGroup& F, const TruncatedSeries& h);

// h(F(X,Y)) == G(h(X), h(Y)) at precision.
CheckResult check_homomorphism(const FormalGroup& F, const FormalGroup& G, const TruncatedSeries& h);

// K(X,Y) = h(F(h^{o-1}(X), h^{o-1}(Y))); candidate law conjugate to F.
TruncatedSeries conjugate_group(const FormalGroup& F, const TruncatedSeries& h);

struct Decomposition {
    std::vector<Endomorphism> parts; // [a_i]
    std::vector<PAdicNum> scalars;   // a_i
    int checked_floor;
};

// Write a d-variable series commuting with a stable endomorphism u as
// [a_1](X_1) (+) ... (+) [a_d](X_d); errors: NotCommuting,
// IntegralityFailure, ReconstructionMismatch.
Decomposition decompose_commuting(const FormalGroup& F, const TruncatedSeries& u, const TruncatedSeries& h);

// Formal logarithm: Log'(X) = (dF/dY(X,0))^{-1}, Log(0) = 0, Log'(0) = 1.
// Coefficients gain denominators dividing k at degree k.
TruncatedSeries formal_log(const FormalGroup& F, PrecisionBudget* budget = nullptr);

// X_1 (+) X_2 (+) ... (+) X_d as a d-variable series.
TruncatedSeries law_sum(const FormalGroup& F, int d);

} // namespace fglab

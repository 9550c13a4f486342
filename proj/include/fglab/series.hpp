#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fglab/ext_ring.hpp"
#include "fglab/padic.hpp"

namespace fglab {

// Shared exponent-vector table for d variables, total degree <= M.
// Order: graded, lexicographic within each degree.
class MonomialBasis {
public:
    static std::shared_ptr<const MonomialBasis> get(int d, int M);

    int d() const noexcept { return d_; }
    int degree_cap() const noexcept { return M_; }
    std::size_t size() const noexcept { return exps_.size(); }
    const std::vector<int>& exponents(std::size_t idx) const { return exps_[idx]; }
    int total_degree(std::size_t idx) const { return deg_[idx]; }
    // index of an exponent vector; nullopt when the total degree exceeds M
    std::optional<std::size_t> index(const std::vector<int>& e) const;
    std::optional<std::size_t> index_of_sum(std::size_t a, std::size_t b) const;
    // first index of the given total degree
    std::size_t degree_begin(int deg) const { return deg_begin_[static_cast<std::size_t>(deg)]; }

private:
    MonomialBasis(int d, int M);

    int d_, M_;
    std::vector<std::vector<int>> exps_;
    std::vector<int> deg_;
    std::vector<std::size_t> deg_begin_;
};

// Declared lower bound on the valuation of the truncated-away coefficients,
// needed for honest evaluation guarantees.
enum class TailModel {
    integral,         // val(a_k) >= 0 for all k
    log_denominators, // val(a_k) >= -floor(log_p k)
    unbounded,        // no declared bound; evaluation refuses to certify
};

// Dense power series in d variables over PAdicNum, truncated at total degree
// M = cfg.degree_cap().  All coefficients are kept reduced to the uniform
// prec_floor; values are immutable after construction.
class TruncatedSeries {
public:
    TruncatedSeries(const PrimeConfig& cfg, int d, int prec_floor);
    static TruncatedSeries zero(const PrimeConfig& cfg, int d) { return TruncatedSeries(cfg, d, cfg.precision()); }
    static TruncatedSeries variable(const PrimeConfig& cfg, int d, int var); // X_var
    static TruncatedSeries constant(const PrimeConfig& cfg, int d, const PAdicNum& c);
    static TruncatedSeries from_terms(const PrimeConfig& cfg, int d, int prec_floor,
                                      const std::vector<std::pair<std::vector<int>, PAdicNum>>& terms,
                                      TailModel tail = TailModel::integral);

    const PrimeConfig& config() const noexcept { return cfg_; }
    int vars() const noexcept { return d_; }
    int prec_floor() const noexcept { return floor_; }
    TailModel tail() const noexcept { return tail_; }
    const MonomialBasis& basis() const noexcept { return *basis_; }
    const std::vector<PAdicNum>& coeffs() const noexcept { return c_; }

    const PAdicNum& coeff(const std::vector<int>& exps) const;
    const PAdicNum& coeff_at(std::size_t idx) const { return c_[idx]; }
    bool is_zero() const;
    bool constant_term_zero() const { return c_[0].is_zero_at_prec(); }
    // Lowest stored shift (0 for integral series, negative with denominators).
    int min_shift() const;

    TruncatedSeries operator-() const;
    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries scaled(const PAdicNum& s) const;

    TruncatedSeries reduce_to(int floor) const;
    TruncatedSeries lift_to(const PrimeConfig& cfg2) const;
    TruncatedSeries with_tail(TailModel t) const;
    // X_i |-> X_(i in wider variable set); d2 >= vars()
    TruncatedSeries embed(int d2, int first_var) const;
    TruncatedSeries homogeneous_part(int deg) const;
    // substitute 0 for the given variable (keeps d)
    TruncatedSeries at_zero(int var) const;
    // drop to one variable, requiring all other exponents to vanish
    TruncatedSeries project_to_single_var(int var) const;

    std::optional<std::vector<int>> first_nonzero_at(int prec) const;

private:
    friend class SeriesBuilder;

    PrimeConfig cfg_;
    int d_;
    int floor_;
    TailModel tail_ = TailModel::integral;
    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<PAdicNum> c_;
};

// Mutable accumulation buffer; finish() canonicalizes to the uniform floor.
class SeriesBuilder {
public:
    SeriesBuilder(const PrimeConfig& cfg, int d, int prec_floor);
    explicit SeriesBuilder(const TruncatedSeries& s);

    void add(std::size_t idx, const PAdicNum& v);
    void set(std::size_t idx, const PAdicNum& v);
    void lower_floor(int f);
    const MonomialBasis& basis() const noexcept { return *basis_; }
    int prec_floor() const noexcept { return floor_; }
    PAdicNum& at(std::size_t idx) { return c_[idx]; }

    TruncatedSeries finish(TailModel tail = TailModel::integral) &&;

private:
    PrimeConfig cfg_;
    int d_;
    int floor_;
    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<PAdicNum> c_;
};

// -- operations -------------------------------------------------------------

// outer(inner_0, ..., inner_{k-1}); every inner series must have zero
// constant term and they must share variable count and config.
TruncatedSeries compose(const TruncatedSeries& outer, std::span<const TruncatedSeries> inners);
TruncatedSeries compose(const TruncatedSeries& outer, std::initializer_list<TruncatedSeries> inners);
// one-variable convenience
TruncatedSeries compose1(const TruncatedSeries& outer, const TruncatedSeries& inner);

// Compositional inverse of a one-variable series with unit derivative at 0.
TruncatedSeries comp_inverse(const TruncatedSeries& h);

TruncatedSeries derivative(const TruncatedSeries& h, int var);
std::vector<PAdicNum> linear_part(const TruncatedSeries& h);

// Multiplicative inverse of a series with unit constant term.
TruncatedSeries series_inv_unit(const TruncatedSeries& h);

// Weierstrass degree of a one-variable series: first coefficient of
// valuation 0; nullopt when the series is 0 mod p through degree M.
std::optional<int> weierstrass_degree(const TruncatedSeries& h);

struct WeierstrassPrep {
    TruncatedSeries unit;          // unit constant term
    TruncatedSeries distinguished; // monic, degree wdeg, lower coeffs of val >= 1
    int wdeg;
};
WeierstrassPrep weierstrass_prep(const TruncatedSeries& h);

struct EvalResult {
    ExtElem value;
    long guaranteed_val_prec; // value is h(z) modulo pi^g
};
// Evaluate a one-variable series at a point of positive valuation.
EvalResult eval_at(const TruncatedSeries& h, const ExtElem& z);

// Evaluate treating the truncation as a polynomial (no tail term); the point
// may be a unit.  Coefficients must be integral.
EvalResult eval_poly_at(const TruncatedSeries& f, const ExtElem& z);

// Newton refinement of an approximate root; requires the hypothesis
// val(f(seed)) > 2*val(f'(seed)).  Quadratic convergence.
ExtElem hensel_lift(const TruncatedSeries& f, const ExtElem& seed, long target_val_prec);

bool series_equal_at(const TruncatedSeries& a, const TruncatedSeries& b, int prec);
// smallest (graded-lex) exponent vector where a and b differ at the given precision
std::optional<std::vector<int>> series_first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b,
                                                      int prec);

} // namespace fglab

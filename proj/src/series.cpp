#include "fglab/series.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace fglab {

namespace {

void gen_exponents(int d, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == d - 1) {
        cur.push_back(remaining);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        cur.push_back(e);
        gen_exponents(d, remaining - e, cur, out);
        cur.pop_back();
    }
}

std::string exps_to_string(const std::vector<int>& e) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ")";
    return os.str();
}

} // namespace

MonomialBasis::MonomialBasis(int d, int M) : d_(d), M_(M) {
    deg_begin_.resize(static_cast<std::size_t>(M) + 2, 0);
    std::vector<int> cur;
    for (int t = 0; t <= M; ++t) {
        deg_begin_[static_cast<std::size_t>(t)] = exps_.size();
        std::vector<std::vector<int>> level;
        gen_exponents(d, t, cur, level);
        for (auto& e : level) {
            exps_.push_back(std::move(e));
            deg_.push_back(t);
        }
    }
    deg_begin_[static_cast<std::size_t>(M) + 1] = exps_.size();
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int d, int M) {
    if (d < 1 || M < 0) raise(errc::bad_argument, "monomial basis needs d >= 1, M >= 0");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{d, M}];
    if (!slot) slot = std::shared_ptr<const MonomialBasis>(new MonomialBasis(d, M));
    return slot;
}

std::optional<std::size_t> MonomialBasis::index(const std::vector<int>& e) const {
    if (static_cast<int>(e.size()) != d_) raise(errc::bad_argument, "exponent vector has wrong arity");
    int t = 0;
    for (int x : e) {
        if (x < 0) raise(errc::bad_argument, "negative exponent");
        t += x;
    }
    if (t > M_) return std::nullopt;
    // within the degree block, locate by lex order
    std::size_t lo = deg_begin_[static_cast<std::size_t>(t)];
    std::size_t hi = deg_begin_[static_cast<std::size_t>(t) + 1];
    auto it = std::lower_bound(exps_.begin() + static_cast<std::ptrdiff_t>(lo),
                               exps_.begin() + static_cast<std::ptrdiff_t>(hi), e);
    return static_cast<std::size_t>(it - exps_.begin());
}

std::optional<std::size_t> MonomialBasis::index_of_sum(std::size_t a, std::size_t b) const {
    if (deg_[a] + deg_[b] > M_) return std::nullopt;
    std::vector<int> e(exps_[a]);
    for (int i = 0; i < d_; ++i) e[static_cast<std::size_t>(i)] += exps_[b][static_cast<std::size_t>(i)];
    return index(e);
}

TruncatedSeries::TruncatedSeries(const PrimeConfig& cfg, int d, int prec_floor)
    : cfg_(cfg), d_(d), floor_(prec_floor), basis_(MonomialBasis::get(d, cfg.degree_cap())),
      c_(basis_->size(), PAdicNum::zero(cfg).reduce_to(prec_floor)) {
    if (prec_floor < 1 || prec_floor > cfg.precision())
        raise(errc::precision_exhausted, "series precision floor out of range");
}

TruncatedSeries TruncatedSeries::variable(const PrimeConfig& cfg, int d, int var) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(var)] = 1;
    return from_terms(cfg, d, cfg.precision(), {{e, PAdicNum::one(cfg)}});
}

TruncatedSeries TruncatedSeries::constant(const PrimeConfig& cfg, int d, const PAdicNum& c) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    return from_terms(cfg, d, c.prec(), {{e, c}});
}

TruncatedSeries TruncatedSeries::from_terms(const PrimeConfig& cfg, int d, int prec_floor,
                                            const std::vector<std::pair<std::vector<int>, PAdicNum>>& terms,
                                            TailModel tail) {
    SeriesBuilder b(cfg, d, prec_floor);
    for (const auto& [e, v] : terms) {
        auto idx = b.basis().index(e);
        if (!idx)
            raise(errc::bad_argument, "term " + exps_to_string(e) + " exceeds total degree cap M=" +
                                          std::to_string(cfg.degree_cap()));
        b.add(*idx, v);
    }
    return std::move(b).finish(tail);
}

const PAdicNum& TruncatedSeries::coeff(const std::vector<int>& exps) const {
    auto idx = basis_->index(exps);
    if (!idx) raise(errc::bad_argument, "coefficient index beyond degree cap");
    return c_[*idx];
}

bool TruncatedSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const PAdicNum& x) { return x.is_zero_at_prec(); });
}

int TruncatedSeries::min_shift() const {
    int s = 0;
    for (const auto& x : c_) s = std::min(s, x.shift());
    return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!(a.cfg_ == b.cfg_) || a.d_ != b.d_) raise(errc::config_mismatch, "series shapes differ");
    SeriesBuilder r(a.cfg_, a.d_, std::min(a.floor_, b.floor_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.set(i, a.c_[i] + b.c_[i]);
    TailModel t;
    if (a.tail_ == TailModel::unbounded || b.tail_ == TailModel::unbounded)
        t = TailModel::unbounded;
    else if (a.tail_ == TailModel::integral && b.tail_ == TailModel::integral)
        t = TailModel::integral;
    else
        t = TailModel::log_denominators;
    return std::move(r).finish(t);
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a + (-b);
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!(a.cfg_ == b.cfg_) || a.d_ != b.d_) raise(errc::config_mismatch, "series shapes differ");
    int floor = std::min(a.floor_ + std::min(0, b.min_shift()), b.floor_ + std::min(0, a.min_shift()));
    SeriesBuilder r(a.cfg_, a.d_, floor);
    const auto& basis = a.basis();
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero_at_prec()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j].is_zero_at_prec()) continue;
            auto k = basis.index_of_sum(i, j);
            if (!k) continue;
            r.add(*k, a.c_[i] * b.c_[j]);
        }
    }
    TailModel t = (a.tail_ == TailModel::integral && b.tail_ == TailModel::integral) ? TailModel::integral
                                                                                     : TailModel::unbounded;
    return std::move(r).finish(t);
}

TruncatedSeries TruncatedSeries::scaled(const PAdicNum& s) const {
    SeriesBuilder r(cfg_, d_, floor_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero_at_prec()) continue;
        r.set(i, c_[i] * s);
    }
    TailModel t = (tail_ == TailModel::integral && s.shift() >= 0) ? TailModel::integral : TailModel::unbounded;
    if (tail_ == TailModel::log_denominators && s.shift() >= 0) t = TailModel::log_denominators;
    return std::move(r).finish(t);
}

TruncatedSeries TruncatedSeries::reduce_to(int floor) const {
    if (floor > floor_) raise(errc::bad_argument, "cannot raise a series precision floor");
    SeriesBuilder r(cfg_, d_, floor);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero_at_prec()) r.set(i, c_[i]);
    return std::move(r).finish(tail_);
}

TruncatedSeries TruncatedSeries::lift_to(const PrimeConfig& cfg2) const {
    if (cfg2.degree_cap() < cfg_.degree_cap())
        raise(errc::bad_argument, "lift target has a smaller degree cap");
    SeriesBuilder r(cfg2, d_, cfg2.precision());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero_at_prec()) continue;
        auto idx = r.basis().index(basis_->exponents(i));
        r.set(*idx, c_[i].lift_to(cfg2));
    }
    return std::move(r).finish(tail_);
}

TruncatedSeries TruncatedSeries::with_tail(TailModel t) const {
    TruncatedSeries r = *this;
    r.tail_ = t;
    return r;
}

TruncatedSeries TruncatedSeries::embed(int d2, int first_var) const {
    if (d2 < d_ || first_var < 0 || first_var + d_ > d2)
        raise(errc::bad_argument, "embedding does not fit the target arity");
    SeriesBuilder r(cfg_, d2, floor_);
    std::vector<int> e2(static_cast<std::size_t>(d2), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero_at_prec()) continue;
        const auto& e = basis_->exponents(i);
        std::fill(e2.begin(), e2.end(), 0);
        for (int j = 0; j < d_; ++j) e2[static_cast<std::size_t>(first_var + j)] = e[static_cast<std::size_t>(j)];
        r.set(*r.basis().index(e2), c_[i]);
    }
    return std::move(r).finish(tail_);
}

TruncatedSeries TruncatedSeries::homogeneous_part(int deg) const {
    SeriesBuilder r(cfg_, d_, floor_);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (basis_->total_degree(i) == deg && !c_[i].is_zero_at_prec()) r.set(i, c_[i]);
    return std::move(r).finish(tail_);
}

TruncatedSeries TruncatedSeries::at_zero(int var) const {
    SeriesBuilder r(cfg_, d_, floor_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero_at_prec()) continue;
        if (basis_->exponents(i)[static_cast<std::size_t>(var)] == 0) r.set(i, c_[i]);
    }
    return std::move(r).finish(tail_);
}

TruncatedSeries TruncatedSeries::project_to_single_var(int var) const {
    SeriesBuilder r(cfg_, 1, floor_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero_at_prec()) continue;
        const auto& e = basis_->exponents(i);
        for (int j = 0; j < d_; ++j) {
            if (j != var && e[static_cast<std::size_t>(j)] != 0)
                raise(errc::bad_argument, "series is not supported on the requested variable");
        }
        r.set(*r.basis().index({e[static_cast<std::size_t>(var)]}), c_[i]);
    }
    return std::move(r).finish(tail_);
}

std::optional<std::vector<int>> TruncatedSeries::first_nonzero_at(int prec) const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i].valuation_floor() < prec) return basis_->exponents(i);
    return std::nullopt;
}

SeriesBuilder::SeriesBuilder(const PrimeConfig& cfg, int d, int prec_floor)
    : cfg_(cfg), d_(d), floor_(prec_floor), basis_(MonomialBasis::get(d, cfg.degree_cap())),
      c_(basis_->size(), PAdicNum::zero(cfg)) {
    if (prec_floor < 1) raise(errc::precision_exhausted, "series precision floor exhausted");
}

SeriesBuilder::SeriesBuilder(const TruncatedSeries& s)
    : cfg_(s.config()), d_(s.vars()), floor_(s.prec_floor()),
      basis_(MonomialBasis::get(d_, cfg_.degree_cap())), c_(s.coeffs()) {}

void SeriesBuilder::add(std::size_t idx, const PAdicNum& v) {
    c_[idx] = c_[idx].is_zero_at_prec() && c_[idx].prec() == cfg_.precision() ? v : c_[idx] + v;
}

void SeriesBuilder::set(std::size_t idx, const PAdicNum& v) {
    c_[idx] = v;
}

void SeriesBuilder::lower_floor(int f) {
    floor_ = std::min(floor_, f);
}

TruncatedSeries SeriesBuilder::finish(TailModel tail) && {
    int floor = std::min(floor_, cfg_.precision());
    for (const auto& x : c_) floor = std::min(floor, x.prec());
    if (floor < 1) raise(errc::precision_exhausted, "series precision floor exhausted");
    TruncatedSeries r(cfg_, d_, floor);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i].reduce_to(floor);
    r.tail_ = tail;
    return r;
}

// -- composition ------------------------------------------------------------

TruncatedSeries compose(const TruncatedSeries& outer, std::span<const TruncatedSeries> inners) {
    if (static_cast<int>(inners.size()) != outer.vars())
        raise(errc::bad_argument, "composition needs one inner series per outer variable");
    const auto& cfg = outer.config();
    const int di = inners[0].vars();
    int floor = outer.prec_floor();
    bool inners_integral = true;
    for (const auto& g : inners) {
        if (!(g.config() == cfg) || g.vars() != di) raise(errc::config_mismatch, "inner series shapes differ");
        if (!g.constant_term_zero())
            raise(errc::inner_constant_term_nonzero, "composition requires inner series with zero constant term");
        floor = std::min(floor, g.prec_floor());
        if (g.tail() != TailModel::integral || g.min_shift() < 0) inners_integral = false;
    }
    const int M = cfg.degree_cap();
    const auto& ob = outer.basis();

    // powers of each inner series, up to the largest exponent used
    std::vector<int> max_exp(static_cast<std::size_t>(outer.vars()), 0);
    for (std::size_t i = 0; i < outer.coeffs().size(); ++i) {
        if (outer.coeff_at(i).is_zero_at_prec()) continue;
        const auto& e = ob.exponents(i);
        for (int j = 0; j < outer.vars(); ++j)
            max_exp[static_cast<std::size_t>(j)] = std::max(max_exp[static_cast<std::size_t>(j)], e[static_cast<std::size_t>(j)]);
    }
    std::vector<std::vector<TruncatedSeries>> pows;
    pows.reserve(inners.size());
    for (std::size_t j = 0; j < inners.size(); ++j) {
        std::vector<TruncatedSeries> pj;
        pj.push_back(TruncatedSeries::constant(cfg, di, PAdicNum::one(cfg)));
        for (int e = 1; e <= std::min(max_exp[j], M); ++e) pj.push_back(pj.back() * inners[j]);
        pows.push_back(std::move(pj));
    }

    SeriesBuilder acc(cfg, di, floor);
    for (std::size_t i = 0; i < outer.coeffs().size(); ++i) {
        const PAdicNum& c = outer.coeff_at(i);
        if (c.is_zero_at_prec()) continue;
        const auto& e = ob.exponents(i);
        if (ob.total_degree(i) > M) continue;
        // product of the required powers; min total degree of the product is deg(e)
        std::optional<TruncatedSeries> term;
        for (int j = 0; j < outer.vars(); ++j) {
            int ej = e[static_cast<std::size_t>(j)];
            if (ej == 0) continue;
            const TruncatedSeries& pw = pows[static_cast<std::size_t>(j)][static_cast<std::size_t>(ej)];
            term = term ? *term * pw : pw;
        }
        if (!term) { // constant term of the outer series
            acc.add(0, c);
            continue;
        }
        TruncatedSeries scaled_term = term->scaled(c);
        acc.lower_floor(scaled_term.prec_floor());
        for (std::size_t k = 0; k < scaled_term.coeffs().size(); ++k)
            if (!scaled_term.coeff_at(k).is_zero_at_prec()) acc.add(k, scaled_term.coeff_at(k));
    }
    TailModel t;
    if (outer.tail() == TailModel::integral && outer.min_shift() >= 0 && inners_integral)
        t = TailModel::integral;
    else if (outer.tail() == TailModel::log_denominators && inners_integral)
        t = TailModel::log_denominators;
    else
        t = TailModel::unbounded;
    return std::move(acc).finish(t);
}

TruncatedSeries compose(const TruncatedSeries& outer, std::initializer_list<TruncatedSeries> inners) {
    std::vector<TruncatedSeries> v(inners);
    return compose(outer, std::span<const TruncatedSeries>(v));
}

TruncatedSeries compose1(const TruncatedSeries& outer, const TruncatedSeries& inner) {
    return compose(outer, std::span<const TruncatedSeries>(&inner, 1));
}

TruncatedSeries comp_inverse(const TruncatedSeries& h) {
    if (h.vars() != 1) raise(errc::bad_argument, "compositional inverse needs a one-variable series");
    if (!h.constant_term_zero()) raise(errc::bad_argument, "compositional inverse needs h(0) = 0");
    const auto& cfg = h.config();
    PAdicNum a1 = h.coeff({1});
    if (a1.is_zero_at_prec() || a1.valuation_floor() != 0)
        raise(errc::non_unit_derivative, "h'(0) must be a unit");
    const int M = cfg.degree_cap();
    PAdicNum a1inv = a1.inv();
    TruncatedSeries g = TruncatedSeries::variable(cfg, 1, 0).scaled(a1inv).reduce_to(h.prec_floor());
    for (int k = 2; k <= M; ++k) {
        TruncatedSeries r = compose1(h, g);
        PAdicNum c = r.coeff({k});
        if (c.is_zero_at_prec()) continue;
        SeriesBuilder b(g);
        b.add(*g.basis().index({k}), -(c * a1inv));
        g = std::move(b).finish(g.tail());
    }
    return g;
}

TruncatedSeries derivative(const TruncatedSeries& h, int var) {
    if (var < 0 || var >= h.vars()) raise(errc::bad_argument, "derivative variable out of range");
    const auto& cfg = h.config();
    SeriesBuilder r(cfg, h.vars(), h.prec_floor());
    const auto& basis = h.basis();
    for (std::size_t i = 0; i < h.coeffs().size(); ++i) {
        const PAdicNum& c = h.coeff_at(i);
        if (c.is_zero_at_prec()) continue;
        std::vector<int> e = basis.exponents(i);
        int k = e[static_cast<std::size_t>(var)];
        if (k == 0) continue;
        e[static_cast<std::size_t>(var)] = k - 1;
        r.add(*basis.index(e), c * PAdicNum::from_integer(cfg, static_cast<long>(k)));
    }
    // k * a_k is integral for both supported tail models
    TailModel t = h.tail() == TailModel::unbounded ? TailModel::unbounded : TailModel::integral;
    return std::move(r).finish(t);
}

std::vector<PAdicNum> linear_part(const TruncatedSeries& h) {
    std::vector<PAdicNum> out;
    out.reserve(static_cast<std::size_t>(h.vars()));
    for (int j = 0; j < h.vars(); ++j) {
        std::vector<int> e(static_cast<std::size_t>(h.vars()), 0);
        e[static_cast<std::size_t>(j)] = 1;
        out.push_back(h.coeff(e));
    }
    return out;
}

TruncatedSeries series_inv_unit(const TruncatedSeries& h) {
    const auto& cfg = h.config();
    const PAdicNum c0 = h.coeff_at(0);
    if (c0.is_zero_at_prec() || c0.valuation_floor() != 0)
        raise(errc::non_unit, "series constant term is not a unit");
    PAdicNum c0inv = c0.inv();
    const auto& basis = h.basis();
    std::vector<PAdicNum> r(h.coeffs().size(), PAdicNum::zero(cfg));
    r[0] = c0inv;
    // graded order: every contribution uses strictly smaller total degree
    for (std::size_t i = 1; i < r.size(); ++i) {
        PAdicNum acc = PAdicNum::zero(cfg);
        const auto& e = basis.exponents(i);
        for (std::size_t j = 1; j < h.coeffs().size(); ++j) {
            if (h.coeff_at(j).is_zero_at_prec()) continue;
            const auto& ej = basis.exponents(j);
            std::vector<int> rest(e);
            bool fits = true;
            for (int t = 0; t < h.vars(); ++t) {
                rest[static_cast<std::size_t>(t)] -= ej[static_cast<std::size_t>(t)];
                if (rest[static_cast<std::size_t>(t)] < 0) { fits = false; break; }
            }
            if (!fits) continue;
            acc = acc + h.coeff_at(j) * r[*basis.index(rest)];
        }
        r[i] = -(c0inv * acc);
    }
    SeriesBuilder b(cfg, h.vars(), h.prec_floor());
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!r[i].is_zero_at_prec()) b.set(i, r[i]);
    return std::move(b).finish(h.tail());
}

std::optional<int> weierstrass_degree(const TruncatedSeries& h) {
    if (h.vars() != 1) raise(errc::bad_argument, "Weierstrass degree needs a one-variable series");
    for (std::size_t i = 0; i < h.coeffs().size(); ++i) {
        auto v = h.coeff_at(i).valuation();
        if (v && *v == 0) return static_cast<int>(i);
    }
    return std::nullopt;
}

WeierstrassPrep weierstrass_prep(const TruncatedSeries& h) {
    const auto& cfg = h.config();
    auto wd = weierstrass_degree(h);
    if (!wd)
        raise(errc::infinite_height_at_cap,
              "series is 0 mod p through degree M=" + std::to_string(cfg.degree_cap()));
    const int d = *wd;
    const int M = cfg.degree_cap();
    const auto& basis = h.basis();

    auto shift_down = [&](const TruncatedSeries& s) { // s div X^d
        SeriesBuilder b(cfg, 1, s.prec_floor());
        for (int k = d; k <= M; ++k) {
            const PAdicNum& c = s.coeff({k});
            if (!c.is_zero_at_prec()) b.set(*basis.index({k - d}), c);
        }
        return std::move(b).finish(s.tail());
    };
    auto low_part = [&](const TruncatedSeries& s) { // s mod X^d
        SeriesBuilder b(cfg, 1, s.prec_floor());
        for (int k = 0; k < d; ++k) {
            const PAdicNum& c = s.coeff({k});
            if (!c.is_zero_at_prec()) b.set(*basis.index({k}), c);
        }
        return std::move(b).finish(s.tail());
    };

    TruncatedSeries b0 = shift_down(h);
    TruncatedSeries a_low = low_part(h);
    TruncatedSeries b0inv = series_inv_unit(b0);

    // divide X^d by h: X^d = q*h + r, deg r < d
    TruncatedSeries q = TruncatedSeries::zero(cfg, 1).reduce_to(h.prec_floor());
    TruncatedSeries r = TruncatedSeries::variable(cfg, 1, 0);
    {
        SeriesBuilder b(cfg, 1, h.prec_floor());
        b.set(*basis.index({d}), PAdicNum::one(cfg));
        r = std::move(b).finish(TailModel::integral);
    }
    for (int round = 0; round <= cfg.precision() + 2; ++round) {
        TruncatedSeries t = shift_down(r);
        if (t.is_zero()) break;
        TruncatedSeries dq = b0inv * t;
        q = q + dq;
        r = low_part(r) - dq * a_low;
    }

    // q*h = X^d - (r mod X^d), so h = q^{-1} * (X^d - r_low)
    TruncatedSeries r_low = low_part(r);
    SeriesBuilder pb(cfg, 1, r_low.prec_floor());
    for (int k = 0; k < d; ++k) {
        const PAdicNum& c = r_low.coeff({k});
        if (!c.is_zero_at_prec()) pb.set(*basis.index({k}), -c);
    }
    pb.set(*basis.index({d}), PAdicNum::one(cfg));
    TruncatedSeries dist = std::move(pb).finish(TailModel::integral);
    TruncatedSeries unit = series_inv_unit(q);
    return WeierstrassPrep{std::move(unit), std::move(dist), d};
}

EvalResult eval_at(const TruncatedSeries& h, const ExtElem& z) {
    if (h.vars() != 1) raise(errc::bad_argument, "evaluation needs a one-variable series");
    if (h.tail() == TailModel::unbounded)
        raise(errc::bad_argument, "series has no declared tail bound; cannot certify an evaluation");
    const auto& ring = z.ring();
    if (!ring->has_valuation())
        raise(errc::unsupported_ring, "evaluation requires a ring with a valuation");
    ExtVal vz = z.valuation();
    if (vz.exact && vz.v < 1) raise(errc::divergent_evaluation, "evaluation point must have valuation >= 1");
    if (!vz.exact && vz.v < 1)
        raise(errc::divergent_evaluation, "evaluation point valuation is not certified >= 1");
    const long e = ring->ram_index();
    const long M = h.config().degree_cap();
    const long cap = e * ring->config().precision();
    const long v_low = vz.v;

    // Horner from the top degree
    ExtElem val = ExtElem::zero(ring);
    for (long k = M; k >= 0; --k) {
        PAdicNum c = h.coeff({static_cast<int>(k)});
        val = val * z + ExtElem::constant(ring, c.lift_to(ring->config()));
    }

    long tail_min;
    if (h.tail() == TailModel::integral) {
        tail_min = (M + 1) * v_low;
    } else {
        // val(a_k) >= -floor(log_p k): candidates are k = M+1 and powers of p above M
        auto log_floor = [&](long k) {
            long j = 0;
            bigint pw = 1;
            while (pw * static_cast<long long>(h.config().p()) <= k) {
                pw *= static_cast<long long>(h.config().p());
                ++j;
            }
            return j;
        };
        tail_min = (M + 1) * v_low - e * log_floor(M + 1);
        bigint pj = 1;
        long j = 0;
        while (pj <= M) { pj *= static_cast<long long>(h.config().p()); ++j; }
        for (int guard = 0; guard < 64 && pj <= bigint(1) << 62; ++guard) {
            long k = static_cast<long>(pj);
            long cand = k * v_low - e * j;
            tail_min = std::min(tail_min, cand);
            if (cand > cap) break;
            pj *= static_cast<long long>(h.config().p());
            ++j;
        }
    }
    long g = std::min({e * static_cast<long>(h.prec_floor()), tail_min, z.precision_floor(), cap});
    return EvalResult{std::move(val), g};
}

EvalResult eval_poly_at(const TruncatedSeries& f, const ExtElem& z) {
    if (f.vars() != 1) raise(errc::bad_argument, "evaluation needs a one-variable series");
    if (f.min_shift() < 0) raise(errc::bad_argument, "polynomial evaluation needs integral coefficients");
    const auto& ring = z.ring();
    if (!ring->has_valuation())
        raise(errc::unsupported_ring, "evaluation requires a ring with a valuation");
    ExtVal vz = z.valuation();
    if (vz.v < 0) raise(errc::divergent_evaluation, "evaluation point must be integral");
    const long e = ring->ram_index();
    const long M = f.config().degree_cap();
    const long cap = e * ring->config().precision();

    ExtElem val = ExtElem::zero(ring);
    for (long k = M; k >= 0; --k) {
        PAdicNum c = f.coeff({static_cast<int>(k)});
        val = val * z + ExtElem::constant(ring, c.lift_to(ring->config()));
    }
    long g = std::min({e * static_cast<long>(f.prec_floor()), z.precision_floor(), cap});
    return EvalResult{std::move(val), g};
}

ExtElem hensel_lift(const TruncatedSeries& f, const ExtElem& seed, long target_val_prec) {
    const auto& ring = seed.ring();
    const long e = ring->ram_index();
    const long cap = e * ring->config().precision();
    if (target_val_prec < 1) raise(errc::bad_argument, "target precision must be >= 1");
    const long tgt = std::min(target_val_prec, cap);

    TruncatedSeries fp = derivative(f, 0);
    EvalResult f0 = eval_poly_at(f, seed);
    EvalResult fp0 = eval_poly_at(fp, seed);
    ExtVal vf = f0.value.valuation();
    ExtVal vfp = fp0.value.valuation();
    if (!vfp.exact)
        raise(errc::newton_hypothesis_failed, "f'(seed) vanishes at the available precision");
    if (!vf.at_least(2 * vfp.v + 1))
        raise(errc::newton_hypothesis_failed,
              "val(f(seed)) = " + std::to_string(vf.v) + " is not above 2*val(f'(seed)) = " +
                  std::to_string(2 * vfp.v));

    ExtElem z = seed;
    for (int it = 0; it < 64; ++it) {
        EvalResult fz = eval_poly_at(f, z);
        if (fz.value.valuation().at_least(std::min(tgt, fz.guaranteed_val_prec)) &&
            fz.guaranteed_val_prec >= tgt)
            return z;
        EvalResult fpz = eval_poly_at(fp, z);
        ExtElem delta = fpz.value.solve_mul(fz.value);
        z = z - delta;
    }
    raise(errc::precision_exhausted, "Newton iteration did not certify the requested precision");
}

bool series_equal_at(const TruncatedSeries& a, const TruncatedSeries& b, int prec) {
    return !series_first_mismatch(a, b, prec).has_value();
}

std::optional<std::vector<int>> series_first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b,
                                                      int prec) {
    if (!(a.config() == b.config()) || a.vars() != b.vars())
        raise(errc::config_mismatch, "series shapes differ");
    if (prec > std::min(a.prec_floor(), b.prec_floor()))
        raise(errc::precision_exhausted, "comparison requested beyond the precision floors");
    return (a - b).first_nonzero_at(prec);
}

} // namespace fglab

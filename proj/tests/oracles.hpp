// Test-only oracles, independent of the library's arithmetic paths.
// Everything here works on raw cpp_int vectors modulo an explicit p^K.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace oracle {

using bigint = boost::multiprecision::cpp_int;

inline bigint norm(bigint x, const bigint& mod) {
    x %= mod;
    if (x < 0) x += mod;
    return x;
}

// Classic iterative extended Euclid; returns a^{-1} mod m (gcd(a, m) = 1).
inline bigint extgcd_inverse(bigint a, const bigint& m) {
    bigint old_r = norm(a, m), r = m;
    bigint old_s = 1, s = 0;
    while (r != 0) {
        bigint q = old_r / r;
        bigint tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    return norm(old_s, m);
}

// x / d in Z/mod where d = p^v * unit; requires p^v | x.
inline bigint div_exact(const bigint& x, const bigint& d, std::uint64_t p, const bigint& mod) {
    bigint dd = d, xx = x;
    while (dd % p == 0) {
        if (xx % p != 0) throw std::runtime_error("oracle: division not exact");
        dd /= p;
        xx /= p;
    }
    return norm(xx * extgcd_inverse(dd, mod), mod);
}

// -- one-variable dense polynomials, ascending, truncated at degree M --------

using Poly = std::vector<bigint>; // size M+1

inline Poly pzero(int M) {
    return Poly(static_cast<std::size_t>(M) + 1, 0);
}

inline Poly pmul(const Poly& a, const Poly& b, const bigint& mod) {
    const int M = static_cast<int>(a.size()) - 1;
    Poly r = pzero(M);
    for (int i = 0; i <= M; ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; i + j <= M; ++j) {
            if (b[static_cast<std::size_t>(j)] == 0) continue;
            r[static_cast<std::size_t>(i + j)] =
                norm(r[static_cast<std::size_t>(i + j)] + a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)], mod);
        }
    }
    return r;
}

inline Poly padd(const Poly& a, const Poly& b, const bigint& mod) {
    Poly r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = norm(r[i] + b[i], mod);
    return r;
}

inline Poly psub(const Poly& a, const Poly& b, const bigint& mod) {
    Poly r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = norm(r[i] - b[i], mod);
    return r;
}

// outer(inner), inner(0) = 0
inline Poly pcompose(const Poly& outer, const Poly& inner, const bigint& mod) {
    const int M = static_cast<int>(outer.size()) - 1;
    Poly r = pzero(M);
    Poly pw = pzero(M);
    pw[0] = 1;
    for (int k = 0; k <= M; ++k) {
        if (outer[static_cast<std::size_t>(k)] != 0)
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] = norm(r[i] + outer[static_cast<std::size_t>(k)] * pw[i], mod);
        if (k < M) pw = pmul(pw, inner, mod);
    }
    return r;
}

// Substitute-and-solve inverse: g with h(g(X)) = X, h'(0) a unit.
inline Poly comp_inverse_oracle(const Poly& h, std::uint64_t p, const bigint& mod) {
    const int M = static_cast<int>(h.size()) - 1;
    bigint a1inv = extgcd_inverse(h[1], mod);
    Poly g = pzero(M);
    g[1] = a1inv;
    for (int k = 2; k <= M; ++k) {
        Poly r = pcompose(h, g, mod);
        // degree-k defect; correct g_k so the composite matches X
        g[static_cast<std::size_t>(k)] = norm(-r[static_cast<std::size_t>(k)] * a1inv, mod);
    }
    (void)p;
    return g;
}

// Undetermined-coefficients commutant: h'(0) = a, h o u = u o h for the given
// u with unit u'(0); solves the scalar linear equation degree by degree.
inline Poly commutant_oracle(const Poly& u, const bigint& a, std::uint64_t p, const bigint& mod) {
    const int M = static_cast<int>(u.size()) - 1;
    Poly h = pzero(M);
    h[1] = norm(a, mod);
    for (int k = 2; k <= M; ++k) {
        Poly lhs = pcompose(h, u, mod);
        Poly rhs = pcompose(u, h, mod);
        bigint defect = norm(lhs[static_cast<std::size_t>(k)] - rhs[static_cast<std::size_t>(k)], mod);
        bigint pw = boost::multiprecision::powm(u[1], bigint(k), mod);
        bigint delta = norm(u[1] - pw, mod);
        h[static_cast<std::size_t>(k)] = div_exact(defect, delta, p, mod);
    }
    return h;
}

// -- two-variable dense polynomials r[i][j] ~ X^i Y^j, i + j <= M -------------

using Poly2 = std::vector<std::vector<bigint>>;

inline Poly2 p2zero(int M) {
    Poly2 r(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) r[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(M - i) + 1, 0);
    return r;
}

inline Poly2 p2mul(const Poly2& a, const Poly2& b, int M, const bigint& mod) {
    Poly2 r = p2zero(M);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; i + j <= M; ++j) {
            const bigint& av = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (av == 0) continue;
            for (int k = 0; i + k <= M; ++k)
                for (int l = 0; i + j + k + l <= M; ++l) {
                    const bigint& bv = b[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                    if (bv == 0) continue;
                    auto& slot = r[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(j + l)];
                    slot = norm(slot + av * bv, mod);
                }
        }
    return r;
}

// phi(f(X), f(Y)) for one-variable f
inline Poly2 p2compose_diag(const Poly2& phi, const Poly& f, int M, const bigint& mod) {
    // powers of f in X and in Y as 2-var polynomials
    std::vector<Poly2> fx(static_cast<std::size_t>(M) + 1, p2zero(M));
    std::vector<Poly2> fy(static_cast<std::size_t>(M) + 1, p2zero(M));
    fx[0][0][0] = 1;
    fy[0][0][0] = 1;
    Poly2 fX = p2zero(M), fY = p2zero(M);
    for (int k = 0; k <= M; ++k) {
        fX[static_cast<std::size_t>(k)][0] = f[static_cast<std::size_t>(k)];
        fY[0][static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)];
    }
    for (int k = 1; k <= M; ++k) {
        fx[static_cast<std::size_t>(k)] = p2mul(fx[static_cast<std::size_t>(k - 1)], fX, M, mod);
        fy[static_cast<std::size_t>(k)] = p2mul(fy[static_cast<std::size_t>(k - 1)], fY, M, mod);
    }
    Poly2 r = p2zero(M);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; i + j <= M; ++j) {
            const bigint& c = phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (c == 0) continue;
            Poly2 t = p2mul(fx[static_cast<std::size_t>(i)], fy[static_cast<std::size_t>(j)], M, mod);
            for (int k = 0; k <= M; ++k)
                for (int l = 0; k + l <= M; ++l) {
                    auto& slot = r[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                    slot = norm(slot + c * t[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)], mod);
                }
        }
    return r;
}

// g(phi(X, Y)) for one-variable g
inline Poly2 p2compose_outer(const Poly& g, const Poly2& phi, int M, const bigint& mod) {
    Poly2 r = p2zero(M);
    Poly2 pw = p2zero(M);
    pw[0][0] = 1;
    for (int k = 0; k <= M; ++k) {
        const bigint& c = g[static_cast<std::size_t>(k)];
        if (c != 0)
            for (int i = 0; i <= M; ++i)
                for (int j = 0; i + j <= M; ++j) {
                    auto& slot = r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    slot = norm(slot + c * pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], mod);
                }
        if (k < M) pw = p2mul(pw, phi, M, mod);
    }
    return r;
}

// Undetermined-coefficients group-law solve: phi = X + Y + ..., with
// g(phi) = phi(f(X), f(Y)), degree by degree up to M.
inline Poly2 lt_oracle(const Poly& f, const Poly& g, int M, std::uint64_t p, const bigint& mod) {
    Poly2 phi = p2zero(M);
    phi[1][0] = 1;
    phi[0][1] = 1;
    const bigint pi = f[1];
    for (int m = 2; m <= M; ++m) {
        Poly2 lhs = p2compose_diag(phi, f, M, mod);
        Poly2 rhs = p2compose_outer(g, phi, M, mod);
        bigint pw = boost::multiprecision::powm(pi, bigint(m), mod);
        bigint delta = norm(pi - pw, mod);
        for (int i = 0; i <= m; ++i) {
            int j = m - i;
            bigint defect = norm(lhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                     rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                 mod);
            phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = div_exact(defect, delta, p, mod);
        }
    }
    return phi;
}

} // namespace oracle

#pragma once

#include <optional>
#include <vector>

#include "fglab/formal_group.hpp"
#include "fglab/serialize.hpp"

namespace fglab {

// k-fold self-composition; iterate(h, 0) = X.
TruncatedSeries iterate(const TruncatedSeries& h, int k);

struct OrbitResult {
    ExtElem value;
    long guaranteed_val_prec;
    std::vector<long> step_guarantees;
};
// Pointwise orbit z, h(z), h(h(z)), ... with per-step precision accounting.
OrbitResult iterate_at(const TruncatedSeries& h, const ExtElem& z, int k);

struct TorsionCertificate {
    ExtElem point;
    int level;                // smallest k with [p]^k(point) == 0 at the evaluation precision
    long guaranteed_val_prec; // bound certified for the final orbit point
    std::vector<long> step_guarantees;
};

struct TorsionResult {
    bool is_torsion;
    std::optional<TorsionCertificate> certificate;
    int max_level_tested;
};

// Drive z through [p] until the orbit is 0 at the certified precision.
// NotTorsionAtCap (is_torsion == false) is a verdict, not a disproof.
TorsionResult is_torsion(const FormalGroup& F, const ExtElem& z, int max_level);
TorsionResult is_torsion_with(const TruncatedSeries& mul_p_series, const ExtElem& z, int max_level);

// Executable reproduction of the shared-torsion construction:
// q = (1+X)^p - 1, u = 1 + ((1+X)^(p^n) - 1)/X, f = u*q; the group with
// [p(1+p^n)] = f shares the points zeta_{p^k}-1 (k <= n) with the
// multiplicative group while its law differs at an explicit coefficient.
Report shared_torsion_demo(const PrimeConfig& cfg, int n);

// Desk-scale witness of the rigidity statement: h commuting with a stable
// endomorphism u of F is itself an endomorphism, and maps sample torsion
// points back into the torsion set.
Report rigidity_witness(const FormalGroup& F, const TruncatedSeries& u, const TruncatedSeries& h,
                        const std::vector<ExtElem>& sample_points, int max_level = 8);

// Desk-scale witness of the shared-torsion uniqueness statement: a stable
// endomorphism of both F and G forces F = G at precision.
Report theorem_a_witness(const FormalGroup& F, const FormalGroup& G, const TruncatedSeries& u);

// (1+X)^m - 1 with exact binomial coefficients, as a one-variable series.
TruncatedSeries one_plus_x_pow_minus_one(const PrimeConfig& cfg, unsigned long m);

// The shared-torsion ingredients q, u, f for level n.
struct SharedTorsionSeries {
    TruncatedSeries q;
    TruncatedSeries u;
    TruncatedSeries f;
};
SharedTorsionSeries shared_torsion_series(const PrimeConfig& cfg, int n);

} // namespace fglab

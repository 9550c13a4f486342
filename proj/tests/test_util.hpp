#pragma once

#include <cstdlib>
#include <random>

#include "fglab/padic.hpp"

namespace testutil {

inline std::uint64_t test_seed() {
    if (const char* s = std::getenv("FGLAB_TEST_SEED")) return std::strtoull(s, nullptr, 10);
    return 0x5eed2026u;
}

inline fglab::bigint random_below(std::mt19937_64& rng, const fglab::bigint& bound) {
    fglab::bigint r = 0;
    fglab::bigint b = bound;
    while (b > 0) {
        r = (r << 32) | static_cast<std::uint32_t>(rng());
        b >>= 32;
    }
    return r % bound;
}

inline fglab::PAdicNum random_padic(std::mt19937_64& rng, const fglab::PrimeConfig& cfg) {
    return fglab::PAdicNum::from_integer(cfg, random_below(rng, cfg.pow(cfg.precision())));
}

inline fglab::PAdicNum random_unit(std::mt19937_64& rng, const fglab::PrimeConfig& cfg) {
    for (;;) {
        fglab::bigint m = random_below(rng, cfg.pow(cfg.precision()));
        if (m % cfg.p() != 0) return fglab::PAdicNum::from_integer(cfg, m);
    }
}

} // namespace testutil

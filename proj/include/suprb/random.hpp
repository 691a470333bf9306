#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace suprb {

using Rng = std::mt19937_64;

/// |N(0, scale²)|. A non-positive scale yields 0 without consuming randomness.
inline double halfnormal(Rng& rng, double scale)
{
    if (!(scale > 0.0)) {
        return 0.0;
    }
    std::normal_distribution<double> dist(0.0, scale);
    return std::abs(dist(rng));
}

/// Derives an independent seed for a child stream.
inline std::uint64_t split_seed(Rng& rng) { return rng(); }

} // namespace suprb

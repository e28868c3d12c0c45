#pragma once

#include "bayescmp/matrix.hpp"
#include "bayescmp/stat_kernels.hpp"

#include <cstddef>
#include <cstdint>

namespace bayescmp {

/// Probabilities of the three practical outcomes for differences A - B:
/// `left` below the rope (B practically better), `rope` inside it, and
/// `right` above it (A practically better).
struct TrinomialProbs {
    double left = 0.0;
    double rope = 0.0;
    double right = 0.0;

    double a_better() const noexcept { return right; }
    double b_better() const noexcept { return left; }

    /// Exchanges the roles of A and B.
    TrinomialProbs swapped() const noexcept { return {right, rope, left}; }
};

/// How a set of Monte Carlo draws was produced.
struct SeedRecord {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::size_t chunk_size = 0;
};

/// Monte Carlo draws of (theta_left, theta_rope, theta_right), one per row.
struct TrinomialSamples {
    Matrix samples; ///< count x 3
    SeedRecord seed;

    std::size_t count() const noexcept { return samples.rows(); }
};

} // namespace bayescmp

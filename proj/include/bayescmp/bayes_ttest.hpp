#pragma once

#include "bayescmp/data_model.hpp"
#include "bayescmp/stat_kernels.hpp"
#include "bayescmp/trinomial.hpp"

#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace bayescmp {

/// Normal-Gamma prior NG(mu0, k0, a, b) on (mu, precision). The defaults are
/// the matching prior, under which the posterior of mu coincides with the
/// sampling distribution of the correlated t-test.
struct NormalGammaPrior {
    double mu0 = 0.0;
    double k0 = std::numeric_limits<double>::infinity();
    double a = -0.5;
    double b = 0.0;

    static NormalGammaPrior matching() { return {}; }
    bool is_matching() const;
};

/// Marginal posterior of the mean difference mu under the compound-symmetry
/// likelihood. When the data carry no spread (sd == 0 under the matching
/// prior) the result is a point mass at the sample mean (scale2 == 0).
LocScaleStudent posterior(const DiffSummary& d, const NormalGammaPrior& prior = {});
inline LocScaleStudent posterior(const DiffSeries& d, const NormalGammaPrior& prior = {}) {
    return posterior(d.summary(), prior);
}

/// Posterior mass below, inside (closed) and above the rope. For a point mass
/// the whole probability goes to the region containing loc; rope boundaries
/// belong to the rope.
TrinomialProbs rope_probs(const LocScaleStudent& post, const Rope& rope);

/// P(mu > 0).
double direction_prob(const LocScaleStudent& post);

struct HdiSet {
    std::vector<double> levels;
    std::vector<std::pair<double, double>> intervals;
};

inline const std::vector<double> kDefaultHdiLevels{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

/// Highest density intervals. The Student posterior is symmetric and
/// unimodal, so each is the equal-tailed interval.
HdiSet hdis(const LocScaleStudent& post, std::span<const double> levels);

} // namespace bayescmp

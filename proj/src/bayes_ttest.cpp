#include "bayescmp/bayes_ttest.hpp"

#include "bayescmp/error.hpp"

#include <cmath>

namespace bayescmp {

namespace {

constexpr const char* kModule = "bayes-ttest";

} // namespace

bool NormalGammaPrior::is_matching() const {
    return mu0 == 0.0 && std::isinf(k0) && k0 > 0 && a == -0.5 && b == 0.0;
}

LocScaleStudent posterior(const DiffSummary& d, const NormalGammaPrior& prior) {
    if (d.n < 2) {
        throw DomainError(kModule, "posterior needs n >= 2");
    }
    if (!(d.rho >= 0.0 && d.rho < 1.0)) {
        throw DomainError(kModule, "rho must lie in [0, 1)");
    }
    if (!(d.sd >= 0.0)) {
        throw DomainError(kModule, "negative standard deviation");
    }
    const double n = static_cast<double>(d.n);
    if (prior.is_matching()) {
        return {n - 1.0, d.mean, (1.0 / n + d.rho / (1.0 - d.rho)) * d.sd * d.sd};
    }

    if (!(prior.k0 > 0.0) || !(prior.b >= 0.0)) {
        throw DomainError(kModule, "Normal-Gamma prior needs k0 > 0 and b >= 0");
    }
    // Effective sample size of the mean and the decorrelated residual sum of
    // squares under the compound-symmetry covariance.
    const double h = n / (1.0 + (n - 1.0) * d.rho);
    const double resid = d.sd * d.sd * (n - 1.0) / (1.0 - d.rho);
    const double kappa = std::isinf(prior.k0) ? 0.0 : 1.0 / prior.k0;
    const double an = prior.a + 0.5 * n;
    if (!(an > 0.0)) {
        throw DomainError(kModule, "Normal-Gamma posterior shape must be positive");
    }
    const double loc = (h * d.mean + kappa * prior.mu0) / (h + kappa);
    const double dev = d.mean - prior.mu0;
    const double bn = prior.b + 0.5 * resid + 0.5 * (h * kappa / (h + kappa)) * dev * dev;
    return {2.0 * an, loc, bn / (an * (h + kappa))};
}

TrinomialProbs rope_probs(const LocScaleStudent& post, const Rope& rope) {
    rope.validate();
    post.validate();
    if (post.point_mass()) {
        if (post.loc < rope.lower) {
            return {1.0, 0.0, 0.0};
        }
        if (post.loc > rope.upper) {
            return {0.0, 0.0, 1.0};
        }
        return {0.0, 1.0, 0.0};
    }
    TrinomialProbs p;
    p.left = student_cdf(rope.lower, post);
    p.right = student_sf(rope.upper, post);
    p.rope = 1.0 - (p.left + p.right);
    return p;
}

double direction_prob(const LocScaleStudent& post) {
    post.validate();
    return student_sf(0.0, post);
}

HdiSet hdis(const LocScaleStudent& post, std::span<const double> levels) {
    post.validate();
    HdiSet out;
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw DomainError(kModule, "HDI level must lie in (0, 1)");
        }
        const double hi = student_quantile(0.5 + 0.5 * level, post);
        const double half = hi - post.loc;
        out.levels.push_back(level);
        out.intervals.emplace_back(post.loc - half, post.loc + half);
    }
    return out;
}

} // namespace bayescmp

#pragma once

#include "bayescmp/data_model.hpp"
#include "bayescmp/stat_kernels.hpp"
#include "bayescmp/trinomial.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bayescmp {

/// Bounds and run settings of the hierarchical correlated t-test.
///
/// Per dataset i the n differences are compound-symmetric Gaussian with mean
/// mu_i, scale sigma_i and correlation rho; mu_i ~ St(nu, mu0, sigma0) and
/// sigma_i ~ U(0, sigma_bar). Hyper-priors: mu0 ~ U(-1, 1),
/// sigma0 ~ U(0, s0_bar), nu ~ Gamma(alpha, rate beta),
/// alpha ~ U(alpha_lo, alpha_hi), beta ~ U(beta_lo, beta_hi).
struct HierConfig {
    double rho = 0.1;
    double sigma_bar = 1.0;
    double s0_bar = 1.0;
    double alpha_lo = 0.5;
    double alpha_hi = 5.0;
    double beta_lo = 0.05;
    double beta_hi = 0.15;
    std::size_t chains = 4;
    std::size_t warmup = 1000;
    std::size_t draws = 1000;
    RngStream seed;
    unsigned threads = 1;

    /// rho from the data, sigma_bar = 1000 * mean(sd_i) and
    /// s0_bar = 1000 * sd(mean_i), each floored at 1000 * 1e-6.
    static HierConfig defaults_for(std::span<const DiffSeries> data, RngStream seed);
    void validate() const;
};

struct HierState {
    double mu0 = 0.0;
    double sigma0 = 1.0;
    double nu = 5.0;
    double alpha = 1.0;
    double beta = 0.1;
    std::vector<double> mu;
    std::vector<double> sigma;
};

struct ParamDiagnostics {
    std::string name;
    double rhat = 1.0;
    double ess = 0.0;
};

struct HierDraws {
    std::size_t q = 0;
    std::vector<std::vector<HierState>> chains; ///< kept draws, per chain
    std::vector<ParamDiagnostics> diagnostics;  ///< mu0, sigma0, nu, alpha, beta, mu_i, sigma_i
    double max_rhat = 1.0;
    bool converged = true; ///< every R-hat <= 1.05
    std::vector<double> acceptance; ///< mean acceptance rate of kept iterations, per chain

    std::size_t total() const;
    /// mu0 pooled over chains, chain-major.
    std::vector<double> pooled_mu0() const;
    const ParamDiagnostics& diagnostic(const std::string& name) const;
};

inline constexpr double kRhatLimit = 1.05;

/// Unnormalized log posterior including the uniform prior normalizations;
/// -infinity outside the prior support.
double log_posterior(const HierState& state, std::span<const DiffSeries> data, const HierConfig& cfg);

/// Adaptive Metropolis-within-Gibbs. Chain c draws from cfg.seed.derive(c),
/// so results do not depend on cfg.threads. Non-convergence is reported in
/// the result, not thrown.
HierDraws fit(std::span<const DiffSeries> data, const HierConfig& cfg);

inline constexpr std::size_t kDefaultNextDatasetDraws = 4000;

/// Rope masses of St(nu, mu0, sigma0) per posterior draw. When `count` is 0
/// or equals the number of kept draws every draw is used in order; otherwise
/// `count` draws are resampled with replacement using `rng`.
TrinomialSamples next_dataset_probs(const HierDraws& draws, const Rope& rope, std::size_t count, RngStream rng);

struct ShrinkageRow {
    std::string dataset;
    double sample_mean = 0.0;
    double posterior_mean = 0.0;
    double posterior_sd = 0.0;
};

struct ShrinkageReport {
    std::vector<ShrinkageRow> rows;
    double pooled_spread = 0.0; ///< sum |E[mu_i] - median(mean_i)|
    double raw_spread = 0.0;    ///< sum |mean_i - median(mean_i)|
};

ShrinkageReport shrinkage_report(const HierDraws& draws, std::span<const DiffSeries> data);

/// One row per kept draw: chain, iteration, mu0, sigma0, nu, alpha, beta,
/// mu_1..mu_q, sigma_1..sigma_q.
void write_draws_csv(std::ostream& out, const HierDraws& draws);

} // namespace bayescmp

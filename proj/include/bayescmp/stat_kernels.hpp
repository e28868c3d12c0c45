#pragma once

#include "bayescmp/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace bayescmp {

/// Location-scale Student distribution St(dof, loc, scale2). scale2 == 0 is a
/// point mass at loc.
struct LocScaleStudent {
    double dof = 1.0;
    double loc = 0.0;
    double scale2 = 1.0;

    bool point_mass() const noexcept { return scale2 == 0.0; }
    double scale() const;
    void validate() const;
};

double student_cdf(double x, const LocScaleStudent& d);
/// Upper tail P(T > x), computed without cancellation.
double student_sf(double x, const LocScaleStudent& d);
double student_quantile(double p, const LocScaleStudent& d);
double student_logpdf(double x, double dof, double loc, double scale);

double normal_cdf(double x);

/// Identifies a reproducible stream of random numbers. Equal (seed, stream)
/// pairs always produce the same draws.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Child stream for a chunk or chain, a pure function of (seed, stream, tag).
    RngStream derive(std::uint64_t tag) const;

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Engine bound to one RngStream. Every transform below is implemented here
/// (not via std:: distributions) so draws do not depend on the standard
/// library vendor.
class Rng {
public:
    explicit Rng(RngStream stream);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma(shape, rate = 1).
    double gamma(double shape);
    /// Uniform index in [0, n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Fills `out` with one Dirichlet(alpha) draw. Zero entries of alpha yield
/// exactly zero weights; at least one entry must be positive.
void dirichlet_draw(Rng& rng, std::span<const double> alpha, std::span<double> out);

/// Number of draws handled by one derived stream in chunked Monte Carlo.
inline constexpr std::size_t kChunkSize = 2048;

/// `count` Dirichlet(alpha) draws, one per row. Rows [c*kChunkSize, ...) come
/// from rng.derive(c), so the result does not depend on `threads`.
Matrix sample_dirichlet(std::span<const double> alpha, std::size_t count, RngStream rng, unsigned threads = 1);

/// Log-density of n compound-symmetric Gaussian observations (variance
/// sigma2, pairwise correlation rho) with common mean mu, from their sample
/// mean and sum of squared deviations.
double cs_loglik(double mean, double ss, std::size_t n, double mu, double sigma2, double rho);

namespace detail {

/// cs_loglik without argument checks, for inner sampler loops.
inline double cs_loglik_unchecked(double mean, double ss, double n, double mu, double sigma2, double rho) {
    const double lambda1 = sigma2 * (1.0 + (n - 1.0) * rho);
    const double lambda2 = sigma2 * (1.0 - rho);
    const double dev = mean - mu;
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(lambda1) -
           0.5 * (n - 1.0) * std::log(lambda2) - ss / (2.0 * lambda2) - n * dev * dev / (2.0 * lambda1);
}

} // namespace detail

} // namespace bayescmp

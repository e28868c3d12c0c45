#include "bayescmp/stat_kernels.hpp"

#include "bayescmp/error.hpp"
#include "bayescmp/parallel.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bayescmp {

namespace {

constexpr const char* kModule = "stat-kernels";

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Standardized CDF. Boost's implementation is based on the regularized
// incomplete beta function and is accurate to a few ulp.
double std_cdf(double t, double dof) {
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    boost::math::students_t_distribution<double> dist(dof);
    return boost::math::cdf(dist, t);
}

} // namespace

double LocScaleStudent::scale() const { return std::sqrt(scale2); }

void LocScaleStudent::validate() const {
    if (!(dof > 0.0) || !std::isfinite(loc) || !(scale2 >= 0.0) || !std::isfinite(scale2)) {
        throw DomainError(kModule, "Student distribution needs dof > 0, finite loc and scale2 >= 0");
    }
}

double student_cdf(double x, const LocScaleStudent& d) {
    if (d.point_mass()) {
        return x >= d.loc ? 1.0 : 0.0;
    }
    return std_cdf((x - d.loc) / d.scale(), d.dof);
}

double student_sf(double x, const LocScaleStudent& d) {
    if (d.point_mass()) {
        return x >= d.loc ? 0.0 : 1.0;
    }
    return std_cdf((d.loc - x) / d.scale(), d.dof);
}

double student_quantile(double p, const LocScaleStudent& d) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(kModule, "quantile probability must lie in (0, 1)");
    }
    if (d.point_mass()) {
        return d.loc;
    }
    boost::math::students_t_distribution<double> dist(d.dof);
    return d.loc + d.scale() * boost::math::quantile(dist, p);
}

double student_logpdf(double x, double dof, double loc, double scale) {
    const double z = (x - loc) / scale;
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) - 0.5 * std::log(dof * std::numbers::pi) -
           std::log(scale) - 0.5 * (dof + 1.0) * std::log1p(z * z / dof);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

RngStream RngStream::derive(std::uint64_t tag) const {
    return {seed, splitmix64(stream ^ splitmix64(tag + 0x632BE59BD9B4E019ull))};
}

Rng::Rng(RngStream stream) {
    const std::uint64_t a = splitmix64(stream.seed);
    const std::uint64_t b = splitmix64(stream.stream ^ 0xD1B54A32D192ED03ull);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    // 53 random mantissa bits, shifted by half an ulp to stay off 0.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw DomainError(kModule, "gamma shape must be positive");
    }
    if (shape < 1.0) {
        // Shape augmentation: G(a) = G(a + 1) * U^(1/a).
        const double g = gamma(shape + 1.0);
        return g * std::exp(std::log(uniform()) / shape);
    }
    // Marsaglia & Tsang squeeze/rejection.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

std::size_t Rng::index(std::size_t n) {
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

void dirichlet_draw(Rng& rng, std::span<const double> alpha, std::span<double> out) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = alpha[i] > 0.0 ? rng.gamma(alpha[i]) : 0.0;
        total += out[i];
    }
    if (!(total > 0.0)) {
        // Every gamma underflowed (only possible for tiny shapes); put the
        // mass on the largest alpha.
        std::size_t best = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] > alpha[best]) {
                best = i;
            }
        }
        std::fill(out.begin(), out.end(), 0.0);
        out[best] = 1.0;
        return;
    }
    for (auto& w : out) {
        w /= total;
    }
}

Matrix sample_dirichlet(std::span<const double> alpha, std::size_t count, RngStream rng, unsigned threads) {
    if (alpha.empty() || count == 0) {
        throw DomainError(kModule, "sample_dirichlet needs a non-empty alpha and count >= 1");
    }
    for (double a : alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw DomainError(kModule, "Dirichlet parameters must be positive and finite");
        }
    }
    Matrix out(count, alpha.size());
    const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
    parallel_for(chunks, threads, [&](std::size_t c) {
        Rng local(rng.derive(c));
        const std::size_t end = std::min(count, (c + 1) * kChunkSize);
        for (std::size_t r = c * kChunkSize; r < end; ++r) {
            dirichlet_draw(local, alpha, out.row(r));
        }
    });
    return out;
}

double cs_loglik(double mean, double ss, std::size_t n, double mu, double sigma2, double rho) {
    if (!(sigma2 > 0.0)) {
        throw DomainError(kModule, "cs_loglik needs sigma2 > 0");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError(kModule, "cs_loglik needs 0 <= rho < 1");
    }
    if (n == 0 || !(ss >= 0.0)) {
        throw DomainError(kModule, "cs_loglik needs n >= 1 and ss >= 0");
    }
    return detail::cs_loglik_unchecked(mean, ss, static_cast<double>(n), mu, sigma2, rho);
}

} // namespace bayescmp

#include "bayescmp/hier_model.hpp"

#include "bayescmp/diagnostics.hpp"
#include "bayescmp/error.hpp"
#include "bayescmp/format.hpp"
#include "bayescmp/parallel.hpp"

#include <math.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace bayescmp {

namespace {

constexpr const char* kModule = "hier-model";
constexpr double kEps = 1e-6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTargetAcceptance = 0.44;
constexpr std::size_t kAdaptBatch = 50;
constexpr int kHyperRepeats = 3;

// std::lgamma writes the global signgam, which chains running on several
// threads would race on.
double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

/// Logit map between (lo, hi) and the real line.
struct Bounded {
    double lo;
    double hi;

    double to_free(double x) const { return std::log((x - lo) / (hi - x)); }
    double from_free(double u) const { return lo + (hi - lo) / (1.0 + std::exp(-u)); }
    double log_jacobian(double u) const { return std::log(hi - lo) - softplus(-u) - softplus(u); }
    bool inside(double x) const { return x > lo && x < hi; }
};

double student_norm(double nu, double sigma0) {
    return log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
           std::log(sigma0);
}

double student_kernel(double x, double mu0, double sigma0, double nu) {
    const double z = (x - mu0) / sigma0;
    return -0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double gamma_logpdf(double x, double shape, double rate) {
    return shape * std::log(rate) - log_gamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mu) * (x - mu);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> sample_means(std::span<const DiffSeries> data) {
    std::vector<double> out;
    out.reserve(data.size());
    for (const auto& d : data) {
        out.push_back(d.mean);
    }
    return out;
}

/// Random-walk proposal scale tuned in batches during warmup.
struct Proposal {
    double log_step = 0.0;
    std::size_t accepted = 0;
    std::size_t tried = 0;

    explicit Proposal(double step = 1.0) : log_step(std::log(step)) {}

    double step() const { return std::exp(log_step); }
    void record(bool ok) {
        ++tried;
        accepted += ok;
    }
    void adapt(std::size_t batch) {
        if (tried == 0) {
            return;
        }
        const double rate = static_cast<double>(accepted) / static_cast<double>(tried);
        const double delta = std::min(0.5, 1.0 / std::sqrt(static_cast<double>(batch)));
        log_step += rate > kTargetAcceptance ? delta : -delta;
        accepted = 0;
        tried = 0;
    }
};

class Chain {
public:
    Chain(std::span<const DiffSeries> data, const HierConfig& cfg, const HierState& init, RngStream stream)
        : cfg_(cfg),
          q_(data.size()),
          n_(static_cast<double>(data.front().n)),
          rng_(stream),
          s_(init),
          mu0_map_{-1.0, 1.0},
          sigma0_map_{0.0, cfg.s0_bar},
          sigma_map_{0.0, cfg.sigma_bar},
          alpha_map_{cfg.alpha_lo, cfg.alpha_hi},
          beta_map_{cfg.beta_lo, cfg.beta_hi} {
        const double inflate = std::sqrt(1.0 / n_ + cfg.rho / (1.0 - cfg.rho));
        const auto means = sample_means(data);
        const double spread = std::max(sample_sd(means), 1e-4);
        for (std::size_t i = 0; i < q_; ++i) {
            mean_.push_back(data[i].mean);
            ss_.push_back(data[i].ss);
            u_sigma_.push_back(sigma_map_.to_free(s_.sigma[i]));
            ll_.push_back(loglik(i, s_.mu[i], s_.sigma[i]));
            mu_prop_.emplace_back(std::max(data[i].sd * inflate, 1e-4));
            sigma_prop_.emplace_back(1.0 / std::sqrt(2.0 * n_));
        }
        u_mu0_ = mu0_map_.to_free(s_.mu0);
        u_sigma0_ = sigma0_map_.to_free(s_.sigma0);
        u_alpha_ = alpha_map_.to_free(s_.alpha);
        u_beta_ = beta_map_.to_free(s_.beta);
        mu0_prop_ = Proposal(2.0 * spread / std::sqrt(static_cast<double>(q_)));
        sigma0_prop_ = Proposal(0.2);
        nu_prop_ = Proposal(0.5);
        alpha_prop_ = Proposal(1.0);
        beta_prop_ = Proposal(1.0);
        shift_prop_ = Proposal(spread / std::sqrt(static_cast<double>(q_)));
        scale_prop_ = Proposal(0.1);
    }

    std::vector<HierState> run(double& acceptance) {
        std::size_t batch = 0;
        for (std::size_t it = 0; it < cfg_.warmup; ++it) {
            sweep();
            if ((it + 1) % kAdaptBatch == 0) {
                ++batch;
                for_each_proposal([&](Proposal& p) { p.adapt(batch); });
            }
        }
        for_each_proposal([](Proposal& p) { p.accepted = p.tried = 0; });
        std::vector<HierState> kept;
        kept.reserve(cfg_.draws);
        for (std::size_t it = 0; it < cfg_.draws; ++it) {
            sweep();
            kept.push_back(s_);
        }
        std::size_t acc = 0;
        std::size_t tried = 0;
        for_each_proposal([&](Proposal& p) {
            acc += p.accepted;
            tried += p.tried;
        });
        acceptance = tried ? static_cast<double>(acc) / static_cast<double>(tried) : 0.0;
        return kept;
    }

private:
    template <class Fn>
    void for_each_proposal(Fn&& fn) {
        for (auto& p : mu_prop_) {
            fn(p);
        }
        for (auto& p : sigma_prop_) {
            fn(p);
        }
        for (Proposal* p : {&mu0_prop_, &sigma0_prop_, &nu_prop_, &alpha_prop_, &beta_prop_, &shift_prop_,
                            &scale_prop_}) {
            fn(*p);
        }
    }

    double loglik(std::size_t i, double mu, double sigma) const {
        return detail::cs_loglik_unchecked(mean_[i], ss_[i], n_, mu, sigma * sigma, cfg_.rho);
    }

    /// Sum over datasets of log St(mu_i; nu, mu0, sigma0).
    double population_term(std::span<const double> mu, double mu0, double sigma0, double nu) const {
        double s = static_cast<double>(q_) * student_norm(nu, sigma0);
        for (double m : mu) {
            s += student_kernel(m, mu0, sigma0, nu);
        }
        return s;
    }

    bool accept(double log_ratio, Proposal& p) {
        const bool ok = std::log(rng_.uniform()) < log_ratio;
        p.record(ok);
        return ok;
    }

    void sweep() {
        for (std::size_t i = 0; i < q_; ++i) {
            update_mu(i);
            update_sigma(i);
        }
        // Population-level block, repeated within each sweep.
        for (int r = 0; r < kHyperRepeats; ++r) {
            update_mu0();
            update_sigma0();
            update_nu();
            update_alpha();
            update_beta();
            shift_move();
            scale_move();
        }
    }

    void update_mu(std::size_t i) {
        Proposal& p = mu_prop_[i];
        const double cur = s_.mu[i];
        const double prop = cur + p.step() * rng_.normal();
        const double ll = loglik(i, prop, s_.sigma[i]);
        const double ratio = ll - ll_[i] + student_kernel(prop, s_.mu0, s_.sigma0, s_.nu) -
                             student_kernel(cur, s_.mu0, s_.sigma0, s_.nu);
        if (accept(ratio, p)) {
            s_.mu[i] = prop;
            ll_[i] = ll;
        }
    }

    void update_sigma(std::size_t i) {
        Proposal& p = sigma_prop_[i];
        const double u = u_sigma_[i];
        const double up = u + p.step() * rng_.normal();
        const double prop = sigma_map_.from_free(up);
        if (!sigma_map_.inside(prop)) {
            p.record(false);
            return;
        }
        const double ll = loglik(i, s_.mu[i], prop);
        const double ratio = ll - ll_[i] + sigma_map_.log_jacobian(up) - sigma_map_.log_jacobian(u);
        if (accept(ratio, p)) {
            s_.sigma[i] = prop;
            u_sigma_[i] = up;
            ll_[i] = ll;
        }
    }

    void update_mu0() {
        const double up = u_mu0_ + mu0_prop_.step() * rng_.normal();
        const double prop = mu0_map_.from_free(up);
        if (!mu0_map_.inside(prop)) {
            mu0_prop_.record(false);
            return;
        }
        const double ratio = population_term(s_.mu, prop, s_.sigma0, s_.nu) -
                             population_term(s_.mu, s_.mu0, s_.sigma0, s_.nu) + mu0_map_.log_jacobian(up) -
                             mu0_map_.log_jacobian(u_mu0_);
        if (accept(ratio, mu0_prop_)) {
            s_.mu0 = prop;
            u_mu0_ = up;
        }
    }

    void update_sigma0() {
        const double up = u_sigma0_ + sigma0_prop_.step() * rng_.normal();
        const double prop = sigma0_map_.from_free(up);
        if (!sigma0_map_.inside(prop)) {
            sigma0_prop_.record(false);
            return;
        }
        const double ratio = population_term(s_.mu, s_.mu0, prop, s_.nu) -
                             population_term(s_.mu, s_.mu0, s_.sigma0, s_.nu) + sigma0_map_.log_jacobian(up) -
                             sigma0_map_.log_jacobian(u_sigma0_);
        if (accept(ratio, sigma0_prop_)) {
            s_.sigma0 = prop;
            u_sigma0_ = up;
        }
    }

    void update_nu() {
        const double eps = nu_prop_.step() * rng_.normal();
        const double prop = s_.nu * std::exp(eps);
        if (!(prop > 0.0) || !std::isfinite(prop)) {
            nu_prop_.record(false);
            return;
        }
        const double ratio = population_term(s_.mu, s_.mu0, s_.sigma0, prop) -
                             population_term(s_.mu, s_.mu0, s_.sigma0, s_.nu) +
                             gamma_logpdf(prop, s_.alpha, s_.beta) - gamma_logpdf(s_.nu, s_.alpha, s_.beta) + eps;
        if (accept(ratio, nu_prop_)) {
            s_.nu = prop;
        }
    }

    void update_alpha() {
        const double up = u_alpha_ + alpha_prop_.step() * rng_.normal();
        const double prop = alpha_map_.from_free(up);
        if (!alpha_map_.inside(prop)) {
            alpha_prop_.record(false);
            return;
        }
        const double ratio = gamma_logpdf(s_.nu, prop, s_.beta) - gamma_logpdf(s_.nu, s_.alpha, s_.beta) +
                             alpha_map_.log_jacobian(up) - alpha_map_.log_jacobian(u_alpha_);
        if (accept(ratio, alpha_prop_)) {
            s_.alpha = prop;
            u_alpha_ = up;
        }
    }

    void update_beta() {
        const double up = u_beta_ + beta_prop_.step() * rng_.normal();
        const double prop = beta_map_.from_free(up);
        if (!beta_map_.inside(prop)) {
            beta_prop_.record(false);
            return;
        }
        const double ratio = gamma_logpdf(s_.nu, s_.alpha, prop) - gamma_logpdf(s_.nu, s_.alpha, s_.beta) +
                             beta_map_.log_jacobian(up) - beta_map_.log_jacobian(u_beta_);
        if (accept(ratio, beta_prop_)) {
            s_.beta = prop;
            u_beta_ = up;
        }
    }

    // Moves mu0 and every mu_i by the same amount; the population term is
    // unchanged, only the likelihoods move.
    void shift_move() {
        const double delta = shift_prop_.step() * rng_.normal();
        const double prop = s_.mu0 + delta;
        if (!mu0_map_.inside(prop)) {
            shift_prop_.record(false);
            return;
        }
        scratch_ll_.resize(q_);
        double ratio = 0.0;
        for (std::size_t i = 0; i < q_; ++i) {
            scratch_ll_[i] = loglik(i, s_.mu[i] + delta, s_.sigma[i]);
            ratio += scratch_ll_[i] - ll_[i];
        }
        if (accept(ratio, shift_prop_)) {
            s_.mu0 = prop;
            u_mu0_ = mu0_map_.to_free(prop);
            for (std::size_t i = 0; i < q_; ++i) {
                s_.mu[i] += delta;
            }
            ll_ = scratch_ll_;
        }
    }

    // Scales sigma0 and every deviation mu_i - mu0 by exp(eps). The map has
    // Jacobian exp((q + 1) eps) in (sigma0, mu) coordinates.
    void scale_move() {
        const double eps = scale_prop_.step() * rng_.normal();
        const double lambda = std::exp(eps);
        const double prop = s_.sigma0 * lambda;
        if (!sigma0_map_.inside(prop)) {
            scale_prop_.record(false);
            return;
        }
        scratch_ll_.resize(q_);
        scratch_mu_.resize(q_);
        double ratio = 0.0;
        for (std::size_t i = 0; i < q_; ++i) {
            scratch_mu_[i] = s_.mu0 + lambda * (s_.mu[i] - s_.mu0);
            scratch_ll_[i] = loglik(i, scratch_mu_[i], s_.sigma[i]);
            ratio += scratch_ll_[i] - ll_[i];
        }
        ratio += population_term(scratch_mu_, s_.mu0, prop, s_.nu) -
                 population_term(s_.mu, s_.mu0, s_.sigma0, s_.nu) + static_cast<double>(q_ + 1) * eps;
        if (accept(ratio, scale_prop_)) {
            s_.sigma0 = prop;
            u_sigma0_ = sigma0_map_.to_free(prop);
            s_.mu = scratch_mu_;
            ll_ = scratch_ll_;
        }
    }

    const HierConfig& cfg_;
    std::size_t q_;
    double n_;
    Rng rng_;
    HierState s_;
    Bounded mu0_map_;
    Bounded sigma0_map_;
    Bounded sigma_map_;
    Bounded alpha_map_;
    Bounded beta_map_;

    std::vector<double> mean_;
    std::vector<double> ss_;
    std::vector<double> ll_;
    std::vector<double> u_sigma_;
    double u_mu0_ = 0.0;
    double u_sigma0_ = 0.0;
    double u_alpha_ = 0.0;
    double u_beta_ = 0.0;

    std::vector<Proposal> mu_prop_;
    std::vector<Proposal> sigma_prop_;
    Proposal mu0_prop_;
    Proposal sigma0_prop_;
    Proposal nu_prop_;
    Proposal alpha_prop_;
    Proposal beta_prop_;
    Proposal shift_prop_;
    Proposal scale_prop_;

    std::vector<double> scratch_ll_;
    std::vector<double> scratch_mu_;
};

void check_data(std::span<const DiffSeries> data) {
    if (data.size() < 2) {
        throw DomainError(kModule, "the hierarchical model needs at least 2 datasets");
    }
    for (const auto& d : data) {
        if (d.n != data.front().n) {
            throw DomainError(kModule, "datasets differ in the number of differences (" + d.dataset + ")");
        }
        if (d.rho != data.front().rho) {
            throw DomainError(kModule, "datasets differ in rho (" + d.dataset + ")");
        }
    }
}

void add_diagnostics(HierDraws& out, const std::string& name, auto&& extract) {
    std::vector<std::vector<double>> per_chain;
    per_chain.reserve(out.chains.size());
    for (const auto& chain : out.chains) {
        std::vector<double> v;
        v.reserve(chain.size());
        for (const auto& s : chain) {
            v.push_back(extract(s));
        }
        per_chain.push_back(std::move(v));
    }
    ParamDiagnostics d{name, split_rhat(per_chain), effective_sample_size(per_chain)};
    if (!(d.rhat <= kRhatLimit)) {
        out.converged = false;
    }
    if (std::isnan(d.rhat) || d.rhat > out.max_rhat) {
        out.max_rhat = d.rhat;
    }
    out.diagnostics.push_back(std::move(d));
}

} // namespace

HierConfig HierConfig::defaults_for(std::span<const DiffSeries> data, RngStream seed) {
    if (data.empty()) {
        throw DomainError(kModule, "no datasets");
    }
    HierConfig cfg;
    cfg.rho = data.front().rho;
    double sd_sum = 0.0;
    for (const auto& d : data) {
        sd_sum += d.sd;
    }
    cfg.sigma_bar = 1000.0 * std::max(sd_sum / static_cast<double>(data.size()), kEps);
    cfg.s0_bar = 1000.0 * std::max(sample_sd(sample_means(data)), kEps);
    cfg.seed = seed;
    return cfg;
}

void HierConfig::validate() const {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError(kModule, "rho must lie in [0, 1)");
    }
    for (double b : {sigma_bar, s0_bar, alpha_lo, alpha_hi, beta_lo, beta_hi}) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw DomainError(kModule, "prior bounds must be positive and finite");
        }
    }
    if (!(alpha_lo < alpha_hi) || !(beta_lo < beta_hi)) {
        throw DomainError(kModule, "hyper-prior lower bounds must be below the upper bounds");
    }
    if (chains < 2) {
        throw DomainError(kModule, "at least 2 chains are required");
    }
    if (draws < 4) {
        throw DomainError(kModule, "at least 4 kept draws per chain are required");
    }
}

std::size_t HierDraws::total() const {
    std::size_t t = 0;
    for (const auto& c : chains) {
        t += c.size();
    }
    return t;
}

std::vector<double> HierDraws::pooled_mu0() const {
    std::vector<double> out;
    out.reserve(total());
    for (const auto& c : chains) {
        for (const auto& s : c) {
            out.push_back(s.mu0);
        }
    }
    return out;
}

const ParamDiagnostics& HierDraws::diagnostic(const std::string& name) const {
    for (const auto& d : diagnostics) {
        if (d.name == name) {
            return d;
        }
    }
    throw DomainError(kModule, "no diagnostics for parameter '" + name + "'");
}

double log_posterior(const HierState& state, std::span<const DiffSeries> data, const HierConfig& cfg) {
    const std::size_t q = data.size();
    if (state.mu.size() != q || state.sigma.size() != q) {
        throw DomainError(kModule, "state does not match the number of datasets");
    }
    const bool support = state.mu0 > -1.0 && state.mu0 < 1.0 && state.sigma0 > 0.0 && state.sigma0 < cfg.s0_bar &&
                         state.nu > 0.0 && std::isfinite(state.nu) && state.alpha > cfg.alpha_lo &&
                         state.alpha < cfg.alpha_hi && state.beta > cfg.beta_lo && state.beta < cfg.beta_hi;
    if (!support) {
        return kNegInf;
    }
    for (std::size_t i = 0; i < q; ++i) {
        if (!(state.sigma[i] > 0.0 && state.sigma[i] < cfg.sigma_bar) || !std::isfinite(state.mu[i])) {
            return kNegInf;
        }
    }
    const double qd = static_cast<double>(q);
    double lp = -std::log(2.0) - std::log(cfg.s0_bar) - std::log(cfg.alpha_hi - cfg.alpha_lo) -
                std::log(cfg.beta_hi - cfg.beta_lo) - qd * std::log(cfg.sigma_bar);
    lp += gamma_logpdf(state.nu, state.alpha, state.beta);
    const double norm = student_norm(state.nu, state.sigma0);
    for (std::size_t i = 0; i < q; ++i) {
        lp += norm + student_kernel(state.mu[i], state.mu0, state.sigma0, state.nu);
        lp += detail::cs_loglik_unchecked(data[i].mean, data[i].ss, static_cast<double>(data[i].n), state.mu[i],
                                          state.sigma[i] * state.sigma[i], cfg.rho);
    }
    return std::isnan(lp) ? kNegInf : lp;
}

HierDraws fit(std::span<const DiffSeries> data, const HierConfig& cfg) {
    check_data(data);
    cfg.validate();
    const std::size_t q = data.size();
    const auto means = sample_means(data);

    HierState init;
    init.mu = means;
    for (const auto& d : data) {
        init.sigma.push_back(std::max(d.sd, kEps));
    }
    init.mu0 = median_of(means);
    init.sigma0 = std::max(sample_sd(means), kEps);
    init.nu = 5.0;
    init.alpha = 1.0;
    init.beta = 0.1;
    const double lp0 = log_posterior(init, data, cfg);
    if (!std::isfinite(lp0)) {
        throw InitializationError("initial state has non-finite log posterior");
    }

    HierDraws out;
    out.q = q;
    out.chains.resize(cfg.chains);
    out.acceptance.resize(cfg.chains);
    parallel_for(cfg.chains, cfg.threads, [&](std::size_t c) {
        Chain chain(data, cfg, init, cfg.seed.derive(c));
        out.chains[c] = chain.run(out.acceptance[c]);
    });

    add_diagnostics(out, "mu0", [](const HierState& s) { return s.mu0; });
    add_diagnostics(out, "sigma0", [](const HierState& s) { return s.sigma0; });
    add_diagnostics(out, "nu", [](const HierState& s) { return s.nu; });
    add_diagnostics(out, "alpha", [](const HierState& s) { return s.alpha; });
    add_diagnostics(out, "beta", [](const HierState& s) { return s.beta; });
    for (std::size_t i = 0; i < q; ++i) {
        add_diagnostics(out, "mu_" + std::to_string(i + 1), [i](const HierState& s) { return s.mu[i]; });
    }
    for (std::size_t i = 0; i < q; ++i) {
        add_diagnostics(out, "sigma_" + std::to_string(i + 1), [i](const HierState& s) { return s.sigma[i]; });
    }
    return out;
}

TrinomialSamples next_dataset_probs(const HierDraws& draws, const Rope& rope, std::size_t count, RngStream rng) {
    rope.validate();
    std::vector<const HierState*> pool;
    pool.reserve(draws.total());
    for (const auto& c : draws.chains) {
        for (const auto& s : c) {
            pool.push_back(&s);
        }
    }
    if (pool.empty()) {
        throw DomainError(kModule, "no posterior draws");
    }
    std::vector<const HierState*> picked;
    if (count == 0 || count == pool.size()) {
        picked = pool;
    } else {
        Rng r(rng);
        picked.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            picked.push_back(pool[r.index(pool.size())]);
        }
    }
    TrinomialSamples out;
    out.samples = Matrix(picked.size(), 3);
    out.seed = {rng.seed, rng.stream, 0};
    for (std::size_t k = 0; k < picked.size(); ++k) {
        const HierState& s = *picked[k];
        const LocScaleStudent next{s.nu, s.mu0, s.sigma0 * s.sigma0};
        const double left = student_cdf(rope.lower, next);
        const double right = student_sf(rope.upper, next);
        auto row = out.samples.row(k);
        row[0] = left;
        row[1] = 1.0 - (left + right);
        row[2] = right;
    }
    return out;
}

ShrinkageReport shrinkage_report(const HierDraws& draws, std::span<const DiffSeries> data) {
    if (draws.q != data.size()) {
        throw DomainError(kModule, "draws do not match the number of datasets");
    }
    const std::size_t total = draws.total();
    if (total == 0) {
        throw DomainError(kModule, "no posterior draws");
    }
    ShrinkageReport rep;
    const double med = median_of(sample_means(data));
    for (std::size_t i = 0; i < data.size(); ++i) {
        double sum = 0.0;
        for (const auto& c : draws.chains) {
            for (const auto& s : c) {
                sum += s.mu[i];
            }
        }
        const double mean = sum / static_cast<double>(total);
        double ss = 0.0;
        for (const auto& c : draws.chains) {
            for (const auto& s : c) {
                ss += (s.mu[i] - mean) * (s.mu[i] - mean);
            }
        }
        const double sd = total > 1 ? std::sqrt(ss / static_cast<double>(total - 1)) : 0.0;
        rep.rows.push_back({data[i].dataset, data[i].mean, mean, sd});
        rep.pooled_spread += std::fabs(mean - med);
        rep.raw_spread += std::fabs(data[i].mean - med);
    }
    return rep;
}

void write_draws_csv(std::ostream& out, const HierDraws& draws) {
    out << "chain,iteration,mu0,sigma0,nu,alpha,beta";
    for (std::size_t i = 1; i <= draws.q; ++i) {
        out << ",mu_" << i;
    }
    for (std::size_t i = 1; i <= draws.q; ++i) {
        out << ",sigma_" << i;
    }
    out << '\n';
    for (std::size_t c = 0; c < draws.chains.size(); ++c) {
        const auto& chain = draws.chains[c];
        for (std::size_t it = 0; it < chain.size(); ++it) {
            const HierState& s = chain[it];
            out << c << ',' << it;
            for (double v : {s.mu0, s.sigma0, s.nu, s.alpha, s.beta}) {
                out << ',' << format_double(v);
            }
            for (double v : s.mu) {
                out << ',' << format_double(v);
            }
            for (double v : s.sigma) {
                out << ',' << format_double(v);
            }
            out << '\n';
        }
    }
}

} // namespace bayescmp

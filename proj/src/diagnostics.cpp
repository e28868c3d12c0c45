#include "bayescmp/diagnostics.hpp"

#include "bayescmp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace bayescmp {

namespace {

constexpr const char* kModule = "hier-model";

std::vector<std::vector<double>> split_halves(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) {
        throw DomainError(kModule, "diagnostics need at least one chain");
    }
    const std::size_t n = chains.front().size();
    for (const auto& c : chains) {
        if (c.size() != n) {
            throw DomainError(kModule, "chains differ in length");
        }
    }
    if (n < 4) {
        throw DomainError(kModule, "diagnostics need at least 4 draws per chain");
    }
    const std::size_t half = n / 2;
    std::vector<std::vector<double>> out;
    out.reserve(2 * chains.size());
    for (const auto& c : chains) {
        out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
        out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

struct Moments {
    std::vector<double> means;
    double within = 0.0;   // mean of chain variances
    double var_plus = 0.0; // pooled variance estimate
};

Moments moments(const std::vector<std::vector<double>>& chains) {
    Moments m;
    const double n = static_cast<double>(chains.front().size());
    double sum_var = 0.0;
    for (const auto& c : chains) {
        const double mu = mean_of(c);
        double ss = 0.0;
        for (double x : c) {
            ss += (x - mu) * (x - mu);
        }
        m.means.push_back(mu);
        sum_var += ss / (n - 1.0);
    }
    const double chains_d = static_cast<double>(chains.size());
    m.within = sum_var / chains_d;
    double between = 0.0;
    if (chains.size() > 1) {
        const double grand = mean_of(m.means);
        for (double mu : m.means) {
            between += (mu - grand) * (mu - grand);
        }
        between /= chains_d - 1.0;
    }
    m.var_plus = m.within * (n - 1.0) / n + between;
    return m;
}

} // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
    const auto split = split_halves(chains);
    const Moments m = moments(split);
    if (m.within == 0.0) {
        return m.var_plus == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return std::sqrt(m.var_plus / m.within);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
    const auto split = split_halves(chains);
    const std::size_t n = split.front().size();
    const double total = static_cast<double>(n * split.size());
    const Moments m = moments(split);
    if (m.within == 0.0 || m.var_plus == 0.0) {
        return total;
    }

    // Mean over chains of the biased lag-t autocovariance.
    auto mean_acov = [&](std::size_t t) {
        double acc = 0.0;
        for (std::size_t c = 0; c < split.size(); ++c) {
            const auto& x = split[c];
            const double mu = m.means[c];
            double s = 0.0;
            for (std::size_t k = 0; k + t < n; ++k) {
                s += (x[k] - mu) * (x[k + t] - mu);
            }
            acc += s / static_cast<double>(n);
        }
        return acc / static_cast<double>(split.size());
    };
    auto rho_at = [&](std::size_t t) { return 1.0 - (m.within - mean_acov(t)) / m.var_plus; };

    std::vector<double> rho(n + 2, 0.0);
    rho[0] = 1.0;
    double even = 1.0;
    double odd = rho_at(1);
    rho[1] = odd;
    std::size_t t = 1;
    while (t + 5 < n && even + odd > 0.0) {
        even = rho_at(t + 1);
        odd = rho_at(t + 2);
        if (even + odd >= 0.0) {
            rho[t + 1] = even;
            rho[t + 2] = odd;
        }
        t += 2;
    }
    const std::size_t max_t = t;
    if (even > 0.0) {
        rho[max_t + 1] = even;
    }
    // Initial monotone sequence.
    for (std::size_t u = 1; u + 3 <= max_t; u += 2) {
        if (rho[u + 1] + rho[u + 2] > rho[u - 1] + rho[u]) {
            rho[u + 1] = 0.5 * (rho[u - 1] + rho[u]);
            rho[u + 2] = rho[u + 1];
        }
    }
    double sum = 0.0;
    for (std::size_t u = 0; u <= max_t; ++u) {
        sum += rho[u];
    }
    double tau = -1.0 + 2.0 * sum + rho[max_t + 1];
    tau = std::max(tau, 1.0 / std::log10(total));
    return total / tau;
}

} // namespace bayescmp

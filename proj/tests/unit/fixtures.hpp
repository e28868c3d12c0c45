#pragma once

#include "bayescmp/bayes_ttest.hpp"
#include "bayescmp/data_model.hpp"
#include "bayescmp/decide_report.hpp"
#include "bayescmp/stat_kernels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(BAYESCMP_TEST_DATA_DIR) + "/" + name; }

/// One row of the published nbc - aode per-dataset summary.
struct PublishedRow {
    std::string dataset;
    double mean_diff_percent;
    double p_value;
};

inline std::vector<PublishedRow> published_rows() {
    std::ifstream in(data_path("nbc_aode_means.csv"));
    if (!in) {
        throw std::runtime_error("missing nbc_aode_means.csv");
    }
    std::string line;
    std::getline(in, line);
    std::vector<PublishedRow> rows;
    while (std::getline(in, line)) {
        std::istringstream s(line);
        std::string ds, m, p;
        std::getline(s, ds, ',');
        std::getline(s, m, ',');
        std::getline(s, p, ',');
        rows.push_back({ds, std::stod(m), std::stod(p)});
    }
    return rows;
}

/// The 54 per-dataset mean differences nbc - aode, as fractions.
inline bayescmp::MeanDiffVector nbc_aode_z() {
    bayescmp::MeanDiffVector z;
    for (const auto& r : published_rows()) {
        z.z.push_back(r.mean_diff_percent / 100.0);
        z.datasets.push_back(r.dataset);
    }
    return z;
}

/// Bayesian t-test inputs rebuilt from the published nbc - aode summaries:
/// location = mean difference, scale chosen so that the matching-prior
/// two-sided p-value equals the printed one (99 dof). A printed p of 0, or a
/// zero mean, becomes a point mass. anneal uses its full summary (sd 0.01583, n 100,
/// rho 0.1) since its printed p is rounded too coarsely to pin the scale.
inline std::vector<bayescmp::ComparisonInput> published_comparisons() {
    using namespace bayescmp;
    std::vector<ComparisonInput> out;
    for (const auto& r : published_rows()) {
        const double loc = r.mean_diff_percent / 100.0;
        LocScaleStudent post{99.0, loc, 0.0};
        if (r.dataset == "anneal") {
            post = posterior(DiffSummary{loc, 0.01583, 100, 0.1});
        } else if (r.p_value > 0.0 && loc != 0.0) {
            const double t = student_quantile(1.0 - r.p_value / 2.0, {99.0, 0.0, 1.0});
            const double scale = std::fabs(loc) / t;
            post.scale2 = scale * scale;
        }
        out.push_back({r.dataset, rope_probs(post, Rope{}), r.p_value});
    }
    return out;
}

/// n compound-symmetric Gaussian differences with mean mu and scale sigma.
inline std::vector<double> cs_series(bayescmp::Rng& rng, std::size_t n, double mu, double sigma, double rho) {
    const double shared = rng.normal();
    std::vector<double> x(n);
    for (auto& v : x) {
        v = mu + sigma * (std::sqrt(rho) * shared + std::sqrt(1.0 - rho) * rng.normal());
    }
    return x;
}

} // namespace fixtures

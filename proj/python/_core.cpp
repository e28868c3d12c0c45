#include "bayescmp/bayes_ttest.hpp"
#include "bayescmp/decide_report.hpp"
#include "bayescmp/dp_tests.hpp"
#include "bayescmp/error.hpp"
#include "bayescmp/freq_tests.hpp"
#include "bayescmp/hier_model.hpp"
#include "cli_app.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace bayescmp;

namespace {

py::dict probs_dict(const TrinomialProbs& p) {
    py::dict d;
    d["a_better"] = p.right;
    d["rope"] = p.rope;
    d["b_better"] = p.left;
    return d;
}

py::dict region_dict(const RegionProbs& r) {
    py::dict d = probs_dict(r.probs);
    d["mc_stderr"] = probs_dict(r.mc_stderr);
    d["count"] = r.count;
    return d;
}

MeanDiffVector to_z(const std::vector<double>& z) {
    MeanDiffVector v;
    v.z = z;
    v.datasets.resize(z.size());
    return v;
}

Rope to_rope(std::pair<double, double> r) {
    Rope rope{r.first, r.second};
    rope.validate();
    return rope;
}

TrinomialProbs from_dict(const py::dict& d) {
    return {d["b_better"].cast<double>(), d["rope"].cast<double>(), d["a_better"].cast<double>()};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bayesian and frequentist comparison of classifiers from cross-validation scores";

    py::register_exception<Error>(m, "BayesCmpError", PyExc_ValueError);

    m.def(
        "correlated_ttest",
        [](const std::vector<double>& x, double rho, double mu0) {
            const auto r = correlated_ttest(DiffSeries::from_values("x", x, rho), mu0);
            py::dict d;
            d["t"] = r.t;
            d["dof"] = r.dof;
            d["p_two_sided"] = r.p_two_sided;
            d["p_one_sided_greater"] = r.p_one_sided_greater;
            return d;
        },
        py::arg("x"), py::arg("rho"), py::arg("mu0") = 0.0,
        "Correlated t-test on one dataset's paired differences.");

    m.def(
        "wilcoxon",
        [](const std::vector<double>& z) {
            const auto r = wilcoxon_signed_rank(z);
            py::dict d;
            d["t_stat"] = r.t_stat;
            d["w"] = r.w;
            d["p_two_sided"] = r.p_two_sided;
            d["n_used"] = r.n_used;
            d["n_zeros"] = r.n_zeros;
            d["exact"] = r.exact;
            return d;
        },
        py::arg("z"), "Wilcoxon signed-rank test on per-dataset mean differences.");

    m.def(
        "bayes_ttest",
        [](const std::vector<double>& x, double rho, std::pair<double, double> rope) {
            const auto post = posterior(DiffSeries::from_values("x", x, rho));
            py::dict d = probs_dict(rope_probs(post, to_rope(rope)));
            d["dof"] = post.dof;
            d["loc"] = post.loc;
            d["scale2"] = post.scale2;
            return d;
        },
        py::arg("x"), py::arg("rho"), py::arg("rope") = std::pair{-0.01, 0.01},
        "Bayesian correlated t-test: posterior of the mean difference and rope probabilities.");

    m.def(
        "sign_test",
        [](const std::vector<double>& z, std::pair<double, double> rope, double s, const std::string& z0,
           std::size_t samples, std::uint64_t seed) {
            const auto params = sign_test_params(to_z(z), to_rope(rope), DpPrior{s, parse_placement(z0)});
            return region_dict(sign_test_probs(params, samples, RngStream{seed, 0}).regions);
        },
        py::arg("z"), py::arg("rope") = std::pair{-0.01, 0.01}, py::arg("s") = 0.5, py::arg("z0") = "rope",
        py::arg("samples") = kDefaultDpSamples, py::arg("seed") = 0, "Bayesian sign test.");

    m.def(
        "signed_rank",
        [](const std::vector<double>& z, std::pair<double, double> rope, double s, const std::string& z0,
           std::size_t samples, std::uint64_t seed, unsigned threads) {
            py::gil_scoped_release release;
            const auto draws = signed_rank_samples(to_z(z), to_rope(rope), DpPrior{s, parse_placement(z0)}, samples,
                                                   RngStream{seed, 0}, threads);
            const auto regions = simplex_region_probs(draws);
            py::gil_scoped_acquire acquire;
            return region_dict(regions);
        },
        py::arg("z"), py::arg("rope") = std::pair{-0.01, 0.01}, py::arg("s") = 0.5, py::arg("z0") = "rope",
        py::arg("samples") = kDefaultDpSamples, py::arg("seed") = 0, py::arg("threads") = 1,
        "Bayesian signed-rank test.");

    m.def(
        "hierarchical",
        [](const std::vector<std::vector<double>>& series, double rho, std::pair<double, double> rope,
           std::size_t chains, std::size_t warmup, std::size_t draws, std::uint64_t seed) {
            std::vector<DiffSeries> data;
            for (std::size_t i = 0; i < series.size(); ++i) {
                data.push_back(DiffSeries::from_values("ds" + std::to_string(i + 1), series[i], rho));
            }
            auto cfg = HierConfig::defaults_for(data, RngStream{seed, 0});
            cfg.rho = rho;
            cfg.chains = chains;
            cfg.warmup = warmup;
            cfg.draws = draws;
            const auto fitted = fit(data, cfg);
            const auto next = next_dataset_probs(fitted, to_rope(rope), kDefaultNextDatasetDraws, RngStream{seed, 1});
            py::dict d = region_dict(simplex_region_probs(next));
            const auto mu0 = fitted.pooled_mu0();
            double s = 0;
            for (double v : mu0) {
                s += v;
            }
            d["mu0_mean"] = s / static_cast<double>(mu0.size());
            d["mu0_rhat"] = fitted.diagnostic("mu0").rhat;
            d["mu0_ess"] = fitted.diagnostic("mu0").ess;
            d["converged"] = fitted.converged;
            return d;
        },
        py::arg("series"), py::arg("rho"), py::arg("rope") = std::pair{-0.01, 0.01}, py::arg("chains") = 4,
        py::arg("warmup") = 1000, py::arg("draws") = 1000, py::arg("seed") = 0,
        "Hierarchical correlated t-test; region probabilities for the next dataset.");

    m.def(
        "decide",
        [](const py::dict& probs, double threshold) {
            return std::string(to_string(threshold_decision(from_dict(probs), threshold).verdict));
        },
        py::arg("probs"), py::arg("threshold") = kDefaultThreshold, "Threshold decision on rope probabilities.");

    m.def(
        "decide_loss",
        [](const py::dict& probs) { return std::string(to_string(loss_decision(from_dict(probs)).verdict)); },
        py::arg("probs"), "Decision minimizing the default expected loss.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the bayescmp command line; returns (exit code, stdout, stderr).");
}

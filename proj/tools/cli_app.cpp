#include "cli_app.hpp"

#include "bayescmp/bayes_ttest.hpp"
#include "bayescmp/data_model.hpp"
#include "bayescmp/decide_report.hpp"
#include "bayescmp/dp_tests.hpp"
#include "bayescmp/error.hpp"
#include "bayescmp/format.hpp"
#include "bayescmp/freq_tests.hpp"
#include "bayescmp/hier_model.hpp"
#include "bayescmp/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace bayescmp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kDefaultBins = 30;

const std::vector<std::string> kMethods{"freq-ttest", "wilcoxon", "bayes-ttest", "sign", "signed-rank",
                                        "hierarchical"};

struct RunConfig {
    std::string method;
    std::string input;
    std::vector<std::string> pair;
    bool all_pairs = false;
    std::optional<std::string> dataset;
    double rope_lower = -0.01;
    double rope_upper = 0.01;
    std::optional<double> rho;
    std::optional<std::size_t> samples;
    double prior_strength = 0.5;
    std::string z0 = "rope";
    bool sensitivity = false;
    std::optional<std::uint64_t> seed;
    std::size_t chains = 4;
    std::size_t warmup = 1000;
    std::size_t draws = 1000;
    std::string out_dir = "bayescmp-out";
    double threshold = kDefaultThreshold;
    std::optional<std::string> loss_matrix;
    unsigned threads = 0;
    std::size_t bins = kDefaultBins;
    double alpha = kDefaultAlpha;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error("cli", message) {}
};

// Which methods each method-specific flag applies to.
const std::map<std::string, std::set<std::string>>& applicability() {
    static const std::map<std::string, std::set<std::string>> table{
        {"--dataset", {"freq-ttest", "bayes-ttest"}},
        {"--samples", {"sign", "signed-rank", "hierarchical"}},
        {"--prior-strength", {"sign", "signed-rank"}},
        {"--z0", {"sign", "signed-rank"}},
        {"--sensitivity", {"signed-rank"}},
        {"--chains", {"hierarchical"}},
        {"--warmup", {"hierarchical"}},
        {"--draws", {"hierarchical"}},
        {"--threshold", {"bayes-ttest", "sign", "signed-rank", "hierarchical"}},
        {"--loss-matrix", {"bayes-ttest", "sign", "signed-rank", "hierarchical"}},
        {"--alpha", {"freq-ttest", "wilcoxon", "bayes-ttest"}},
        {"--bins", {"bayes-ttest"}},
    };
    return table;
}

bool applies(const std::string& flag, const std::set<std::string>& methods) {
    const auto& allowed = applicability().at(flag);
    return std::any_of(methods.begin(), methods.end(), [&](const auto& m) { return allowed.count(m) > 0; });
}

CLI::App* add_method_command(CLI::App& app,
                             const std::string& name,
                             const std::string& help,
                             const std::set<std::string>& methods,
                             RunConfig& cfg) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input", cfg.input, "Score table CSV (dataset,classifier,run,fold,score)")->required();
    auto* pair = sub->add_option("--pair", cfg.pair, "Compare classifier A against B (differences A - B)")
                     ->expected(2)
                     ->type_name("A B");
    sub->add_flag("--all-pairs", cfg.all_pairs, "Compare every pair of classifiers")->excludes(pair);
    sub->add_option("--rope-lower", cfg.rope_lower, "Lower rope bound (fraction)")->capture_default_str();
    sub->add_option("--rope-upper", cfg.rope_upper, "Upper rope bound (fraction)")->capture_default_str();
    sub->add_option("--rho", cfg.rho, "Correlation of cross-validation differences [default: 1/folds]");
    sub->add_option("--seed", cfg.seed, "Random seed; required by sign, signed-rank and hierarchical");
    sub->add_option("--out", cfg.out_dir, "Output directory")->envname("BAYESCMP_OUT_DIR")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores; results do not depend on it")
        ->capture_default_str();

    if (applies("--dataset", methods)) {
        sub->add_option("--dataset", cfg.dataset, "Restrict per-dataset tests to one dataset [default: all]");
    }
    if (applies("--samples", methods)) {
        sub->add_option("--samples", cfg.samples,
                        "Monte Carlo draws [default: 150000 for sign/signed-rank, 4000 for hierarchical]");
    }
    if (applies("--prior-strength", methods)) {
        sub->add_option("--prior-strength", cfg.prior_strength, "Dirichlet process prior strength s")
            ->capture_default_str();
    }
    if (applies("--z0", methods)) {
        sub->add_option("--z0", cfg.z0, "Pseudo-observation placement")
            ->check(CLI::IsMember({"rope", "pos-inf", "neg-inf"}))
            ->capture_default_str();
    }
    if (applies("--sensitivity", methods)) {
        sub->add_flag("--sensitivity", cfg.sensitivity, "Also report results for all three z0 placements");
    }
    if (applies("--chains", methods)) {
        sub->add_option("--chains", cfg.chains, "MCMC chains")->capture_default_str();
        sub->add_option("--warmup", cfg.warmup, "Warmup iterations per chain")->capture_default_str();
        sub->add_option("--draws", cfg.draws, "Kept draws per chain")->capture_default_str();
    }
    if (applies("--threshold", methods)) {
        auto* thr = sub->add_option("--threshold", cfg.threshold, "Decide when a probability exceeds this")
                        ->capture_default_str();
        sub->add_option("--loss-matrix", cfg.loss_matrix, "JSON 4x3 loss matrix; replaces the threshold rule")
            ->excludes(thr);
    }
    if (applies("--alpha", methods)) {
        sub->add_option("--alpha", cfg.alpha, "Significance level for p-values")->capture_default_str();
    }
    if (applies("--bins", methods)) {
        sub->add_option("--bins", cfg.bins, "Histogram bins for density exports")->capture_default_str();
    }
    return sub;
}

std::uint64_t pair_stream(const std::string& a, const std::string& b) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ull;
    };
    for (unsigned char c : a) {
        mix(c);
    }
    mix(0x1f);
    for (unsigned char c : b) {
        mix(c);
    }
    return h;
}

std::string safe_name(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '-' || c == '_';
        if (!ok) {
            c = '_';
        }
    }
    return out;
}

std::string pair_file(const std::string& a, const std::string& b) { return safe_name(a) + "__" + safe_name(b); }

/// Everything a run produces, held until the run has succeeded.
struct Outputs {
    std::vector<ReportRow> rows;
    json meta = json::object();
    std::vector<std::pair<std::string, std::string>> files; ///< relative path, content
    bool not_converged = false;
};

void add_csv(Outputs& o, const std::string& path, auto&& writer) {
    std::ostringstream s;
    writer(s);
    o.files.emplace_back(path, s.str());
}

std::string p_decision(double p, double alpha) { return p < alpha ? "reject-null" : "no-rejection"; }

json regions_json(const RegionProbs& r) {
    return {{"probs", to_json(r.probs)}, {"mc_stderr", to_json(r.mc_stderr)}, {"count", r.count}};
}

void write_samples(Outputs& o, const std::string& name, const TrinomialSamples& s) {
    add_csv(o, "simplex/" + name + ".csv", [&](std::ostream& out) { write_points_csv(out, barycentric_points(s)); });
    add_csv(o, "samples/" + name + ".csv", [&](std::ostream& out) {
        out << "theta_left,theta_rope,theta_right\n";
        for (std::size_t r = 0; r < s.count(); ++r) {
            const auto row = s.samples.row(r);
            out << format_double(row[0]) << ',' << format_double(row[1]) << ',' << format_double(row[2]) << '\n';
        }
    });
}

class Runner {
public:
    Runner(const RunConfig& cfg, const ScoreTable& table, const DecisionRule& rule, std::ostream& err)
        : cfg_(cfg), table_(table), rule_(rule), err_(err), rope_{cfg.rope_lower, cfg.rope_upper} {
        rope_.validate();
    }

    Outputs run(const std::vector<std::pair<std::string, std::string>>& pairs) {
        for (const auto& [a, b] : pairs) {
            const auto diffs = paired_differences(table_, a, b, cfg_.rho);
            if (cfg_.method == "freq-ttest") {
                freq_ttest(a, b, diffs);
            } else if (cfg_.method == "wilcoxon") {
                wilcoxon(a, b, diffs);
            } else if (cfg_.method == "bayes-ttest") {
                bayes_ttest(a, b, diffs);
            } else if (cfg_.method == "sign") {
                sign(a, b, diffs);
            } else if (cfg_.method == "signed-rank") {
                signed_rank(a, b, diffs);
            } else {
                hierarchical(a, b, diffs);
            }
        }
        return std::move(out_);
    }

private:
    ReportRow base_row(const std::string& a, const std::string& b) const {
        ReportRow row;
        row.a = a;
        row.b = b;
        row.method = cfg_.method;
        return row;
    }

    std::vector<const DiffSeries*> selected(const std::vector<DiffSeries>& diffs) const {
        std::vector<const DiffSeries*> out;
        for (const auto& d : diffs) {
            if (!cfg_.dataset || *cfg_.dataset == d.dataset) {
                out.push_back(&d);
            }
        }
        if (out.empty()) {
            throw UsageError("dataset '" + cfg_.dataset.value_or("") + "' not found for this pair");
        }
        return out;
    }

    void freq_ttest(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        for (const DiffSeries* d : selected(diffs)) {
            ReportRow row = base_row(a, b);
            row.dataset = d->dataset;
            row.rule = "p<" + format_double(cfg_.alpha);
            row.extra["summary"] = {{"mean", d->mean}, {"sd", d->sd}, {"n", d->n}, {"rho", d->rho}};
            try {
                const auto r = correlated_ttest(d->summary());
                row.decision = p_decision(r.p_two_sided, cfg_.alpha);
                row.extra["t"] = r.t;
                row.extra["dof"] = r.dof;
                row.extra["p_two_sided"] = r.p_two_sided;
                row.extra["p_one_sided_greater"] = r.p_one_sided_greater;
            } catch (const DegenerateDataError& e) {
                if (cfg_.dataset) {
                    throw;
                }
                err_ << "warning: " << e.what() << " (" << a << " vs " << b << ", " << d->dataset << ")\n";
                row.decision = "undefined";
                row.extra["error"] = e.what();
            }
            out_.rows.push_back(std::move(row));
        }
    }

    void wilcoxon(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        const auto z = mean_differences(diffs);
        const auto r = wilcoxon_signed_rank(z);
        ReportRow row = base_row(a, b);
        row.rule = "p<" + format_double(cfg_.alpha);
        row.decision = p_decision(r.p_two_sided, cfg_.alpha);
        row.extra["t_stat"] = r.t_stat;
        row.extra["w"] = r.w;
        row.extra["p_two_sided"] = r.p_two_sided;
        row.extra["tie_adjust"] = r.tie_adjust;
        row.extra["n_used"] = r.n_used;
        row.extra["n_zeros"] = r.n_zeros;
        row.extra["exact"] = r.exact;
        row.extra["small_sample"] = r.small_sample;
        out_.rows.push_back(std::move(row));
    }

    void bayes_ttest(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        std::vector<ComparisonInput> table_inputs;
        for (const DiffSeries* d : selected(diffs)) {
            const auto post = posterior(d->summary());
            const auto probs = rope_probs(post, rope_);
            const auto decision = rule_.apply(probs);
            ReportRow row = base_row(a, b);
            row.dataset = d->dataset;
            row.probs = probs;
            row.decision = std::string(to_string(decision.verdict));
            row.rule = decision.rule;
            row.extra["posterior"] = {{"dof", post.dof}, {"loc", post.loc}, {"scale2", post.scale2}};
            row.extra["p_positive"] = direction_prob(post);
            json hdi = json::array();
            if (!post.point_mass()) {
                const auto h = hdis(post, kDefaultHdiLevels);
                for (std::size_t k = 0; k < h.levels.size(); ++k) {
                    hdi.push_back(
                        {{"level", h.levels[k]}, {"lower", h.intervals[k].first}, {"upper", h.intervals[k].second}});
                }
            }
            row.extra["hdi"] = hdi;

            ComparisonInput in{d->dataset, probs, std::nullopt};
            if (d->sd > 0.0) {
                in.p_value = correlated_ttest(d->summary()).p_two_sided;
                row.extra["p_two_sided"] = *in.p_value;
            }
            table_inputs.push_back(in);
            const std::string name = pair_file(a, b) + "__" + safe_name(d->dataset);
            add_csv(out_, "density/" + name + ".csv",
                    [&](std::ostream& s) { write_histogram_csv(s, density_data(d->x, cfg_.bins)); });
            out_.rows.push_back(std::move(row));
        }
        add_hdi_csv(a, b);
        const auto t = decision_table(table_inputs, rule_, cfg_.alpha);
        json summary = {{"pair", {a, b}}, {"overall", counts_json(t.overall)}};
        if (t.nhst_rejected) {
            summary["nhst_not_rejected"] = counts_json(*t.nhst_not_rejected);
            summary["nhst_rejected"] = counts_json(*t.nhst_rejected);
        }
        out_.meta["summaries"].push_back(summary);
    }

    void add_hdi_csv(const std::string& a, const std::string& b) {
        add_csv(out_, "hdi/" + pair_file(a, b) + ".csv", [&](std::ostream& s) {
            s << "dataset,level,lower,upper\n";
            for (const auto& row : out_.rows) {
                if (row.a != a || row.b != b || !row.dataset) {
                    continue;
                }
                for (const auto& h : row.extra["hdi"]) {
                    s << *row.dataset << ',' << format_double(h["level"].get<double>()) << ','
                      << format_double(h["lower"].get<double>()) << ',' << format_double(h["upper"].get<double>())
                      << '\n';
                }
            }
        });
    }

    static json counts_json(const VerdictCounts& c) {
        return {{"total", c.total},
                {"equivalent", c.equivalent},
                {"different", c.different},
                {"no_decision", c.no_decision}};
    }

    RngStream stream_for(const std::string& a, const std::string& b) const {
        return RngStream{*cfg_.seed, pair_stream(a, b)};
    }

    void fill_bayes_row(ReportRow& row, const RegionProbs& r, const RngStream& stream) const {
        const auto decision = rule_.apply(r.probs);
        row.probs = r.probs;
        row.mc_stderr = r.mc_stderr;
        row.decision = std::string(to_string(decision.verdict));
        row.rule = decision.rule;
        row.seed = SeedRecord{stream.seed, stream.stream, kChunkSize};
        row.extra["samples"] = r.count;
    }

    DpPrior dp_prior() const { return DpPrior{cfg_.prior_strength, parse_placement(cfg_.z0)}; }

    void sign(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        const auto z = mean_differences(diffs);
        const auto prior = dp_prior();
        const auto params = sign_test_params(z, rope_, prior);
        const auto stream = stream_for(a, b);
        const auto res = sign_test_probs(params, cfg_.samples.value_or(kDefaultDpSamples), stream, cfg_.threads);
        ReportRow row = base_row(a, b);
        fill_bayes_row(row, res.regions, stream);
        row.extra["dirichlet"] = {{"left", params.left}, {"rope", params.rope}, {"right", params.right}};
        row.extra["prior"] = {{"s", prior.s}, {"z0", to_string(prior.z0)}};
        write_samples(out_, pair_file(a, b), res.samples);
        out_.rows.push_back(std::move(row));
    }

    void signed_rank(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        const auto z = mean_differences(diffs);
        const auto prior = dp_prior();
        const auto stream = stream_for(a, b);
        const std::size_t count = cfg_.samples.value_or(kDefaultDpSamples);
        const auto samples = signed_rank_samples(z, rope_, prior, count, stream, cfg_.threads);
        const auto regions = simplex_region_probs(samples);
        ReportRow row = base_row(a, b);
        fill_bayes_row(row, regions, stream);
        row.extra["prior"] = {{"s", prior.s}, {"z0", to_string(prior.z0)}};
        if (cfg_.sensitivity) {
            const auto sens = prior_sensitivity(z, rope_, prior.s, count, stream.derive(0x53454e53ull), cfg_.threads);
            row.extra["prior_sensitivity"] = {{"neg-inf", regions_json(sens.neg_infinity)},
                                              {"rope", regions_json(sens.in_rope)},
                                              {"pos-inf", regions_json(sens.pos_infinity)}};
        }
        write_samples(out_, pair_file(a, b), samples);
        out_.rows.push_back(std::move(row));
    }

    void hierarchical(const std::string& a, const std::string& b, const std::vector<DiffSeries>& diffs) {
        const auto stream = stream_for(a, b);
        HierConfig hc = HierConfig::defaults_for(diffs, stream);
        hc.chains = cfg_.chains;
        hc.warmup = cfg_.warmup;
        hc.draws = cfg_.draws;
        hc.threads = cfg_.threads;
        const auto draws = fit(diffs, hc);
        const auto next = next_dataset_probs(draws, rope_, cfg_.samples.value_or(kDefaultNextDatasetDraws),
                                             stream.derive(0x4e455854ull));
        const auto regions = simplex_region_probs(next);
        ReportRow row = base_row(a, b);
        fill_bayes_row(row, regions, stream);
        row.seed->chunk_size = 0;

        const auto mu0 = draws.pooled_mu0();
        double mean = 0.0;
        for (double v : mu0) {
            mean += v;
        }
        mean /= static_cast<double>(mu0.size());
        double ss = 0.0;
        for (double v : mu0) {
            ss += (v - mean) * (v - mean);
        }
        const auto& diag = draws.diagnostic("mu0");
        row.extra["mu0"] = {{"mean", mean},
                            {"sd", std::sqrt(ss / static_cast<double>(mu0.size() - 1))},
                            {"rhat", diag.rhat},
                            {"ess", diag.ess}};
        row.extra["converged"] = draws.converged;
        row.extra["max_rhat"] = draws.max_rhat;
        row.extra["config"] = {{"rho", hc.rho},
                               {"sigma_bar", hc.sigma_bar},
                               {"s0_bar", hc.s0_bar},
                               {"chains", hc.chains},
                               {"warmup", hc.warmup},
                               {"draws", hc.draws}};
        const auto shrink = shrinkage_report(draws, diffs);
        json rows = json::array();
        for (const auto& r : shrink.rows) {
            rows.push_back({{"dataset", r.dataset},
                            {"sample_mean", r.sample_mean},
                            {"posterior_mean", r.posterior_mean},
                            {"posterior_sd", r.posterior_sd}});
        }
        row.extra["shrinkage"] = {
            {"pooled_spread", shrink.pooled_spread}, {"raw_spread", shrink.raw_spread}, {"datasets", rows}};
        if (!draws.converged) {
            out_.not_converged = true;
            err_ << "hier-model: " << a << " vs " << b << " did not converge (max R-hat "
                 << format_double(draws.max_rhat) << " > " << format_double(kRhatLimit) << ")\n";
        }
        add_csv(out_, "draws/" + pair_file(a, b) + ".csv", [&](std::ostream& s) { write_draws_csv(s, draws); });
        write_samples(out_, pair_file(a, b), next);
        out_.rows.push_back(std::move(row));
    }

    const RunConfig& cfg_;
    const ScoreTable& table_;
    const DecisionRule& rule_;
    std::ostream& err_;
    Rope rope_;
    Outputs out_;
};

void validate(const RunConfig& cfg, const CLI::App& sub) {
    for (const auto& [flag, methods] : applicability()) {
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt && opt->count() > 0 && methods.count(cfg.method) == 0) {
            throw UsageError(flag + " does not apply to method " + cfg.method);
        }
    }
    const bool monte_carlo = cfg.method == "sign" || cfg.method == "signed-rank" || cfg.method == "hierarchical";
    if (monte_carlo && !cfg.seed) {
        throw UsageError("--seed is required for method " + cfg.method);
    }
    if (cfg.pair.empty() && !cfg.all_pairs) {
        throw UsageError("choose --pair A B or --all-pairs");
    }
    if (cfg.pair.size() == 2 && cfg.pair[0] == cfg.pair[1]) {
        throw UsageError("--pair needs two different classifiers");
    }
    if (cfg.samples && *cfg.samples == 0) {
        throw UsageError("--samples must be positive");
    }
    if (cfg.bins == 0) {
        throw UsageError("--bins must be positive");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
}

std::vector<std::pair<std::string, std::string>> resolve_pairs(const RunConfig& cfg, const ScoreTable& table) {
    const auto& names = table.classifiers();
    std::vector<std::pair<std::string, std::string>> pairs;
    if (cfg.all_pairs) {
        if (names.size() < 2) {
            throw UsageError("--all-pairs needs at least two classifiers in the input");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                pairs.emplace_back(names[i], names[j]);
            }
        }
        return pairs;
    }
    for (const auto& c : cfg.pair) {
        if (std::find(names.begin(), names.end(), c) == names.end()) {
            throw UsageError("unknown classifier '" + c + "'");
        }
    }
    pairs.emplace_back(cfg.pair[0], cfg.pair[1]);
    return pairs;
}

void write_outputs(const RunConfig& cfg, const Outputs& o, const DecisionRule& rule, const Rope& rope) {
    json meta = o.meta;
    meta["tool"] = "bayescmp";
    meta["version"] = kVersion;
    meta["method"] = cfg.method;
    meta["input"] = cfg.input;
    meta["rope"] = {{"lower", rope.lower}, {"upper", rope.upper}};
    meta["rule"] = rule.describe();
    const json doc = report_document(o.rows, meta);

    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    auto write = [&](const fs::path& rel, const std::string& content) {
        const fs::path path = dir / rel;
        fs::create_directories(path.parent_path(), ec);
        std::ofstream f(path, std::ios::binary);
        f << content;
        if (!f) {
            throw UsageError("cannot write '" + path.string() + "'");
        }
    };
    for (const auto& [rel, content] : o.files) {
        write(rel, content);
    }
    write("report.json", doc.dump(2) + "\n");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Compare classifiers from cross-validation score tables", "bayescmp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("bayescmp ") + kVersion);

    std::vector<std::pair<CLI::App*, std::string>> commands;
    const std::map<std::string, std::string> helps{
        {"freq-ttest", "Correlated t-test per dataset"},
        {"wilcoxon", "Wilcoxon signed-rank test across datasets"},
        {"bayes-ttest", "Bayesian correlated t-test per dataset"},
        {"sign", "Bayesian sign test across datasets"},
        {"signed-rank", "Bayesian signed-rank test across datasets"},
        {"hierarchical", "Hierarchical correlated t-test across datasets"},
    };
    for (const auto& m : kMethods) {
        commands.emplace_back(add_method_command(app, m, helps.at(m), {m}, cfg), m);
    }
    const std::set<std::string> all(kMethods.begin(), kMethods.end());
    CLI::App* compare = add_method_command(app, "compare", "Run any method, chosen with --method", all, cfg);
    compare->add_option("--method", cfg.method, "Test to run")->required()->check(CLI::IsMember(kMethods));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    const CLI::App* chosen = compare;
    for (const auto& [sub, name] : commands) {
        if (sub->parsed()) {
            chosen = sub;
            cfg.method = name;
        }
    }

    try {
        validate(cfg, *chosen);
        const DecisionRule rule = cfg.loss_matrix ? DecisionRule::with_loss(LossMatrix::from_file(*cfg.loss_matrix))
                                                  : DecisionRule::with_threshold(cfg.threshold);
        rule.apply(TrinomialProbs{0.0, 1.0, 0.0});
        const ScoreTable table = read_scores_file(cfg.input);
        const auto pairs = resolve_pairs(cfg, table);
        Runner runner(cfg, table, rule, err);
        const Outputs outputs = runner.run(pairs);
        write_outputs(cfg, outputs, rule, Rope{cfg.rope_lower, cfg.rope_upper});
        out << "wrote " << outputs.rows.size() << " report rows to "
            << (fs::path(cfg.out_dir) / "report.json").string() << '\n';
        return outputs.not_converged ? kExitNotConverged : kExitOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "cli: " << e.what() << '\n';
    }
    return kExitInvalid;
}

} // namespace bayescmp::cli

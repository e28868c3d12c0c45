#include "bayescmp/decide_report.hpp"

#include "bayescmp/error.hpp"
#include "bayescmp/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace bayescmp {

namespace {

constexpr const char* kModule = "decide-report";
constexpr double kLossTieTolerance = 1e-9;

enum Action : std::size_t { kDecideLeft = 0, kDecideRope = 1, kDecideRight = 2, kNoDecision = 3 };

Verdict verdict_of(std::size_t action) {
    switch (action) {
    case kDecideLeft:
        return Verdict::BBetter;
    case kDecideRope:
        return Verdict::Equivalent;
    case kDecideRight:
        return Verdict::ABetter;
    default:
        return Verdict::NoDecision;
    }
}

void tally(VerdictCounts& c, Verdict v) {
    ++c.total;
    switch (v) {
    case Verdict::Equivalent:
        ++c.equivalent;
        break;
    case Verdict::ABetter:
    case Verdict::BBetter:
        ++c.different;
        break;
    case Verdict::NoDecision:
        ++c.no_decision;
        break;
    }
}

} // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::ABetter:
        return "A-better";
    case Verdict::BBetter:
        return "B-better";
    case Verdict::Equivalent:
        return "practically-equivalent";
    case Verdict::NoDecision:
        return "no-decision";
    }
    return "no-decision";
}

LossMatrix LossMatrix::standard() {
    LossMatrix l;
    l.entries = {{{0.0, 20.0, 20.0}, {20.0, 0.0, 20.0}, {20.0, 20.0, 0.0}, {1.0, 1.0, 1.0}}};
    return l;
}

LossMatrix LossMatrix::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(kModule, std::string("loss matrix is not valid JSON: ") + e.what());
    }
    if (doc.is_object()) {
        if (!doc.contains("loss")) {
            throw DomainError(kModule, "loss matrix object needs a \"loss\" member");
        }
        doc = doc["loss"];
    }
    if (!doc.is_array() || doc.size() != 4) {
        throw DomainError(kModule, "loss matrix must have 4 rows");
    }
    LossMatrix l;
    for (std::size_t r = 0; r < 4; ++r) {
        if (!doc[r].is_array() || doc[r].size() != 3) {
            throw DomainError(kModule, "loss matrix rows must have 3 entries");
        }
        for (std::size_t c = 0; c < 3; ++c) {
            if (!doc[r][c].is_number()) {
                throw DomainError(kModule, "loss matrix entries must be numbers");
            }
            l.entries[r][c] = doc[r][c].get<double>();
        }
    }
    l.validate();
    return l;
}

LossMatrix LossMatrix::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError(kModule, "cannot open loss matrix file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void LossMatrix::validate() const {
    for (const auto& row : entries) {
        for (double v : row) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw DomainError(kModule, "loss matrix entries must be finite and non-negative");
            }
        }
    }
}

std::array<double, 4> LossMatrix::expected(const TrinomialProbs& p) const {
    std::array<double, 4> out{};
    for (std::size_t a = 0; a < 4; ++a) {
        out[a] = entries[a][0] * p.left + entries[a][1] * p.rope + entries[a][2] * p.right;
    }
    return out;
}

Decision threshold_decision(const TrinomialProbs& p, double threshold) {
    if (!(threshold > 1.0 / 3.0 && threshold <= 1.0)) {
        throw DomainError(kModule, "threshold must lie in (1/3, 1]");
    }
    Decision d;
    d.basis = p;
    d.rule = "threshold>" + format_double(threshold);
    double best = threshold;
    // Rope first so that it wins exact ties between qualifying regions.
    if (p.rope > best) {
        d.verdict = Verdict::Equivalent;
        best = p.rope;
    }
    if (p.left > best) {
        d.verdict = Verdict::BBetter;
        best = p.left;
    }
    if (p.right > best) {
        d.verdict = Verdict::ABetter;
    }
    return d;
}

Decision loss_decision(const TrinomialProbs& p, const LossMatrix& loss) {
    loss.validate();
    Decision d;
    d.basis = p;
    d.rule = "loss";
    const auto e = loss.expected(p);
    d.expected_loss = e;
    const double min = *std::min_element(e.begin(), e.end());
    for (std::size_t action : {kNoDecision, kDecideRope, kDecideLeft, kDecideRight}) {
        if (e[action] <= min + kLossTieTolerance) {
            d.verdict = verdict_of(action);
            break;
        }
    }
    return d;
}

DecisionRule DecisionRule::with_threshold(double t) {
    DecisionRule r;
    r.kind = Kind::Threshold;
    r.threshold = t;
    return r;
}

DecisionRule DecisionRule::with_loss(const LossMatrix& l) {
    DecisionRule r;
    r.kind = Kind::Loss;
    r.loss = l;
    return r;
}

Decision DecisionRule::apply(const TrinomialProbs& p) const {
    return kind == Kind::Threshold ? threshold_decision(p, threshold) : loss_decision(p, loss);
}

std::string DecisionRule::describe() const {
    return kind == Kind::Threshold ? "threshold>" + format_double(threshold) : std::string("loss");
}

DecisionTable decision_table(std::span<const ComparisonInput> inputs, const DecisionRule& rule, double alpha) {
    if (inputs.empty()) {
        throw DomainError(kModule, "decision table needs at least one comparison");
    }
    DecisionTable t;
    const bool have_p = std::all_of(inputs.begin(), inputs.end(), [](const auto& in) { return in.p_value; });
    if (have_p) {
        t.nhst_not_rejected.emplace();
        t.nhst_rejected.emplace();
    }
    for (const auto& in : inputs) {
        Decision d = rule.apply(in.probs);
        tally(t.overall, d.verdict);
        if (have_p) {
            tally(*in.p_value < alpha ? *t.nhst_rejected : *t.nhst_not_rejected, d.verdict);
        }
        t.labels.push_back(in.label);
        t.decisions.push_back(std::move(d));
    }
    return t;
}

Matrix barycentric_points(const TrinomialSamples& samples) {
    const double height = std::numbers::sqrt3 / 2.0;
    Matrix out(samples.count(), 2);
    for (std::size_t r = 0; r < samples.count(); ++r) {
        const auto theta = samples.samples.row(r);
        out(r, 0) = theta[2] + 0.5 * theta[1];
        out(r, 1) = height * theta[1];
    }
    return out;
}

Histogram density_data(std::span<const double> x, std::size_t bins) {
    if (bins == 0) {
        throw DomainError(kModule, "histogram needs at least one bin");
    }
    if (x.empty()) {
        throw DomainError(kModule, "histogram needs at least one value");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DomainError(kModule, "histogram input must be finite");
        }
    }
    auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
    double lo = *mn_it;
    double hi = *mx_it;
    if (lo == hi) {
        const double half = 1e-3 * std::max(1.0, std::fabs(lo));
        lo -= half;
        hi += half;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    Histogram h;
    h.count.assign(bins, 0);
    for (double v : x) {
        auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
        ++h.count[std::min(b, bins - 1)];
    }
    const double n = static_cast<double>(x.size());
    for (std::size_t b = 0; b < bins; ++b) {
        const double a = lo + width * static_cast<double>(b);
        h.lo.push_back(a);
        h.hi.push_back(b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1));
        h.density.push_back(static_cast<double>(h.count[b]) / (n * width));
    }
    return h;
}

void write_points_csv(std::ostream& out, const Matrix& points) {
    out << "x,y\n";
    for (std::size_t r = 0; r < points.rows(); ++r) {
        out << format_double(points(r, 0)) << ',' << format_double(points(r, 1)) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "lo,hi,count,density\n";
    for (std::size_t b = 0; b < h.count.size(); ++b) {
        out << format_double(h.lo[b]) << ',' << format_double(h.hi[b]) << ',' << h.count[b] << ','
            << format_double(h.density[b]) << '\n';
    }
}

} // namespace bayescmp

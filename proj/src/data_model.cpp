#include "bayescmp/data_model.hpp"

#include "bayescmp/error.hpp"
#include "bayescmp/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace bayescmp {

namespace {

constexpr const char* kModule = "data-model";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return value;
}

struct RawCell {
    std::size_t run;
    std::size_t fold;
    double score;
    std::size_t line;
};

} // namespace

ScoreTable::ScoreTable(std::size_t runs, std::size_t folds) : runs_(runs), folds_(folds) {
    if (runs == 0 || folds == 0) {
        throw ShapeError("score table needs at least one run and one fold");
    }
}

void ScoreTable::add(const std::string& dataset, const std::string& classifier, std::vector<double> scores) {
    if (dataset.empty() || classifier.empty()) {
        throw ShapeError("dataset and classifier ids must be non-empty");
    }
    if (scores.size() != runs_ * folds_) {
        throw ShapeError("(" + dataset + ", " + classifier + ") has " + std::to_string(scores.size()) +
                         " scores, expected " + std::to_string(runs_ * folds_));
    }
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw ShapeError("(" + dataset + ", " + classifier + ") has a score outside [0, 1]");
        }
    }
    auto key = std::make_pair(dataset, classifier);
    if (entries_.contains(key)) {
        throw ShapeError("duplicate entry (" + dataset + ", " + classifier + ")");
    }
    if (std::find(datasets_.begin(), datasets_.end(), dataset) == datasets_.end()) {
        datasets_.push_back(dataset);
    }
    if (std::find(classifiers_.begin(), classifiers_.end(), classifier) == classifiers_.end()) {
        classifiers_.push_back(classifier);
    }
    entries_.emplace(std::move(key), std::move(scores));
}

bool ScoreTable::contains(const std::string& dataset, const std::string& classifier) const {
    return entries_.contains({dataset, classifier});
}

std::span<const double> ScoreTable::scores(const std::string& dataset, const std::string& classifier) const {
    auto it = entries_.find({dataset, classifier});
    if (it == entries_.end()) {
        throw CoverageError("no scores for (" + dataset + ", " + classifier + ")");
    }
    return it->second;
}

DiffSeries DiffSeries::from_values(std::string dataset, std::vector<double> x, double rho) {
    if (x.size() < 2) {
        throw DomainError(kModule, "a difference series needs at least 2 values");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError(kModule, "rho must lie in [0, 1)");
    }
    for (double v : x) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw DomainError(kModule, "differences must lie in [-1, 1]");
        }
    }
    DiffSeries d;
    d.dataset = std::move(dataset);
    d.n = x.size();
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    const bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
    // Exact mean (and zero spread) for constant series.
    d.mean = constant ? x.front() : sum / static_cast<double>(d.n);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - d.mean) * (v - d.mean);
    }
    d.ss = ss;
    d.sd = std::sqrt(ss / static_cast<double>(d.n - 1));
    d.rho = rho;
    d.x = std::move(x);
    return d;
}

Rope Rope::symmetric(double half_width) {
    Rope r{-half_width, half_width};
    r.validate();
    return r;
}

void Rope::validate() const {
    if (!(lower <= 0.0 && 0.0 <= upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw DomainError(kModule, "rope must satisfy lower <= 0 <= upper");
    }
}

ScoreTable parse_scores(std::istream& input) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    // (dataset, classifier) in order of first appearance.
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<RawCell>> cells;
    bool percent = false;
    std::size_t max_run = 0;
    std::size_t max_fold = 0;

    while (std::getline(input, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        if (trim(view).empty()) {
            continue;
        }
        auto fields = split_commas(view);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() == 5 && fields[0] == "dataset" && fields[1] == "classifier" && fields[2] == "run" &&
                fields[3] == "fold" && fields[4] == "score") {
                continue;
            }
            throw ParseError(line_no, "expected header 'dataset,classifier,run,fold,score'");
        }
        if (fields.size() != 5) {
            throw ParseError(line_no, "expected 5 columns, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError(line_no, "empty dataset or classifier id");
        }
        auto run = parse_index(fields[2]);
        auto fold = parse_index(fields[3]);
        if (!run || !fold) {
            throw ParseError(line_no, "run and fold must be non-negative integers");
        }
        auto score = parse_double(fields[4]);
        if (!score || !std::isfinite(*score)) {
            throw ParseError(line_no, "non-numeric score '" + std::string(fields[4]) + "'");
        }
        if (*score < 0.0 || *score > 100.0) {
            throw ParseError(line_no, "score out of range [0, 100]");
        }
        if (*score > 1.0) {
            percent = true;
        }
        auto key = std::make_pair(std::string(fields[0]), std::string(fields[1]));
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        it->second.push_back({*run, *fold, *score, line_no});
        max_run = std::max(max_run, *run);
        max_fold = std::max(max_fold, *fold);
    }

    if (cells.empty()) {
        throw ParseError(0, "no rows");
    }

    const std::size_t runs = max_run + 1;
    const std::size_t folds = max_fold + 1;
    const double scale = percent ? 100.0 : 1.0;
    ScoreTable table(runs, folds);
    for (const auto& key : order) {
        const auto& raw = cells.at(key);
        std::vector<double> values(runs * folds, 0.0);
        std::vector<bool> seen(runs * folds, false);
        for (const auto& c : raw) {
            auto idx = c.run * folds + c.fold;
            if (seen[idx]) {
                throw ParseError(c.line, "duplicate cell run " + std::to_string(c.run) + ", fold " +
                                             std::to_string(c.fold) + " for (" + key.first + ", " + key.second +
                                             ")");
            }
            seen[idx] = true;
            values[idx] = c.score / scale;
        }
        if (raw.size() != runs * folds) {
            throw ShapeError("(" + key.first + ", " + key.second + ") has " + std::to_string(raw.size()) +
                             " cells, expected " + std::to_string(runs) + " runs x " + std::to_string(folds) +
                             " folds");
        }
        table.add(key.first, key.second, std::move(values));
    }
    return table;
}

ScoreTable parse_scores(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_scores(in);
}

ScoreTable read_scores_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(kModule, "cannot open '" + path + "'");
    }
    return parse_scores(in);
}

void write_scores(std::ostream& out, const ScoreTable& table) {
    out << "dataset,classifier,run,fold,score\n";
    for (const auto& d : table.datasets()) {
        for (const auto& c : table.classifiers()) {
            if (!table.contains(d, c)) {
                continue;
            }
            auto s = table.scores(d, c);
            for (std::size_t r = 0; r < table.runs(); ++r) {
                for (std::size_t f = 0; f < table.folds(); ++f) {
                    out << d << ',' << c << ',' << r << ',' << f << ','
                        << format_double(s[r * table.folds() + f]) << '\n';
                }
            }
        }
    }
}

std::vector<DiffSeries> paired_differences(const ScoreTable& table,
                                           const std::string& a,
                                           const std::string& b,
                                           std::optional<double> rho) {
    const double r = rho.value_or(1.0 / static_cast<double>(table.folds()));
    std::vector<std::string> missing;
    for (const auto& d : table.datasets()) {
        if (!table.contains(d, a) || !table.contains(d, b)) {
            missing.push_back(d);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& d : missing) {
            list += (list.empty() ? "" : ", ") + d;
        }
        throw CoverageError("classifiers '" + a + "' and '" + b + "' are not both present for: " + list);
    }
    std::vector<DiffSeries> out;
    out.reserve(table.datasets().size());
    for (const auto& d : table.datasets()) {
        auto sa = table.scores(d, a);
        auto sb = table.scores(d, b);
        std::vector<double> x(sa.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = sa[i] - sb[i];
        }
        out.push_back(DiffSeries::from_values(d, std::move(x), r));
    }
    return out;
}

MeanDiffVector mean_differences(std::span<const DiffSeries> diffs) {
    if (diffs.empty()) {
        throw DomainError(kModule, "mean_differences needs at least one series");
    }
    MeanDiffVector out;
    out.z.reserve(diffs.size());
    out.datasets.reserve(diffs.size());
    for (const auto& d : diffs) {
        out.z.push_back(d.mean);
        out.datasets.push_back(d.dataset);
    }
    return out;
}

} // namespace bayescmp

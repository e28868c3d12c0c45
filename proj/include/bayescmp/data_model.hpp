#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bayescmp {

/// Cross-validation scores per (dataset, classifier), each an m x k matrix
/// (runs x folds) stored run-major. Scores are fractions in [0, 1].
///
/// Folds are aligned positionally: run r / fold f of classifier A is paired
/// with run r / fold f of classifier B. Callers must make sure both
/// classifiers saw the same training and test partitions.
class ScoreTable {
public:
    ScoreTable(std::size_t runs, std::size_t folds);

    std::size_t runs() const noexcept { return runs_; }
    std::size_t folds() const noexcept { return folds_; }

    /// Inserts a full matrix (runs * folds values, run-major).
    void add(const std::string& dataset, const std::string& classifier, std::vector<double> scores);

    bool contains(const std::string& dataset, const std::string& classifier) const;
    std::span<const double> scores(const std::string& dataset, const std::string& classifier) const;

    /// Dataset and classifier ids in first-insertion order.
    const std::vector<std::string>& datasets() const noexcept { return datasets_; }
    const std::vector<std::string>& classifiers() const noexcept { return classifiers_; }

    std::size_t size() const noexcept { return entries_.size(); }

    friend bool operator==(const ScoreTable&, const ScoreTable&) = default;

private:
    std::size_t runs_;
    std::size_t folds_;
    std::vector<std::string> datasets_;
    std::vector<std::string> classifiers_;
    std::map<std::pair<std::string, std::string>, std::vector<double>> entries_;
};

/// Summary statistics of a difference series; enough for the t-tests.
struct DiffSummary {
    double mean = 0.0;
    double sd = 0.0; ///< sample standard deviation, divisor n - 1
    std::size_t n = 0;
    double rho = 0.0;
};

/// Paired score differences (A - B) on one dataset.
struct DiffSeries {
    std::string dataset;
    std::vector<double> x;
    double rho = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double ss = 0.0; ///< sum of squared deviations from the mean
    std::size_t n = 0;

    /// Builds the series and its statistics. Requires x.size() >= 2,
    /// 0 <= rho < 1 and every x in [-1, 1].
    static DiffSeries from_values(std::string dataset, std::vector<double> x, double rho);

    DiffSummary summary() const { return {mean, sd, n, rho}; }
};

struct MeanDiffVector {
    std::vector<double> z;
    std::vector<std::string> datasets;

    std::size_t size() const noexcept { return z.size(); }
};

/// Region of practical equivalence, fraction units; lower <= 0 <= upper.
struct Rope {
    double lower = -0.01;
    double upper = 0.01;

    static Rope symmetric(double half_width);
    void validate() const;
    bool symmetric_about_zero() const { return lower == -upper; }
};

/// Parses the long CSV schema `dataset,classifier,run,fold,score`.
/// If any score exceeds 1.0 the whole file is treated as percentages.
ScoreTable parse_scores(std::istream& input);
ScoreTable parse_scores(std::string_view text);
ScoreTable read_scores_file(const std::string& path);

/// Writes the table in the same schema, with shortest round-trip decimals.
void write_scores(std::ostream& out, const ScoreTable& table);

/// One series per dataset, x = scores(a) - scores(b) run-major. When `rho`
/// is not given it defaults to 1 / folds.
std::vector<DiffSeries> paired_differences(const ScoreTable& table,
                                           const std::string& a,
                                           const std::string& b,
                                           std::optional<double> rho = std::nullopt);

MeanDiffVector mean_differences(std::span<const DiffSeries> diffs);

} // namespace bayescmp

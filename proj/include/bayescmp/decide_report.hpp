#pragma once

#include "bayescmp/matrix.hpp"
#include "bayescmp/trinomial.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bayescmp {

/// A is the first classifier of a pair, B the second; differences are A - B.
enum class Verdict { ABetter, BBetter, Equivalent, NoDecision };

std::string_view to_string(Verdict v);

/// Rows are actions (decide-left, decide-rope, decide-right, no-decision),
/// columns the true states (left, rope, right).
struct LossMatrix {
    std::array<std::array<double, 3>, 4> entries{};

    /// 0 on the diagonal, 20 off it, 1 for every state when not deciding.
    static LossMatrix standard();
    /// Reads {"loss": [[...],[...],[...],[...]]} or a bare 4x3 array.
    static LossMatrix from_json(std::string_view text);
    static LossMatrix from_file(const std::string& path);
    void validate() const;

    std::array<double, 4> expected(const TrinomialProbs& p) const;
};

struct Decision {
    Verdict verdict = Verdict::NoDecision;
    TrinomialProbs basis;
    std::string rule; ///< e.g. "threshold>0.95" or "loss"
    std::optional<std::array<double, 4>> expected_loss;
};

inline constexpr double kDefaultThreshold = 0.95;

/// Verdict for the region whose probability is strictly above `threshold`,
/// else no decision. threshold must lie in (1/3, 1].
Decision threshold_decision(const TrinomialProbs& p, double threshold = kDefaultThreshold);

/// Action minimizing L p. Losses within 1e-9 of the minimum tie; ties go to
/// no-decision, then rope, then left before right.
Decision loss_decision(const TrinomialProbs& p, const LossMatrix& loss = LossMatrix::standard());

struct DecisionRule {
    enum class Kind { Threshold, Loss } kind = Kind::Threshold;
    double threshold = kDefaultThreshold;
    LossMatrix loss = LossMatrix::standard();

    static DecisionRule with_threshold(double t);
    static DecisionRule with_loss(const LossMatrix& l);
    Decision apply(const TrinomialProbs& p) const;
    std::string describe() const;
};

struct ComparisonInput {
    std::string label;
    TrinomialProbs probs;
    std::optional<double> p_value;
};

struct VerdictCounts {
    std::size_t total = 0;
    std::size_t equivalent = 0;
    std::size_t different = 0; ///< A-better or B-better
    std::size_t no_decision = 0;
};

struct DecisionTable {
    std::vector<std::string> labels;
    std::vector<Decision> decisions;
    VerdictCounts overall;
    /// Present when every input carries a p-value; split by p < alpha.
    std::optional<VerdictCounts> nhst_not_rejected;
    std::optional<VerdictCounts> nhst_rejected;
};

inline constexpr double kDefaultAlpha = 0.05;

DecisionTable decision_table(std::span<const ComparisonInput> inputs,
                             const DecisionRule& rule,
                             double alpha = kDefaultAlpha);

/// Simplex points: left at (0, 0), right at (1, 0), rope at (0.5, sqrt(3)/2).
/// Returns count x 2.
Matrix barycentric_points(const TrinomialSamples& samples);

struct Histogram {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::size_t> count;
    std::vector<double> density; ///< count / (n * width)
};

/// Equal-width bins over [min, max]; the maximum falls in the last bin. A
/// constant input gets a small range centred on its value.
Histogram density_data(std::span<const double> x, std::size_t bins);

void write_points_csv(std::ostream& out, const Matrix& points);
void write_histogram_csv(std::ostream& out, const Histogram& h);

} // namespace bayescmp

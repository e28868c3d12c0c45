#include "bayescmp/data_model.hpp"
#include "bayescmp/error.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace bayescmp;

namespace {

std::string table_text(const std::vector<std::string>& classifiers, std::size_t runs, std::size_t folds,
                       double first, double step) {
    std::ostringstream s;
    s << "dataset,classifier,run,fold,score\n";
    double v = first;
    for (const auto& c : classifiers) {
        for (std::size_t r = 0; r < runs; ++r) {
            for (std::size_t f = 0; f < folds; ++f) {
                s << "anneal," << c << ',' << r << ',' << f << ',' << v << '\n';
                v += step;
            }
        }
    }
    return s.str();
}

} // namespace

TEST(ParseScores, PercentFileIsScaledToFractions) {
    auto t = parse_scores(table_text({"nbc", "aode"}, 10, 10, 94.44, 0.01));
    EXPECT_EQ(t.runs(), 10u);
    EXPECT_EQ(t.folds(), 10u);
    EXPECT_DOUBLE_EQ(t.scores("anneal", "nbc")[0], 0.9444);
}

TEST(ParseScores, FractionFileIsKept) {
    auto t = parse_scores(table_text({"nbc"}, 2, 3, 0.5, 0.01));
    EXPECT_DOUBLE_EQ(t.scores("anneal", "nbc")[0], 0.5);
    EXPECT_EQ(t.scores("anneal", "nbc").size(), 6u);
}

TEST(ParseScores, OnePercentValueScalesTheWholeFile) {
    std::string text = "dataset,classifier,run,fold,score\nd,a,0,0,0.5\nd,a,0,1,50\n";
    auto t = parse_scores(text);
    EXPECT_DOUBLE_EQ(t.scores("d", "a")[0], 0.005);
    EXPECT_DOUBLE_EQ(t.scores("d", "a")[1], 0.5);
}

TEST(ParseScores, EmptyInputHasNoRows) {
    try {
        parse_scores(std::string_view{"dataset,classifier,run,fold,score\n"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("no rows"), std::string::npos);
    }
    EXPECT_THROW(parse_scores(std::string_view{""}), ParseError);
}

TEST(ParseScores, MissingCellIsAShapeError) {
    auto text = table_text({"nbc", "aode"}, 10, 10, 0.9, 0.0001);
    // Drop the last row, one cell of (anneal, aode).
    text.pop_back();
    text.erase(text.rfind('\n') + 1);
    try {
        parse_scores(text);
        FAIL();
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("anneal"), std::string::npos);
        EXPECT_NE(msg.find("aode"), std::string::npos);
        EXPECT_NE(msg.find("99"), std::string::npos);
    }
}

TEST(ParseScores, MalformedRowsReportTheLine) {
    try {
        parse_scores(std::string_view{"dataset,classifier,run,fold,score\nd,a,0,0,0.5\nd,a,0,1\n"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.module(), "data-model");
    }
    try {
        parse_scores(std::string_view{"dataset,classifier,run,fold,score\nd,a,0,0,abc\n"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_scores(std::string_view{"dataset,classifier,run,fold,score\nd,a,0,0,101\n"}), ParseError);
    EXPECT_THROW(parse_scores(std::string_view{"dataset,classifier,run,fold,score\nd,a,-1,0,0.1\n"}), ParseError);
    EXPECT_THROW(parse_scores(std::string_view{"d,a,0,0,0.1\n"}), ParseError);
}

TEST(ParseScores, DuplicateCellIsRejected) {
    EXPECT_THROW(parse_scores(std::string_view{"dataset,classifier,run,fold,score\nd,a,0,0,0.5\nd,a,0,0,0.6\n"}),
                 ParseError);
}

TEST(ParseScores, CrlfBomAndBlankLines) {
    auto t = parse_scores(std::string_view{"\xEF\xBB\xBF"
                                           "dataset,classifier,run,fold,score\r\n\r\nd,a,0,0,0.25\r\nd,a,0,1,0.75\r\n"});
    EXPECT_DOUBLE_EQ(t.scores("d", "a")[1], 0.75);
}

TEST(ParseScores, RoundTripIsBitExact) {
    Rng rng(RngStream{11, 0});
    ScoreTable t(3, 4);
    for (const char* d : {"x", "y"}) {
        for (const char* c : {"p", "q", "r"}) {
            std::vector<double> v(12);
            for (auto& s : v) {
                s = rng.uniform();
            }
            t.add(d, c, v);
        }
    }
    std::ostringstream out;
    write_scores(out, t);
    EXPECT_EQ(parse_scores(out.str()), t);
}

TEST(ScoreTableTest, RejectsInvalidEntries) {
    ScoreTable t(1, 2);
    EXPECT_THROW(t.add("d", "a", {0.1}), ShapeError);
    EXPECT_THROW(t.add("d", "a", {0.1, 1.5}), Error);
    EXPECT_THROW(t.add("", "a", {0.1, 0.2}), Error);
    t.add("d", "a", {0.1, 0.2});
    EXPECT_THROW(t.add("d", "a", {0.1, 0.2}), Error);
    EXPECT_THROW(t.scores("d", "b"), CoverageError);
}

TEST(PairedDifferences, AnnealSummary) {
    auto t = read_scores_file(fixtures::data_path("anneal_scores.csv"));
    auto d = paired_differences(t, "nbc", "aode");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].n, 100u);
    EXPECT_DOUBLE_EQ(d[0].rho, 0.1);
    EXPECT_NEAR(d[0].mean, -0.0194, 1e-5);
    EXPECT_NEAR(d[0].sd, 0.01583, 1e-5);
}

TEST(PairedDifferences, IdentityAndConstantShift) {
    ScoreTable t(2, 5);
    std::vector<double> b{0.5, 0.6, 0.7, 0.8, 0.55, 0.65, 0.75, 0.85, 0.52, 0.62};
    std::vector<double> a = b;
    for (auto& v : a) {
        v += 0.02;
    }
    t.add("d", "a", a);
    t.add("d", "b", b);
    auto same = paired_differences(t, "b", "b");
    EXPECT_EQ(same[0].mean, 0.0);
    EXPECT_EQ(same[0].sd, 0.0);
    EXPECT_TRUE(std::all_of(same[0].x.begin(), same[0].x.end(), [](double v) { return v == 0.0; }));
    auto shifted = paired_differences(t, "a", "b");
    EXPECT_NEAR(shifted[0].mean, 0.02, 1e-15);
    EXPECT_LT(shifted[0].sd, 1e-12);
    EXPECT_DOUBLE_EQ(shifted[0].rho, 0.2);
}

TEST(PairedDifferences, SwappingNegates) {
    auto t = read_scores_file(fixtures::data_path("demo_scores.csv"));
    auto ab = paired_differences(t, "nbc", "hnb");
    auto ba = paired_differences(t, "hnb", "nbc");
    ASSERT_EQ(ab.size(), ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
        for (std::size_t k = 0; k < ab[i].x.size(); ++k) {
            EXPECT_EQ(ab[i].x[k], -ba[i].x[k]);
        }
    }
}

TEST(PairedDifferences, MissingClassifierListsDatasets) {
    ScoreTable t(1, 2);
    t.add("d1", "a", {0.1, 0.2});
    t.add("d1", "b", {0.1, 0.2});
    t.add("d2", "a", {0.1, 0.2});
    try {
        paired_differences(t, "a", "b");
        FAIL();
    } catch (const CoverageError& e) {
        EXPECT_NE(std::string(e.what()).find("d2"), std::string::npos);
    }
}

TEST(PairedDifferences, RhoOverride) {
    auto t = read_scores_file(fixtures::data_path("anneal_scores.csv"));
    EXPECT_DOUBLE_EQ(paired_differences(t, "nbc", "aode", 1.0 / 9.0)[0].rho, 1.0 / 9.0);
}

TEST(DiffSeriesTest, ValidatesInputs) {
    EXPECT_THROW(DiffSeries::from_values("d", {0.1}, 0.1), Error);
    EXPECT_THROW(DiffSeries::from_values("d", {0.1, 0.2}, 1.0), Error);
    EXPECT_THROW(DiffSeries::from_values("d", {0.1, 0.2}, -0.1), Error);
    EXPECT_THROW(DiffSeries::from_values("d", {0.1, 1.2}, 0.1), Error);
    auto d = DiffSeries::from_values("d", {0.1, 0.2, 0.6}, 0.0);
    EXPECT_NEAR(d.mean, 0.3, 1e-15);
    EXPECT_NEAR(d.ss, 0.14, 1e-15);
    EXPECT_NEAR(d.sd, std::sqrt(0.07), 1e-15);
}

TEST(MeanDifferences, PreservesOrderAndPermutes) {
    auto t = read_scores_file(fixtures::data_path("demo_scores.csv"));
    auto diffs = paired_differences(t, "nbc", "aode");
    auto z = mean_differences(diffs);
    ASSERT_EQ(z.size(), diffs.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        EXPECT_EQ(z.z[i], diffs[i].mean);
        EXPECT_EQ(z.datasets[i], diffs[i].dataset);
    }
    std::vector<DiffSeries> rev(diffs.rbegin(), diffs.rend());
    auto zr = mean_differences(rev);
    for (std::size_t i = 0; i < z.size(); ++i) {
        EXPECT_EQ(zr.z[i], z.z[z.size() - 1 - i]);
    }
    auto one = mean_differences(std::span(diffs).first(1));
    EXPECT_EQ(one.size(), 1u);
    auto zeros = mean_differences(paired_differences(t, "j48", "j48"));
    EXPECT_TRUE(std::all_of(zeros.z.begin(), zeros.z.end(), [](double v) { return v == 0.0; }));
}

TEST(MeanDifferences, AnnealMean) {
    auto t = read_scores_file(fixtures::data_path("anneal_scores.csv"));
    auto z = mean_differences(paired_differences(t, "nbc", "aode"));
    EXPECT_NEAR(z.z[0], -0.0194, 1e-5);
}

TEST(RopeTest, Validation) {
    EXPECT_NO_THROW(Rope{}.validate());
    EXPECT_THROW((Rope{0.01, 0.02}.validate()), Error);
    EXPECT_TRUE(Rope::symmetric(0.02).symmetric_about_zero());
}

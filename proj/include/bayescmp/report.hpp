#pragma once

#include "bayescmp/trinomial.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>

namespace bayescmp {

/// One comparison in the JSON report. Probabilities are keyed by outcome:
/// a_better is the right-hand region, b_better the left-hand one.
struct ReportRow {
    std::string a;
    std::string b;
    std::string method;
    std::optional<std::string> dataset;
    std::optional<TrinomialProbs> probs;
    std::optional<TrinomialProbs> mc_stderr;
    std::string decision;
    std::string rule;
    std::optional<SeedRecord> seed;
    nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const TrinomialProbs& p);
nlohmann::json to_json(const ReportRow& row);

/// {"rows": [...]} plus every member of `meta`.
nlohmann::json report_document(std::span<const ReportRow> rows, const nlohmann::json& meta);

} // namespace bayescmp

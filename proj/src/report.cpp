#include "bayescmp/report.hpp"

namespace bayescmp {

nlohmann::json to_json(const TrinomialProbs& p) {
    return {{"a_better", p.a_better()}, {"rope", p.rope}, {"b_better", p.b_better()}};
}

nlohmann::json to_json(const ReportRow& row) {
    nlohmann::json j;
    j["pair"] = {row.a, row.b};
    j["method"] = row.method;
    if (row.dataset) {
        j["dataset"] = *row.dataset;
    }
    j["probs"] = row.probs ? to_json(*row.probs) : nlohmann::json(nullptr);
    j["mc_stderr"] = row.mc_stderr ? to_json(*row.mc_stderr) : nlohmann::json(nullptr);
    j["decision"] = row.decision;
    j["rule"] = row.rule;
    if (row.seed) {
        j["seed"] = {{"seed", row.seed->seed}, {"stream", row.seed->stream}, {"chunk_size", row.seed->chunk_size}};
    } else {
        j["seed"] = nullptr;
    }
    for (const auto& [key, value] : row.extra.items()) {
        j[key] = value;
    }
    return j;
}

nlohmann::json report_document(std::span<const ReportRow> rows, const nlohmann::json& meta) {
    nlohmann::json doc = meta.is_object() ? meta : nlohmann::json::object();
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        doc["rows"].push_back(to_json(r));
    }
    return doc;
}

} // namespace bayescmp

#pragma once

#include <json.hpp>

#include "modref/verifiers.hpp"

namespace modref {

inline constexpr const char* kToolName = "modref";
inline constexpr const char* kToolVersion = "0.1.0";

// Reports serialize to JSON with fixed key order and big integers as decimal
// strings, so identical inputs produce byte-identical documents. Wall-clock
// timings are attached only on request since they vary between runs.
inline nlohmann::ordered_json report_to_json(const VerificationReport& r, bool with_timings) {
    nlohmann::ordered_json j;
    j["statement"] = r.statement;
    j["instance"] = r.instance;
    j["verdict"] = verdict_name(r.verdict);
    if (r.cap > 0) j["cap"] = r.cap;
    j["groups"] = nlohmann::ordered_json::array();
    for (const auto& g : r.groups) {
        nlohmann::ordered_json gj;
        gj["name"] = g.name;
        gj["invariant_factors"] = g.invariant_factors;
        j["groups"].push_back(gj);
    }
    j["details"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) j["details"][k] = v;
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : r.witnesses) {
        nlohmann::ordered_json wj;
        wj["context"] = w.context;
        wj["vector"] = w.vec;
        wj["map_rows"] = w.map_rows;
        wj["map_cols"] = w.map_cols;
        wj["map"] = w.map_flat;
        wj["target_orders"] = w.target_orders;
        wj["lattice_rows"] = w.lattice_rows;
        wj["lattice_cols"] = w.lattice_cols;
        wj["lattice"] = w.lattice_flat;
        j["witnesses"].push_back(wj);
    }
    if (with_timings) j["millis"] = r.millis;
    return j;
}

inline WitnessData witness_from_json(const nlohmann::json& wj) {
    WitnessData w;
    w.context = wj.at("context").get<std::string>();
    w.vec = wj.at("vector").get<std::vector<std::string>>();
    w.map_rows = wj.at("map_rows").get<int>();
    w.map_cols = wj.at("map_cols").get<int>();
    w.map_flat = wj.at("map").get<std::vector<std::string>>();
    w.target_orders = wj.at("target_orders").get<std::vector<std::string>>();
    w.lattice_rows = wj.at("lattice_rows").get<int>();
    w.lattice_cols = wj.at("lattice_cols").get<int>();
    w.lattice_flat = wj.at("lattice").get<std::vector<std::string>>();
    return w;
}

inline nlohmann::ordered_json report_document(const std::vector<VerificationReport>& reports, int cap,
                                              bool with_timings) {
    nlohmann::ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["cap"] = cap;
    doc["jobs"] = nlohmann::ordered_json::array();
    int holds = 0, fails = 0, inconclusive = 0;
    for (const auto& r : reports) {
        doc["jobs"].push_back(report_to_json(r, with_timings));
        switch (r.verdict) {
            case Verdict::holds: ++holds; break;
            case Verdict::fails: ++fails; break;
            default: ++inconclusive; break;
        }
    }
    doc["summary"] = {{"holds", holds}, {"fails", fails}, {"inconclusive", inconclusive}};
    return doc;
}

inline nlohmann::ordered_json search_document(const SearchSummary& sum, bool with_timings) {
    nlohmann::ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["ring_candidates"] = sum.ring_candidates;
    doc["rings_valid"] = sum.rings_valid;
    doc["pairs_checked"] = sum.pairs_checked;
    doc["covered_by_sufficiency"] = sum.covered;
    doc["exact"] = sum.exact;
    doc["failed"] = sum.failed;
    doc["failures"] = nlohmann::ordered_json::array();
    for (const auto& r : sum.failures) doc["failures"].push_back(report_to_json(r, with_timings));
    return doc;
}

}  // namespace modref

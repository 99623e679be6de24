// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "bcc/contract.hpp"

namespace bcc {

// JSON export of query results. Temperatures are rendered as decimal
// strings with two fraction digits; raw centi-degree integers ride along
// under *_centi keys.

inline nlohmann::json item_to_json(const Item& item) {
    return {{"id", item.id},
            {"manufacturer", item.manufacturer},
            {"safe_min", centi_to_string(item.safe_min)},
            {"safe_max", centi_to_string(item.safe_max)},
            {"safe_min_centi", item.safe_min},
            {"safe_max_centi", item.safe_max},
            {"registered_at", item.registered_at}};
}

inline nlohmann::json report_to_json(const ItemReport& report) {
    nlohmann::json hops = nlohmann::json::array();
    for (const auto& hop : report.hops) {
        nlohmann::json readings = nlohmann::json::array();
        for (const auto& sample : hop.readings)
            readings.push_back({{"ts", sample.ts},
                                {"temp", centi_to_string(sample.temp)},
                                {"temp_centi", sample.temp}});
        nlohmann::json gaps = nlohmann::json::array();
        for (const auto& gap : hop.gaps) gaps.push_back({{"from", gap.from}, {"to", gap.to}});
        nlohmann::json h = {{"location", hop.interval.location},
                            {"arrived_at", hop.interval.arrived_at},
                            {"readings", readings},
                            {"gaps", gaps}};
        if (hop.interval.departed_at) h["departed_at"] = *hop.interval.departed_at;
        else h["departed_at"] = nullptr;
        hops.push_back(std::move(h));
    }
    nlohmann::json excursions = nlohmann::json::array();
    for (const auto& e : report.excursions)
        excursions.push_back({{"hop", e.hop},
                              {"location", e.location},
                              {"ts", e.ts},
                              {"temp", centi_to_string(e.temp)},
                              {"temp_centi", e.temp}});
    return {{"item", item_to_json(report.item)},
            {"verdict", verdict_name(report.verdict)},
            {"hops", hops},
            {"excursions", excursions},
            {"as_of", report.as_of},
            {"gap_threshold", report.gap_threshold}};
}

inline nlohmann::json state_to_json(const ContractState& state) {
    nlohmann::json admins = nlohmann::json::array();
    for (const auto& admin : state.admins) admins.push_back(admin.hex());
    nlohmann::json locations = nlohmann::json::array();
    for (const auto& [id, loc] : state.locations) {
        nlohmann::json entry = {{"id", id},
                                {"kind", location_kind_name(loc.kind)},
                                {"active", loc.active},
                                {"readings", 0}};
        auto series = state.temps.find(id);
        if (series != state.temps.end()) entry["readings"] = series->second.size();
        for (const auto& [key, bound] : state.sensor_bindings)
            if (bound == id) entry["sensor"] = key.hex();
        locations.push_back(std::move(entry));
    }
    nlohmann::json items = nlohmann::json::array();
    for (const auto& [id, item] : state.items) {
        nlohmann::json entry = item_to_json(item);
        auto intervals = state.custody.find(id);
        if (intervals != state.custody.end() && !intervals->second.empty()) {
            const auto& last = intervals->second.back();
            entry["current_location"] = last.open() ? nlohmann::json(last.location)
                                                    : nlohmann::json(nullptr);
            entry["hops"] = intervals->second.size();
        }
        items.push_back(std::move(entry));
    }
    return {{"admins", admins},
            {"locations", locations},
            {"items", items},
            {"state_root", state_root(state).hex()}};
}

}  // namespace bcc

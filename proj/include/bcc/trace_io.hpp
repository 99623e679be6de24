// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcc/result.hpp"
#include "bcc/tx.hpp"

namespace bcc {

// Sensor feed interchange: JSON-lines, one reading per line with
// location, ts and temp_centi fields.

inline void write_trace_jsonl(std::ostream& out, const std::vector<TemperatureReading>& trace) {
    for (const auto& r : trace) {
        nlohmann::json line = {{"location", r.location}, {"ts", r.ts}, {"temp_centi", r.temp}};
        out << line.dump() << '\n';
    }
}

inline Result<std::vector<TemperatureReading>> read_trace_jsonl(std::istream& in) {
    std::vector<TemperatureReading> trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("location") || !parsed.contains("ts") ||
            !parsed.contains("temp_centi"))
            return Error(Err::MalformedRecord, "line " + std::to_string(line_no));
        TemperatureReading r;
        r.location = parsed["location"].get<std::string>();
        r.ts = parsed["ts"].get<std::uint64_t>();
        r.temp = parsed["temp_centi"].get<std::int32_t>();
        trace.push_back(std::move(r));
    }
    return trace;
}

}  // namespace bcc

// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "bcc/contract.hpp"
#include "helpers.hpp"
#include "violation_oracle.hpp"

using namespace bcc;
using bcc::test::oracle_violations;
using bcc::test::random_violation_scenario;
using bcc::test::same_excursions;
using bcc::test::same_gaps;
using bcc::test::test_key;
using bcc::test::TestWorld;

TEST_CASE("item history verdicts", "[queries]") {
    TestWorld w;
    ContractState state =
        register_item(w.state, w.admin.id(), Item{"LOT-1", "MFG-1", 200, 800, 1000}).take();
    state = record_temperature(state, w.admin.id(), "MFG-1", 1100, 500).value().state;
    state = record_temperature(state, w.admin.id(), "MFG-1", 1600, 510).value().state;
    state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2100).take();
    state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 2200, 450).value().state;
    state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 2700, 470).value().state;

    SECTION("all readings in range, no gaps: SAFE") {
        ItemReport report = query_item_history(state, "LOT-1").take();
        REQUIRE(report.verdict == Verdict::SAFE);
        REQUIRE(report.hops.size() == 2);
        REQUIRE(report.excursions.empty());
    }
    SECTION("one hot reading during custody: COMPROMISED, excursion listed") {
        ContractState hot =
            record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3000, 900).value().state;
        ItemReport report = query_item_history(hot, "LOT-1").take();
        REQUIRE(report.verdict == Verdict::COMPROMISED);
        REQUIRE(report.excursions.size() == 1);
        REQUIRE(report.excursions[0].ts == 3000);
        REQUIRE(report.excursions[0].location == "FRIDGE-1");
        REQUIRE(report.excursions[0].temp == 900);
    }
    SECTION("a leg with zero readings: UNKNOWN") {
        ContractState moved = add_location(state, w.admin.id(), "TRUCK-1",
                                           LocationKind::RefrigeratedTruck, std::nullopt)
                                  .take();
        moved = record_departure(moved, w.admin.id(), "LOT-1", "FRIDGE-1", 4000).take();
        moved = record_arrival(moved, w.admin.id(), "LOT-1", "TRUCK-1", 4100).take();
        moved = record_departure(moved, w.admin.id(), "LOT-1", "TRUCK-1", 9000).take();
        moved = record_arrival(moved, w.admin.id(), "LOT-1", "FRIDGE-1", 9100).take();
        moved =
            record_temperature(moved, w.fridge_sensor.id(), "FRIDGE-1", 9200, 500).value().state;
        ItemReport report = query_item_history(moved, "LOT-1").take();
        REQUIRE(report.verdict == Verdict::UNKNOWN);
    }
    SECTION("unknown item") {
        REQUIRE(query_item_history(state, "NOPE").code() == Err::UnknownItem);
    }
}

TEST_CASE("membership and gap boundary conventions", "[queries]") {
    TestWorld w;
    ContractState state =
        register_item(w.state, w.admin.id(), Item{"LOT-1", "MFG-1", 200, 800, 1000}).take();
    state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 3000).take();
    state = record_departure(state, w.admin.id(), "LOT-1", "FRIDGE-1", 4000).take();

    // Readings at the interval edges: arrival inclusive, departure exclusive.
    state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3000, 900).value().state;
    state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3500, 500).value().state;
    state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 4000, 1500).value().state;
    ItemReport report = query_item_history(state, "LOT-1", 600).take();
    REQUIRE(report.hops[1].readings.size() == 2);  // 3000 and 3500; 4000 excluded
    REQUIRE(report.excursions.size() == 1);        // only the 900 at arrival
    REQUIRE(report.excursions[0].ts == 3000);

    // A reading exactly at safe_max is not an excursion.
    ContractState at_max =
        record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 4100, 800).value().state;
    REQUIRE(query_item_history(at_max, "LOT-1").take().excursions.size() == 1);

    // Spacing exactly at the threshold is not a gap; one second more is.
    REQUIRE(report.hops[1].gaps.empty());  // 3000->3500->4000 within 600 s
    ItemReport tight = query_item_history(state, "LOT-1", 499).take();
    REQUIRE_FALSE(tight.hops[1].gaps.empty());
}

TEST_CASE("no readings anywhere: one gap per closed interval", "[queries]") {
    TestWorld w;
    ContractState state =
        register_item(w.state, w.admin.id(), Item{"LOT-1", "MFG-1", 200, 800, 1000}).take();
    state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2100).take();
    state = record_departure(state, w.admin.id(), "LOT-1", "FRIDGE-1", 3200).take();
    auto violations = detect_violations(state, "LOT-1", 600).take();
    REQUIRE(violations.excursions.empty());
    REQUIRE(violations.gaps.size() == 2);
    REQUIRE(violations.gaps[0] == MonitoringGap{1000, 2000});
    REQUIRE(violations.gaps[1] == MonitoringGap{2100, 3200});
}

TEST_CASE("detect_violations equals the brute-force oracle", "[queries][oracle]") {
    Rng rng(20260809);
    for (int scenario = 0; scenario < 100; ++scenario) {
        std::uint64_t max_ts = 0;
        ContractState state = random_violation_scenario(rng, max_ts);
        std::uint64_t threshold = rng.uniform_u64(50, 1200);
        for (const auto& [item_id, item] : state.items) {
            auto got = detect_violations(state, item_id, threshold, max_ts).take();
            auto want = oracle_violations(state, item_id, threshold, max_ts);
            REQUIRE(same_excursions(got.excursions, want.excursions));
            REQUIRE(same_gaps(got.gaps, want.gaps));
            auto report = query_item_history(state, item_id, threshold, max_ts).take();
            REQUIRE(report.verdict == want.verdict);
        }
    }
}

TEST_CASE("location items match a brute-force scan", "[queries][oracle]") {
    Rng rng(77);
    std::uint64_t max_ts = 0;
    ContractState state = random_violation_scenario(rng, max_ts);
    for (int trial = 0; trial < 200; ++trial) {
        LocationId loc = "L" + std::to_string(rng.uniform_u64(0, 5));
        std::uint64_t at = rng.uniform_u64(0, max_ts + 100);
        auto got = query_location_items(state, loc, at).take();
        std::vector<ItemId> want;
        for (const auto& [item_id, intervals] : state.custody)
            for (const auto& iv : intervals)
                if (iv.location == loc && iv.arrived_at <= at &&
                    (!iv.departed_at || at < *iv.departed_at)) {
                    want.push_back(item_id);
                    break;
                }
        REQUIRE(got == want);
    }
    REQUIRE(query_location_items(state, "NOWHERE", 0).code() == Err::UnknownLocation);
    REQUIRE(query_location_items(state, "L0", 0).take().empty());
}

TEST_CASE("location temps match a linear scan over 10k readings", "[queries][oracle]") {
    ContractState state;
    state.admins.insert(test_key(0).id());
    state.locations.emplace("BIG", Location{"BIG", LocationKind::ColdRoom, true});
    Rng rng(31337);
    std::uint64_t ts = 0;
    for (int i = 0; i < 10000; ++i) {
        ts += rng.uniform_u64(1, 50);
        state.temps["BIG"].push_back(
            TempSample{ts, static_cast<CentiCelsius>(rng.uniform_i64(-2000, 2000))});
    }
    for (int trial = 0; trial < 50; ++trial) {
        std::uint64_t a = rng.uniform_u64(0, ts);
        std::uint64_t b = a + rng.uniform_u64(0, ts / 2);
        auto got = query_location_temps(state, "BIG", a, b).take();
        std::vector<TempSample> want;
        for (const auto& s : state.temps.at("BIG"))
            if (s.ts >= a && s.ts <= b) want.push_back(s);
        REQUIRE(got == want);
    }
    // Full range, empty window, and error paths.
    REQUIRE(query_location_temps(state, "BIG", 0, ~0ull).take().size() == 10000);
    REQUIRE(query_location_temps(state, "BIG", 5, 4).code() == Err::BadRange);
    REQUIRE(query_location_temps(state, "NOWHERE", 0, 1).code() == Err::UnknownLocation);
}

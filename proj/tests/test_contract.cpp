// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include "bcc/contract.hpp"
#include "bcc/replay.hpp"
#include "helpers.hpp"

using namespace bcc;
using bcc::test::test_key;
using bcc::test::TestWorld;

namespace {

Item lot(const std::string& id, CentiCelsius lo = 200, CentiCelsius hi = 800,
         std::uint64_t at = 1000) {
    return Item{id, "MFG-1", lo, hi, at};
}

}  // namespace

TEST_CASE("deploy seeds the admin set", "[contract]") {
    KeyPair a = test_key(1), b = test_key(2);
    ContractState state = deploy(ContractState{}, a.id()).take();
    REQUIRE(state.is_admin(a.id()));
    REQUIRE_FALSE(state.is_admin(b.id()));
    auto again = deploy(state, b.id());
    REQUIRE_FALSE(again.ok());
    REQUIRE(again.code() == Err::DuplicateDeploy);
}

TEST_CASE("admin management", "[contract]") {
    KeyPair a = test_key(1), b = test_key(2), c = test_key(3);
    ContractState state = deploy(ContractState{}, a.id()).take();
    state = add_admin(state, a.id(), b.id()).take();
    REQUIRE(state.is_admin(b.id()));
    REQUIRE(add_admin(state, c.id(), c.id()).code() == Err::Unauthorized);
    REQUIRE(add_admin(state, a.id(), b.id()).code() == Err::DuplicateId);
}

TEST_CASE("locations: add, bind sensor, soft remove", "[contract]") {
    TestWorld w;
    REQUIRE(w.state.sensor_location(w.fridge_sensor.id()) == "FRIDGE-1");
    REQUIRE(add_location(w.state, w.stranger.id(), "X", LocationKind::Freezer, std::nullopt)
                .code() == Err::Unauthorized);
    REQUIRE(add_location(w.state, w.admin.id(), "FRIDGE-1", LocationKind::Freezer, std::nullopt)
                .code() == Err::DuplicateId);
    REQUIRE(add_location(w.state, w.admin.id(), "F-2", LocationKind::Freezer,
                         w.fridge_sensor.id())
                .code() == Err::DuplicateId);  // sensor already bound
    REQUIRE(remove_location(w.state, w.admin.id(), "NOWHERE").code() == Err::UnknownLocation);

    ContractState with_temps =
        record_temperature(w.state, w.fridge_sensor.id(), "FRIDGE-1", 1500, 500).value().state;
    ContractState removed = remove_location(with_temps, w.admin.id(), "FRIDGE-1").take();
    REQUIRE_FALSE(removed.locations.at("FRIDGE-1").active);
    // History preserved: the location record and its readings stay.
    REQUIRE(removed.locations.size() == with_temps.locations.size());
    REQUIRE(removed.temps.at("FRIDGE-1") == with_temps.temps.at("FRIDGE-1"));

    // Inactive locations accept no arrivals and no readings.
    ContractState with_item = register_item(removed, w.admin.id(), lot("LOT-1")).take();
    with_item = record_departure(with_item, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    REQUIRE(record_arrival(with_item, w.admin.id(), "LOT-1", "FRIDGE-1", 3000).code() ==
            Err::InactiveLocation);
    REQUIRE(record_temperature(with_item, w.fridge_sensor.id(), "FRIDGE-1", 3000, 500).code() ==
            Err::InactiveLocation);
}

TEST_CASE("register item opens custody at the manufacturer", "[contract]") {
    TestWorld w;
    ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();
    const auto& intervals = state.custody.at("LOT-1");
    REQUIRE(intervals.size() == 1);
    REQUIRE(intervals[0].location == "MFG-1");
    REQUIRE(intervals[0].arrived_at == 1000);
    REQUIRE(intervals[0].open());

    REQUIRE(register_item(state, w.admin.id(), lot("LOT-1")).code() == Err::DuplicateId);
    REQUIRE(register_item(state, w.admin.id(), lot("LOT-2", 500, 500)).code() == Err::BadRange);
    REQUIRE(register_item(state, w.admin.id(), lot("LOT-3", 800, 200)).code() == Err::BadRange);
    REQUIRE(register_item(state, w.admin.id(), Item{"LOT-4", "NOWHERE", 200, 800, 1}).code() ==
            Err::UnknownLocation);
    REQUIRE(register_item(state, w.stranger.id(), lot("LOT-5")).code() == Err::Unauthorized);

    // Ultracold is allowed down to -90 C.
    REQUIRE(register_item(state, w.admin.id(), lot("LOT-6", -9000, -6000)).ok());
    REQUIRE(register_item(state, w.admin.id(), lot("LOT-7", -9001, -6000)).code() ==
            Err::BadRange);
}

TEST_CASE("custody handoff is depart-then-arrive", "[contract]") {
    TestWorld w;
    ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();

    // Arriving elsewhere while custody is open conflicts.
    REQUIRE(record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2000).code() ==
            Err::CustodyConflict);

    state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2600).take();
    const auto& intervals = state.custody.at("LOT-1");
    REQUIRE(intervals.size() == 2);
    REQUIRE(intervals[0].departed_at == 2000);
    REQUIRE(intervals[1].location == "FRIDGE-1");
    REQUIRE(intervals[1].open());

    // Departure must name the holding location.
    REQUIRE(record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2700).code() ==
            Err::CustodyConflict);
    // Departure timestamps must move forward.
    REQUIRE(record_departure(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2600).code() ==
            Err::StaleTimestamp);
    REQUIRE(record_departure(state, w.admin.id(), "LOT-1", "FRIDGE-1", 100).code() ==
            Err::StaleTimestamp);
    REQUIRE(record_arrival(state, w.admin.id(), "NOPE", "FRIDGE-1", 2700).code() ==
            Err::UnknownItem);
    // The location's own sensor key may record events; a foreign one may not.
    REQUIRE(record_departure(state, w.fridge_sensor.id(), "LOT-1", "FRIDGE-1", 2700).ok());
    ContractState closed =
        record_departure(state, w.fridge_sensor.id(), "LOT-1", "FRIDGE-1", 2700).take();
    REQUIRE(record_arrival(closed, w.fridge_sensor.id(), "LOT-1", "MFG-1", 2800).code() ==
            Err::Unauthorized);
}

TEST_CASE("temperature readings and alarms", "[contract]") {
    TestWorld w;
    ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();
    state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
    state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2500).take();

    auto ok = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3000, 500);
    REQUIRE(ok.ok());
    REQUIRE(ok.value().alarms.empty());
    state = ok.value().state;

    // Above range: accepted, alarm raised.
    auto hot = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3600, 900);
    REQUIRE(hot.ok());
    REQUIRE(hot.value().alarms.size() == 1);
    REQUIRE(hot.value().alarms[0].item == "LOT-1");
    REQUIRE(hot.value().state.temps.at("FRIDGE-1").size() == 2);

    // Boundary readings are inside the closed safe range.
    auto boundary = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3600, 800);
    REQUIRE(boundary.value().alarms.empty());

    // Equal timestamp is stale; bounds are global.
    state = hot.value().state;
    REQUIRE(record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3600, 500).code() ==
            Err::StaleTimestamp);
    REQUIRE(record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 4000, 6001).code() ==
            Err::OutOfGlobalBounds);
    REQUIRE(record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 4000, -12001).code() ==
            Err::OutOfGlobalBounds);
    REQUIRE(record_temperature(state, w.stranger.id(), "FRIDGE-1", 4000, 500).code() ==
            Err::Unauthorized);
    REQUIRE(record_temperature(state, w.fridge_sensor.id(), "MFG-1", 4000, 500).code() ==
            Err::Unauthorized);
    REQUIRE(record_temperature(state, w.fridge_sensor.id(), "NOWHERE", 4000, 500).code() ==
            Err::UnknownLocation);
}

TEST_CASE("failed transactions leave the state untouched", "[contract][atomicity]") {
    TestWorld w;
    ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();
    Hash32 before = state_root(state);

    std::vector<TxPayload> doomed = {
        AddLocationPayload{"FRIDGE-1", LocationKind::Freezer, std::nullopt},  // duplicate
        RegisterItemPayload{"LOT-1", "MFG-1", 200, 800, 1},                   // duplicate
        RegisterItemPayload{"LOT-9", "MFG-1", 800, 200, 1},                   // bad range
        ItemArrivalPayload{"LOT-1", "FRIDGE-1", 2000},                        // custody conflict
        ItemDeparturePayload{"LOT-1", "FRIDGE-1", 2000},                      // wrong location
        TemperaturePayload{"FRIDGE-1", 0, 500},                               // stale ts
        TemperaturePayload{"NOWHERE", 10, 500},                               // unknown location
        RemoveLocationPayload{"NOWHERE"},                                     // unknown location
    };
    std::uint64_t nonce = 100;
    for (const auto& payload : doomed) {
        SignedTransaction tx = sign_tx(w.admin, payload, ++nonce).take();
        auto effect = apply_tx(state, tx);
        REQUIRE_FALSE(effect.ok());
        REQUIRE(state_root(state) == before);
    }
}

TEST_CASE("unauthorized callers are rejected for every mutating kind", "[contract][access]") {
    TestWorld w;
    ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();
    Hash32 before = state_root(state);
    KeyPair outsider = test_key(42);

    std::vector<TxPayload> attempts = {
        AddAdminPayload{outsider.id()},
        AddLocationPayload{"EVIL-1", LocationKind::Freezer, std::nullopt},
        RemoveLocationPayload{"FRIDGE-1"},
        RegisterItemPayload{"LOT-9", "MFG-1", 200, 800, 1},
        ItemArrivalPayload{"LOT-1", "FRIDGE-1", 9999},
        ItemDeparturePayload{"LOT-1", "MFG-1", 9999},
        TemperaturePayload{"FRIDGE-1", 9999, 500},
    };
    for (const auto& payload : attempts) {
        SignedTransaction tx = sign_tx(outsider, payload, 1).take();
        auto effect = apply_tx(state, tx);
        REQUIRE_FALSE(effect.ok());
        REQUIRE(effect.error().code == Err::Unauthorized);
        REQUIRE(state_root(state) == before);
    }
}

TEST_CASE("apply_tx tracks nonces and single custody", "[contract]") {
    TestWorld w;
    std::uint64_t nonce = 10;
    ContractState state = w.state;
    std::vector<TxPayload> script = {
        RegisterItemPayload{"LOT-1", "MFG-1", 200, 800, 1000},
        ItemDeparturePayload{"LOT-1", "MFG-1", 1100},
        ItemArrivalPayload{"LOT-1", "FRIDGE-1", 1200},
        TemperaturePayload{"FRIDGE-1", 1300, 500},
    };
    for (const auto& payload : script) {
        SignedTransaction tx = sign_tx(w.admin, payload, ++nonce).take();
        auto effect = apply_tx(state, tx);
        REQUIRE(effect.ok());
        state = effect.value().state;
        // At most one open interval per item, always.
        for (const auto& [item, intervals] : state.custody) {
            int open = 0;
            for (const auto& iv : intervals) open += iv.open() ? 1 : 0;
            REQUIRE(open <= 1);
        }
    }
    REQUIRE(state.last_nonce.at(w.admin.id()) == nonce);
}

TEST_CASE("replaying the same transactions yields the same root", "[contract][determinism]") {
    auto run = [] {
        TestWorld w;
        ContractState state = register_item(w.state, w.admin.id(), lot("LOT-1")).take();
        state = record_departure(state, w.admin.id(), "LOT-1", "MFG-1", 2000).take();
        state = record_arrival(state, w.admin.id(), "LOT-1", "FRIDGE-1", 2500).take();
        for (int i = 0; i < 50; ++i)
            state = record_temperature(state, w.fridge_sensor.id(), "FRIDGE-1", 3000 + i * 60,
                                       400 + (i % 7) * 50)
                        .value()
                        .state;
        return state_root(state).hex();
    };
    REQUIRE(run() == run());
}

TEST_CASE("verify_against_state bootstraps only the genesis deploy", "[contract]") {
    KeyPair deployer = test_key(1), other = test_key(2);
    ContractState empty;
    SignedTransaction good = sign_tx(deployer, TxPayload(DeployPayload{deployer.id()}), 1).take();
    REQUIRE(verify_against_state(empty, good).value());
    // Deploy naming someone else is not self-signed.
    SignedTransaction wrong =
        sign_tx(other, TxPayload(DeployPayload{deployer.id()}), 1).take();
    REQUIRE_FALSE(verify_against_state(empty, wrong).ok());
    // After deployment, unknown submitters are rejected outright.
    ContractState state = deploy(empty, deployer.id()).take();
    SignedTransaction stranger =
        sign_tx(other, TxPayload(AddAdminPayload{other.id()}), 1).take();
    REQUIRE(verify_against_state(state, stranger).code() == Err::UnknownSubmitter);
}

// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "bcc/contract.hpp"
#include "bcc/payload_store.hpp"
#include "helpers.hpp"

using namespace bcc;
using bcc::test::TempDir;
using bcc::test::TestWorld;

namespace {

LoggerDump make_dump(const LocationId& loc, std::size_t count, std::uint64_t t0,
                     std::uint64_t step = 600, CentiCelsius temp = 500) {
    LoggerDump dump;
    dump.location = loc;
    for (std::size_t i = 0; i < count; ++i)
        dump.readings.push_back(TemperatureReading{loc, t0 + (i + 1) * step, temp});
    return dump;
}

}  // namespace

TEST_CASE("put is idempotent and get round-trips", "[store]") {
    TempDir dir("store");
    DirPayloadStore store(dir.path());
    LoggerDump dump = make_dump("FRIDGE-1", 144, 1000);

    Hash32 h1 = put_dump(store, dump).take();
    Hash32 h2 = put_dump(store, dump).take();
    REQUIRE(h1 == h2);
    REQUIRE(store.size() == 1);

    LoggerDump back = get_dump(store, h1).take();
    REQUIRE(back.location == dump.location);
    REQUIRE(back.readings == dump.readings);
    REQUIRE(serialize_dump(back).value() == serialize_dump(dump).value());

    // The content hash is the plain hash of the canonical bytes.
    REQUIRE(h1 == hash_bytes(serialize_dump(dump).value()));
}

TEST_CASE("get on an unknown hash is Missing", "[store]") {
    TempDir dir("store-missing");
    DirPayloadStore store(dir.path());
    Hash32 nowhere;
    nowhere.bytes[0] = 0xAB;
    REQUIRE(get_dump(store, nowhere).code() == Err::Missing);
}

TEST_CASE("at-rest corruption surfaces as CorruptPayload", "[store]") {
    TempDir dir("store-corrupt");
    DirPayloadStore store(dir.path());
    LoggerDump dump = make_dump("FRIDGE-1", 20, 1000);
    Hash32 h = put_dump(store, dump).take();

    auto blob_path = dir.path() / h.hex();
    REQUIRE(std::filesystem::exists(blob_path));
    Bytes blob;
    {
        std::ifstream in(blob_path, std::ios::binary);
        blob.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    blob[blob.size() / 2] ^= 0x01;
    {
        std::ofstream out(blob_path, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(blob.data()), blob.size());
    }
    REQUIRE(get_dump(store, h).code() == Err::CorruptPayload);
}

TEST_CASE("dump validation", "[store]") {
    LoggerDump dump = make_dump("FRIDGE-1", 3, 1000);
    REQUIRE(dump.validate().ok());
    dump.readings[1].ts = dump.readings[0].ts;  // not strictly increasing
    REQUIRE_FALSE(dump.validate().ok());
    LoggerDump foreign = make_dump("FRIDGE-1", 2, 1000);
    foreign.readings[1].location = "OTHER";
    REQUIRE_FALSE(foreign.validate().ok());
    LoggerDump oversize = make_dump("FRIDGE-1", kMaxDumpReadings + 1, 1000, 1);
    REQUIRE(oversize.validate().code() == Err::OversizeField);
    // 30 days at 10-minute cadence fits exactly.
    REQUIRE(make_dump("FRIDGE-1", kMaxDumpReadings, 1000).validate().ok());
}

TEST_CASE("ingest folds a dump as if readings came one by one", "[store][ingest]") {
    TestWorld w;
    MemPayloadStore store;
    LoggerDump dump = make_dump("FRIDGE-1", 144, 5000, 600, 480);
    Hash32 h = put_dump(store, dump).take();
    LoggerDumpRefPayload ref = make_dump_ref(dump, h);

    auto folded = ingest_dump(w.state, w.fridge_sensor.id(), ref, store);
    REQUIRE(folded.ok());
    REQUIRE(folded.value().state.temps.at("FRIDGE-1").size() == 144);

    // Equivalence: the same readings submitted individually produce a
    // byte-identical state.
    ContractState individually = w.state;
    for (const auto& r : dump.readings)
        individually =
            record_temperature(individually, w.fridge_sensor.id(), r.location, r.ts, r.temp)
                .value()
                .state;
    REQUIRE(state_root(folded.value().state) == state_root(individually));
}

TEST_CASE("ingest rejects overlap, mismatch and missing payloads", "[store][ingest]") {
    TestWorld w;
    MemPayloadStore store;
    ContractState state =
        record_temperature(w.state, w.fridge_sensor.id(), "FRIDGE-1", 10000, 500).value().state;
    Hash32 before = state_root(state);

    SECTION("overlapping the on-chain series is stale") {
        LoggerDump dump = make_dump("FRIDGE-1", 10, 9000, 600);
        LoggerDumpRefPayload ref = make_dump_ref(dump, put_dump(store, dump).take());
        auto result = ingest_dump(state, w.fridge_sensor.id(), ref, store);
        REQUIRE(result.code() == Err::StaleTimestamp);
        REQUIRE(state_root(state) == before);
    }
    SECTION("a reference that does not match the stored dump is corrupt") {
        LoggerDump dump = make_dump("FRIDGE-1", 10, 20000, 600);
        LoggerDumpRefPayload ref = make_dump_ref(dump, put_dump(store, dump).take());
        ref.count = 9;
        REQUIRE(ingest_dump(state, w.fridge_sensor.id(), ref, store).code() ==
                Err::CorruptPayload);
    }
    SECTION("an absent dump is missing") {
        LoggerDump dump = make_dump("FRIDGE-1", 10, 20000, 600);
        LoggerDumpRefPayload ref = make_dump_ref(dump, hash_bytes(serialize_dump(dump).value()));
        REQUIRE(ingest_dump(state, w.fridge_sensor.id(), ref, store).code() == Err::Missing);
    }
    SECTION("authorization mirrors record_temperature") {
        LoggerDump dump = make_dump("FRIDGE-1", 10, 20000, 600);
        LoggerDumpRefPayload ref = make_dump_ref(dump, put_dump(store, dump).take());
        REQUIRE(ingest_dump(state, w.stranger.id(), ref, store).code() == Err::Unauthorized);
    }
}

TEST_CASE("distinct dumps never collide", "[store][property]") {
    MemPayloadStore store;
    std::set<Hash32> seen;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        LoggerDump dump = make_dump("L" + std::to_string(rng.uniform_u64(0, 3)),
                                    rng.uniform_u64(1, 30), rng.uniform_u64(1, 100000),
                                    rng.uniform_u64(1, 600),
                                    static_cast<CentiCelsius>(rng.uniform_i64(-9000, 6000)));
        Hash32 h = put_dump(store, dump).take();
        REQUIRE(get_dump(store, h).take().readings == dump.readings);
        seen.insert(h);
    }
    REQUIRE(seen.size() == store.size());
}

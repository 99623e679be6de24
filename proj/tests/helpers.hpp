// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bcc/chain.hpp"
#include "bcc/contract.hpp"
#include "bcc/replay.hpp"
#include "bcc/rng.hpp"
#include "bcc/tx.hpp"

namespace bcc::test {

inline KeyPair test_key(int i) { return KeyPair::derive("test-key-" + std::to_string(i)); }

/// Scratch directory per test, removed on scope exit.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() /
               ("bcc-test-" + tag + "-" + std::to_string(counter_++));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& path() const { return dir_; }
    std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

  private:
    static inline int counter_ = 0;
    std::filesystem::path dir_;
};

inline TxPayload random_payload(Rng& rng) {
    switch (rng.uniform_u64(0, 7)) {
        case 0:
            return RegisterItemPayload{"LOT-" + std::to_string(rng.uniform_u64(0, 999)), "MFG-1",
                                       static_cast<CentiCelsius>(rng.uniform_i64(-9000, 500)),
                                       static_cast<CentiCelsius>(rng.uniform_i64(600, 6000)),
                                       rng.uniform_u64(1, 1u << 30)};
        case 1:
            return AddAdminPayload{test_key(static_cast<int>(rng.uniform_u64(0, 9))).id()};
        case 2:
            return AddLocationPayload{
                "LOC-" + std::to_string(rng.uniform_u64(0, 999)),
                static_cast<LocationKind>(rng.uniform_u64(0, 11)),
                rng.uniform_u64(0, 1) ? std::optional<PublicKeyId>(
                                            test_key(static_cast<int>(rng.uniform_u64(0, 9))).id())
                                      : std::nullopt};
        case 3:
            return RemoveLocationPayload{"LOC-" + std::to_string(rng.uniform_u64(0, 999))};
        case 4:
            return ItemArrivalPayload{"LOT-" + std::to_string(rng.uniform_u64(0, 999)),
                                      "LOC-" + std::to_string(rng.uniform_u64(0, 999)),
                                      rng.uniform_u64(1, 1u << 30)};
        case 5:
            return ItemDeparturePayload{"LOT-" + std::to_string(rng.uniform_u64(0, 999)),
                                        "LOC-" + std::to_string(rng.uniform_u64(0, 999)),
                                        rng.uniform_u64(1, 1u << 30)};
        case 6: {
            LoggerDumpRefPayload ref;
            ref.location_id = "LOC-" + std::to_string(rng.uniform_u64(0, 999));
            for (auto& b : ref.dump_hash.bytes) b = static_cast<std::uint8_t>(rng.uniform_u64(0, 255));
            ref.first_ts = rng.uniform_u64(1, 1u << 30);
            ref.last_ts = ref.first_ts + rng.uniform_u64(0, 86400);
            ref.count = static_cast<std::uint32_t>(rng.uniform_u64(1, 4320));
            return ref;
        }
        default:
            return TemperaturePayload{"LOC-" + std::to_string(rng.uniform_u64(0, 999)),
                                      rng.uniform_u64(1, 1u << 30),
                                      static_cast<CentiCelsius>(rng.uniform_i64(-12000, 6000))};
    }
}

/// A structurally valid signed chain; payload semantics are irrelevant to
/// ledger-core, so transactions carry arbitrary readings.
inline Chain make_test_chain(std::size_t block_count, std::size_t txs_per_block,
                             std::uint64_t seed) {
    Rng rng(seed);
    KeyPair deployer = test_key(0);
    Chain chain = Chain::from_genesis(make_genesis(deployer, 1700000000).take());
    std::uint64_t nonce = 1;
    for (std::size_t b = 1; b < block_count; ++b) {
        std::vector<SignedTransaction> txs;
        for (std::size_t t = 0; t < txs_per_block; ++t) {
            TemperaturePayload payload{"LOC-" + std::to_string(rng.uniform_u64(0, 4)),
                                       rng.uniform_u64(1, 1u << 30),
                                       static_cast<CentiCelsius>(rng.uniform_i64(-9000, 6000))};
            txs.push_back(sign_tx(deployer, payload, ++nonce).take());
        }
        Block block =
            build_block(chain.tip(), std::move(txs), 1700000000 + b).take();
        if (!chain.append(std::move(block))) throw std::runtime_error("test chain append failed");
    }
    return chain;
}

/// Genesis plus one setup block: manufacturer, sensor-bound fridge, and
/// LOT-1 already arrived at the fridge. Preload this into a simulation and
/// readings can flow immediately.
struct SimFixture {
    KeyPair admin = test_key(1);
    KeyPair sensor = test_key(2);
    Chain chain;
    std::uint64_t admin_nonce = 6;
    std::uint64_t base_time = 1700000000;

    SimFixture() {
        chain = Chain::from_genesis(make_genesis(admin, base_time).take());
        std::vector<SignedTransaction> setup;
        std::uint64_t nonce = 1;
        auto push = [&](TxPayload payload) {
            setup.push_back(sign_tx(admin, std::move(payload), ++nonce).take());
        };
        push(AddLocationPayload{"MFG-1", LocationKind::Manufacturer, std::nullopt});
        push(AddLocationPayload{"FRIDGE-1", LocationKind::Refrigerator, sensor.id()});
        push(RegisterItemPayload{"LOT-1", "MFG-1", 200, 800, base_time});
        push(ItemDeparturePayload{"LOT-1", "MFG-1", base_time + 1});
        push(ItemArrivalPayload{"LOT-1", "FRIDGE-1", base_time + 2});
        Block setup_block = build_block(chain.tip(), std::move(setup), base_time + 1).take();
        if (!chain.append(std::move(setup_block)).ok())
            throw std::runtime_error("fixture setup block rejected");
    }

    SignedTransaction reading(std::uint64_t ts, CentiCelsius temp, std::uint64_t nonce) const {
        return sign_tx(sensor, TxPayload(TemperaturePayload{"FRIDGE-1", ts, temp}), nonce).take();
    }
};

/// Minimal deployed contract state with one admin, a manufacturer, and a
/// sensor-bound fridge, for handler tests.
struct TestWorld {
    KeyPair admin = test_key(1);
    KeyPair fridge_sensor = test_key(2);
    KeyPair stranger = test_key(3);
    ContractState state;

    TestWorld() {
        state = deploy(ContractState{}, admin.id()).take();
        state = add_location(state, admin.id(), "MFG-1", LocationKind::Manufacturer, std::nullopt)
                    .take();
        state = add_location(state, admin.id(), "FRIDGE-1", LocationKind::Refrigerator,
                             fridge_sensor.id())
                    .take();
    }
};

}  // namespace bcc::test

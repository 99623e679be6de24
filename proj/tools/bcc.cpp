// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// bcc — blockchain cold-chain tracker CLI.
//
// Three user surfaces: `admin` (full control of the contract), `location`
// (per-site custody and telemetry), and `verify` (anyone may audit an item
// without credentials). Plus ledger plumbing: init, replay, bench, sensor.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <sodium.h>

#include "bcc/contract.hpp"
#include "bcc/ledger_file.hpp"
#include "bcc/payload_store.hpp"
#include "bcc/replay.hpp"
#include "bcc/report_json.hpp"
#include "bcc/sensor.hpp"
#include "bcc/sim/scenario.hpp"
#include "bcc/sim/simulation.hpp"
#include "bcc/trace_io.hpp"

namespace fs = std::filesystem;
using namespace bcc;

namespace {

struct GlobalOpts {
    std::string ledger = "ledger.bcc";
    std::string store = "payloads";
    std::string keys = "keys";
    std::uint64_t seed = 42;
    std::string format = "table";
};

int fail(const std::string& message) {
    std::cerr << message << '\n';
    return 1;
}

int fail(const Error& error) { return fail(error.to_string()); }

fs::path key_path(const GlobalOpts& g, const std::string& name) {
    fs::path direct(name);
    if (fs::exists(direct) && direct.has_extension()) return direct;
    return fs::path(g.keys) / (name + ".key");
}

Result<KeyPair> load_key(const GlobalOpts& g, const std::string& name) {
    fs::path path = key_path(g, name);
    std::ifstream in(path);
    if (!in) return Error(Err::IoError, "cannot read key file " + path.string());
    std::string hex;
    in >> hex;
    try {
        return KeyPair::from_seed_hex(hex);
    } catch (const std::exception& e) {
        return Error(Err::MalformedRecord, path.string() + ": " + e.what());
    }
}

/// Accepts either a 64-hex public key or the name of a local key file.
Result<PublicKeyId> resolve_pubkey(const GlobalOpts& g, const std::string& ref) {
    if (ref.size() == 64) {
        auto raw = from_hex(ref);
        if (raw && raw->size() == 32) {
            PublicKeyId id;
            std::copy(raw->begin(), raw->end(), id.bytes.begin());
            return id;
        }
    }
    auto key = load_key(g, ref);
    if (!key) return key.error();
    return key.value().id();
}

struct LoadedLedger {
    Chain chain;
    ContractState state;
};

Result<LoadedLedger> load_ledger(const GlobalOpts& g, const PayloadStore* store) {
    auto chain = read_ledger(g.ledger);
    if (!chain) return chain.error();
    if (auto bad = validate_chain(chain.value()))
        return Error(Err::BadBlockHash, "ledger invalid at height " + std::to_string(*bad));
    auto replayed = replay_chain(chain.value(), store);
    if (!replayed) return replayed.error();
    return LoadedLedger{std::move(chain).take(), std::move(replayed.value().state)};
}

struct SubmitOutcome {
    sim::TxReceipt receipt;
    std::uint64_t chain_height = 0;
};

/// Signs nothing itself: takes a finished transaction, pushes it through an
/// embedded four-orderer network, and appends whatever committed to the
/// ledger file.
Result<SubmitOutcome> submit_via_sim(const GlobalOpts& g, const PayloadStore* store,
                                     const LoadedLedger& loaded, SignedTransaction tx) {
    sim::ConsensusConfig config;
    config.mode = sim::ConsensusMode::PoA;
    sim::Simulation net(config, loaded.chain.tip().header.timestamp, g.seed, store);
    sim::NodeId peer = net.add_node("net", sim::NodeKind::Peer);
    for (int i = 0; i < 4; ++i) net.add_node("net", sim::NodeKind::Orderer);
    if (auto r = net.preload(loaded.chain); !r) return r.error();
    net.start(30 * config.interval_ms());
    std::uint64_t seq = net.schedule_submit(1, std::move(tx), peer);
    net.run_to_end();
    const sim::TxReceipt& receipt = net.receipts().at(seq);
    if (receipt.error) return Error(*receipt.error);
    if (!receipt.committed_ms)
        return Error(Err::ScenarioError, "transaction did not commit in the embedded network");
    const auto& committed_chain = net.node(peer).chain;
    for (std::uint64_t h = loaded.chain.size(); h < committed_chain.size(); ++h) {
        if (auto r = append_ledger_record(g.ledger, committed_chain.at(h)); !r) return r.error();
    }
    return SubmitOutcome{receipt, committed_chain.size() - 1};
}

std::uint64_t next_nonce(const ContractState& state, const PublicKeyId& submitter) {
    auto it = state.last_nonce.find(submitter);
    return (it == state.last_nonce.end() ? 0 : it->second) + 1;
}

int run_mutation(const GlobalOpts& g, const std::string& signer, TxPayload payload) {
    DirPayloadStore store{fs::path(g.store)};
    auto key = load_key(g, signer);
    if (!key) return fail(key.error());
    auto loaded = load_ledger(g, &store);
    if (!loaded) return fail(loaded.error());
    auto tx = sign_tx(key.value(), std::move(payload),
                      next_nonce(loaded.value().state, key.value().id()));
    if (!tx) return fail(tx.error());
    auto outcome = submit_via_sim(g, &store, loaded.value(), std::move(tx).take());
    if (!outcome) return fail(outcome.error());
    const auto& receipt = outcome.value().receipt;
    if (g.format == "json") {
        nlohmann::json j = {{"kind", receipt.kind},
                            {"committed_height", outcome.value().chain_height},
                            {"alarms", nlohmann::json::array()}};
        for (const auto& alarm : receipt.alarms)
            j["alarms"].push_back({{"item", alarm.item},
                                   {"location", alarm.location},
                                   {"ts", alarm.ts},
                                   {"temp", centi_to_string(alarm.temp)}});
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "committed " << receipt.kind << " at height "
                  << outcome.value().chain_height << '\n';
        for (const auto& alarm : receipt.alarms)
            std::cout << "ALARM: item " << alarm.item << " at " << alarm.location
                      << " ts=" << alarm.ts << " temp=" << centi_to_string(alarm.temp)
                      << " outside [" << centi_to_string(alarm.safe_min) << ", "
                      << centi_to_string(alarm.safe_max) << "]\n";
    }
    return 0;
}

Result<CentiCelsius> parse_temp_arg(const std::string& text) {
    auto parsed = parse_centi(text);
    if (!parsed) return Error(Err::BadRange, "cannot parse temperature '" + text + "'");
    return *parsed;
}

int cmd_verify(const GlobalOpts& g, const std::string& item_id, std::uint64_t gap_threshold,
               std::optional<std::uint64_t> as_of) {
    DirPayloadStore store{fs::path(g.store)};
    auto loaded = load_ledger(g, &store);
    if (!loaded) return fail(loaded.error());
    auto report = query_item_history(loaded.value().state, item_id, gap_threshold, as_of);
    if (!report) {
        fail(report.error());
        return report.error().code == Err::UnknownItem ? 4 : 1;
    }
    const ItemReport& r = report.value();
    if (g.format == "json") {
        std::cout << report_to_json(r).dump(2) << '\n';
    } else {
        std::cout << "item " << r.item.id << "  safe range [" << centi_to_string(r.item.safe_min)
                  << ", " << centi_to_string(r.item.safe_max) << "]  manufacturer "
                  << r.item.manufacturer << '\n';
        for (std::size_t i = 0; i < r.hops.size(); ++i) {
            const HopReport& hop = r.hops[i];
            std::cout << "hop " << i << "  " << hop.interval.location
                      << "  arrived=" << hop.interval.arrived_at << "  departed=";
            if (hop.interval.departed_at) std::cout << *hop.interval.departed_at;
            else std::cout << "OPEN";
            std::cout << "  readings=" << hop.readings.size();
            if (!hop.readings.empty()) {
                CentiCelsius lo = hop.readings.front().temp, hi = lo;
                for (const auto& s : hop.readings) {
                    lo = std::min(lo, s.temp);
                    hi = std::max(hi, s.temp);
                }
                std::cout << "  temps=[" << centi_to_string(lo) << ", " << centi_to_string(hi)
                          << "]";
            }
            std::cout << "  gaps=" << hop.gaps.size() << '\n';
        }
        for (const auto& e : r.excursions)
            std::cout << "excursion: hop " << e.hop << " at " << e.location << " ts=" << e.ts
                      << " temp=" << centi_to_string(e.temp) << '\n';
        std::cout << "verdict: " << verdict_name(r.verdict) << '\n';
    }
    switch (r.verdict) {
        case Verdict::SAFE: return 0;
        case Verdict::COMPROMISED: return 2;
        case Verdict::UNKNOWN: return 3;
    }
    return 1;
}

int cmd_replay(const GlobalOpts& g) {
    DirPayloadStore store{fs::path(g.store)};
    auto chain = read_ledger(g.ledger);
    if (!chain) return fail("ledger invalid: " + chain.error().to_string());
    if (auto bad = validate_chain(chain.value()))
        return fail("ledger invalid at height " + std::to_string(*bad));
    auto replayed = replay_chain(chain.value(), &store);
    if (!replayed) return fail("replay failed: " + replayed.error().to_string());
    Hash32 root = state_root(replayed.value().state);
    if (g.format == "json") {
        nlohmann::json j = {{"height", chain.value().size() - 1},
                            {"blocks", chain.value().size()},
                            {"txs", replayed.value().applied_txs},
                            {"state_root", root.hex()}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "blocks: " << chain.value().size() << "  txs: "
                  << replayed.value().applied_txs << '\n';
        std::cout << "state root: " << root.hex() << '\n';
    }
    return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& scenario_path, int runs,
              const std::string& out_dir) {
    sim::Scenario scenario;
    if (!scenario_path.empty()) {
        auto loaded = sim::load_scenario(scenario_path);
        if (!loaded) return fail(loaded.error());
        scenario = std::move(loaded).take();
    }
    if (g.seed != 42) scenario.seed = g.seed;
    fs::create_directories(out_dir);
    for (int run = 0; run < runs; ++run) {
        sim::Scenario this_run = scenario;
        this_run.seed = scenario.seed + static_cast<std::uint64_t>(run);
        auto result = sim::run_scenario(this_run);
        if (!result) return fail(result.error());
        const sim::RunResult& r = result.value();
        fs::path csv = fs::path(out_dir) / ("latency_run" + std::to_string(run) + ".csv");
        fs::path log = fs::path(out_dir) / ("commits_run" + std::to_string(run) + ".log");
        std::ofstream(csv) << r.latency_csv;
        std::ofstream(log) << r.commit_log;
        std::cout << "run " << run << " (seed " << this_run.seed << ")\n"
                  << r.summary.to_string() << "state root: " << r.state_root
                  << (r.roots_agree ? "" : "  (NODES DISAGREE)") << '\n'
                  << "wrote " << csv.string() << ", " << log.string() << '\n';
        if (r.sim->safety_violation()) return fail("safety violation during run");
    }
    return 0;
}

const std::string excursion_arg_help =
    "excursion window as start:end:target_temp:ramp_seconds, e.g. 1700010000:1700020000:15.00:600";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bcc — blockchain cold-chain tracker"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--ledger", g.ledger, "ledger file path")->capture_default_str();
    app.add_option("--store", g.store, "off-chain payload store directory")->capture_default_str();
    app.add_option("--keys", g.keys, "key directory")->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed for embedded simulations")->capture_default_str();
    app.add_option("--format", g.format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();

    int rc = 0;

    // ---- keygen ----
    auto* keygen = app.add_subcommand("keygen", "create an actor key file");
    std::string kg_name;
    std::string kg_seed_hex;
    keygen->add_option("--name", kg_name, "key name (stored under the keys directory)")
        ->required();
    keygen->add_option("--seed-hex", kg_seed_hex, "32-byte hex seed for deterministic keys");
    keygen->callback([&] {
        crypto_init();
        std::array<std::uint8_t, 32> seed{};
        if (!kg_seed_hex.empty()) {
            auto raw = from_hex(kg_seed_hex);
            if (!raw || raw->size() != 32) {
                rc = fail("--seed-hex must be 64 hex characters");
                return;
            }
            std::copy(raw->begin(), raw->end(), seed.begin());
        } else {
            randombytes_buf(seed.data(), seed.size());
        }
        KeyPair kp = KeyPair::from_seed(seed);
        fs::create_directories(g.keys);
        fs::path path = fs::path(g.keys) / (kg_name + ".key");
        std::ofstream out(path, std::ios::trunc);
        out << kp.seed_hex() << '\n';
        if (!out) {
            rc = fail("cannot write " + path.string());
            return;
        }
        std::cout << kp.id().hex() << '\n';
    });

    // ---- init ----
    auto* init = app.add_subcommand("init", "create a ledger with its genesis deploy");
    std::string init_key;
    std::uint64_t genesis_time = 1700000000;
    init->add_option("--key", init_key, "deployer key name")->required();
    init->add_option("--genesis-time", genesis_time, "genesis timestamp (Unix seconds)")
        ->capture_default_str();
    init->callback([&] {
        if (fs::exists(g.ledger)) {
            rc = fail("refusing to overwrite existing ledger " + g.ledger);
            return;
        }
        auto key = load_key(g, init_key);
        if (!key) {
            rc = fail(key.error());
            return;
        }
        auto genesis = make_genesis(key.value(), genesis_time);
        if (!genesis) {
            rc = fail(genesis.error());
            return;
        }
        Chain chain = Chain::from_genesis(std::move(genesis).take());
        if (auto r = write_ledger(g.ledger, chain); !r) {
            rc = fail(r.error());
            return;
        }
        std::cout << "ledger " << g.ledger << " deployed by " << key.value().id().hex() << '\n';
    });

    // ---- admin ----
    auto* admin = app.add_subcommand("admin", "contract administration");
    admin->require_subcommand(1);

    auto* add_admin_cmd = admin->add_subcommand("add-admin", "grant admin rights to a key");
    std::string aa_key, aa_admin;
    add_admin_cmd->add_option("--key", aa_key, "admin key name")->required();
    add_admin_cmd->add_option("--admin", aa_admin, "new admin: key name or 64-hex public key")
        ->required();
    add_admin_cmd->callback([&] {
        auto who = resolve_pubkey(g, aa_admin);
        if (!who) {
            rc = fail(who.error());
            return;
        }
        rc = run_mutation(g, aa_key, AddAdminPayload{who.value()});
    });

    auto* add_loc = admin->add_subcommand("add-location", "register a cold-chain location");
    std::string al_key, al_id, al_kind = "Refrigerator", al_sensor;
    add_loc->add_option("--key", al_key, "admin key name")->required();
    add_loc->add_option("--id", al_id, "location id")->required();
    add_loc->add_option("--kind", al_kind,
                        "ColdRoom|FreezerRoom|Freezer|Refrigerator|ColdBox|RefrigeratedTruck|"
                        "VaccineCarrier|HealthCenter|Airport|CentralStore|RegionalStore|"
                        "Manufacturer")
        ->capture_default_str();
    add_loc->add_option("--sensor", al_sensor, "bound sensor: key name or 64-hex public key");
    add_loc->callback([&] {
        auto kind = location_kind_from_name(al_kind);
        if (!kind) {
            rc = fail("unknown location kind " + al_kind);
            return;
        }
        AddLocationPayload payload{al_id, *kind, std::nullopt};
        if (!al_sensor.empty()) {
            auto sensor = resolve_pubkey(g, al_sensor);
            if (!sensor) {
                rc = fail(sensor.error());
                return;
            }
            payload.sensor_key = sensor.value();
        }
        rc = run_mutation(g, al_key, payload);
    });

    auto* rm_loc = admin->add_subcommand("remove-location", "deactivate a location");
    std::string rl_key, rl_id;
    rm_loc->add_option("--key", rl_key, "admin key name")->required();
    rm_loc->add_option("--id", rl_id, "location id")->required();
    rm_loc->callback([&] { rc = run_mutation(g, rl_key, RemoveLocationPayload{rl_id}); });

    auto* reg_item = admin->add_subcommand("register-item", "register a vaccine lot");
    std::string ri_key, ri_id, ri_mfg, ri_min = "2.00", ri_max = "8.00";
    std::uint64_t ri_at = 0;
    reg_item->add_option("--key", ri_key, "admin or manufacturer sensor key name")->required();
    reg_item->add_option("--id", ri_id, "item id")->required();
    reg_item->add_option("--manufacturer", ri_mfg, "manufacturer location id")->required();
    reg_item->add_option("--min", ri_min, "safe minimum, degrees C")->capture_default_str();
    reg_item->add_option("--max", ri_max, "safe maximum, degrees C")->capture_default_str();
    reg_item->add_option("--at", ri_at, "registration timestamp (Unix seconds)")->required();
    reg_item->callback([&] {
        auto lo = parse_temp_arg(ri_min);
        auto hi = parse_temp_arg(ri_max);
        if (!lo || !hi) {
            rc = fail(lo ? hi.error() : lo.error());
            return;
        }
        RegisterItemPayload payload{ri_id, ri_mfg, lo.value(), hi.value(), ri_at};
        rc = run_mutation(g, ri_key, payload);
    });

    auto* inspect = admin->add_subcommand("inspect", "render the whole network state");
    inspect->callback([&] {
        DirPayloadStore store{fs::path(g.store)};
        auto loaded = load_ledger(g, &store);
        if (!loaded) {
            rc = fail(loaded.error());
            return;
        }
        const ContractState& state = loaded.value().state;
        if (g.format == "json") {
            nlohmann::json j = state_to_json(state);
            j["chain_height"] = loaded.value().chain.size() - 1;
            std::cout << j.dump(2) << '\n';
            return;
        }
        std::cout << "chain height: " << loaded.value().chain.size() - 1 << '\n';
        std::cout << "state root:   " << state_root(state).hex() << '\n';
        std::cout << "admins: " << state.admins.size() << '\n';
        for (const auto& a : state.admins) std::cout << "  " << a.hex() << '\n';
        std::cout << "locations: " << state.locations.size() << '\n';
        for (const auto& [id, loc] : state.locations) {
            std::cout << "  " << id << "  kind=" << location_kind_name(loc.kind)
                      << (loc.active ? "" : "  INACTIVE");
            auto series = state.temps.find(id);
            if (series != state.temps.end())
                std::cout << "  readings=" << series->second.size();
            std::cout << '\n';
        }
        std::cout << "items: " << state.items.size() << '\n';
        for (const auto& [id, item] : state.items) {
            std::cout << "  " << id << "  range=[" << centi_to_string(item.safe_min) << ", "
                      << centi_to_string(item.safe_max) << "]";
            auto intervals = state.custody.find(id);
            if (intervals != state.custody.end() && !intervals->second.empty()) {
                const auto& last = intervals->second.back();
                std::cout << "  at=" << (last.open() ? last.location : "(in transit)");
            }
            std::cout << '\n';
        }
    });

    // ---- location ----
    auto* location = app.add_subcommand("location", "per-site custody and telemetry");
    location->require_subcommand(1);

    auto* arrive = location->add_subcommand("arrive", "record an item arrival");
    std::string ar_key, ar_item, ar_loc;
    std::uint64_t ar_ts = 0;
    arrive->add_option("--key", ar_key, "admin or location sensor key")->required();
    arrive->add_option("--item", ar_item, "item id")->required();
    arrive->add_option("--location", ar_loc, "location id")->required();
    arrive->add_option("--ts", ar_ts, "event timestamp (Unix seconds)")->required();
    arrive->callback([&] {
        rc = run_mutation(g, ar_key, ItemArrivalPayload{ar_item, ar_loc, ar_ts});
    });

    auto* depart = location->add_subcommand("depart", "record an item departure");
    std::string dp_key, dp_item, dp_loc;
    std::uint64_t dp_ts = 0;
    depart->add_option("--key", dp_key, "admin or location sensor key")->required();
    depart->add_option("--item", dp_item, "item id")->required();
    depart->add_option("--location", dp_loc, "location id")->required();
    depart->add_option("--ts", dp_ts, "event timestamp (Unix seconds)")->required();
    depart->callback([&] {
        rc = run_mutation(g, dp_key, ItemDeparturePayload{dp_item, dp_loc, dp_ts});
    });

    auto* submit_temp = location->add_subcommand("submit-temp", "record one temperature reading");
    std::string st_key, st_loc, st_temp;
    std::uint64_t st_ts = 0;
    submit_temp->add_option("--key", st_key, "location sensor or admin key")->required();
    submit_temp->add_option("--location", st_loc, "location id")->required();
    submit_temp->add_option("--ts", st_ts, "reading timestamp (Unix seconds)")->required();
    submit_temp->add_option("--temp", st_temp, "temperature, e.g. 5.00 or -18.5")->required();
    submit_temp->callback([&] {
        auto temp = parse_temp_arg(st_temp);
        if (!temp) {
            rc = fail(temp.error());
            return;
        }
        rc = run_mutation(g, st_key, TemperaturePayload{st_loc, st_ts, temp.value()});
    });

    auto* submit_dump = location->add_subcommand(
        "submit-dump", "store a logger history off-chain and commit its hash");
    std::string sd_key, sd_file, sd_loc;
    submit_dump->add_option("--key", sd_key, "location sensor or admin key")->required();
    submit_dump->add_option("--file", sd_file, "JSON-lines trace file")->required();
    submit_dump->add_option("--location", sd_loc, "location id (default: from the trace)");
    submit_dump->callback([&] {
        std::ifstream in(sd_file);
        if (!in) {
            rc = fail("cannot open " + sd_file);
            return;
        }
        auto trace = read_trace_jsonl(in);
        if (!trace) {
            rc = fail(trace.error());
            return;
        }
        if (trace.value().empty()) {
            rc = fail("empty trace");
            return;
        }
        LoggerDump dump;
        dump.location = sd_loc.empty() ? trace.value().front().location : sd_loc;
        dump.readings = std::move(trace).take();
        for (auto& r : dump.readings) r.location = dump.location;
        if (auto v = dump.validate(); !v) {
            rc = fail(v.error());
            return;
        }
        DirPayloadStore store{fs::path(g.store)};
        auto hash = put_dump(store, dump);
        if (!hash) {
            rc = fail(hash.error());
            return;
        }
        std::cout << "stored dump " << hash.value().hex() << " (" << dump.readings.size()
                  << " readings)\n";
        rc = run_mutation(g, sd_key, make_dump_ref(dump, hash.value()));
    });

    auto* my_items = location->add_subcommand("my-items", "items in custody at a time");
    std::string mi_loc;
    std::uint64_t mi_at = 0;
    my_items->add_option("--location", mi_loc, "location id")->required();
    my_items->add_option("--at", mi_at, "point in time (Unix seconds)")->required();
    my_items->callback([&] {
        DirPayloadStore store{fs::path(g.store)};
        auto loaded = load_ledger(g, &store);
        if (!loaded) {
            rc = fail(loaded.error());
            return;
        }
        auto items = query_location_items(loaded.value().state, mi_loc, mi_at);
        if (!items) {
            rc = fail(items.error());
            return;
        }
        if (g.format == "json") {
            std::cout << nlohmann::json(items.value()).dump(2) << '\n';
        } else {
            for (const auto& id : items.value()) std::cout << id << '\n';
        }
    });

    auto* my_temps = location->add_subcommand("my-temps", "temperature history of a location");
    std::string mt_loc;
    std::uint64_t mt_from = 0, mt_to = ~0ull;
    my_temps->add_option("--location", mt_loc, "location id")->required();
    my_temps->add_option("--from", mt_from, "window start (Unix seconds)");
    my_temps->add_option("--to", mt_to, "window end (Unix seconds)");
    my_temps->callback([&] {
        DirPayloadStore store{fs::path(g.store)};
        auto loaded = load_ledger(g, &store);
        if (!loaded) {
            rc = fail(loaded.error());
            return;
        }
        auto temps = query_location_temps(loaded.value().state, mt_loc, mt_from, mt_to);
        if (!temps) {
            rc = fail(temps.error());
            return;
        }
        if (g.format == "json") {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& s : temps.value())
                rows.push_back(
                    {{"ts", s.ts}, {"temp", centi_to_string(s.temp)}, {"temp_centi", s.temp}});
            std::cout << rows.dump(2) << '\n';
        } else if (g.format == "csv") {
            std::cout << "ts,temp_centi\n";
            for (const auto& s : temps.value()) std::cout << s.ts << ',' << s.temp << '\n';
        } else {
            for (const auto& s : temps.value())
                std::cout << s.ts << "  " << centi_to_string(s.temp) << '\n';
        }
    });

    // ---- verify (consumer surface; no key needed) ----
    auto* verify = app.add_subcommand(
        "verify", "audit an item's full custody and temperature history");
    std::string v_item;
    std::uint64_t v_gap = kDefaultGapThreshold;
    std::uint64_t v_as_of = 0;
    verify->add_option("item", v_item, "item id")->required();
    verify->add_option("--gap-threshold", v_gap, "max seconds between readings")
        ->capture_default_str();
    verify->add_option("--as-of", v_as_of, "treat open custody as ending here (Unix seconds)");
    verify->callback([&] {
        rc = cmd_verify(g, v_item, v_gap,
                        v_as_of == 0 ? std::nullopt : std::optional<std::uint64_t>(v_as_of));
    });

    // ---- replay ----
    auto* replay = app.add_subcommand("replay", "validate the ledger and rebuild the state");
    replay->callback([&] { rc = cmd_replay(g); });

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "run a scenario and report latency");
    std::string b_scenario, b_out = "bench_out";
    int b_runs = 1;
    bench->add_option("--scenario", b_scenario, "scenario JSON file (defaults built in)");
    bench->add_option("--runs", b_runs, "number of runs (seed increments per run)")
        ->capture_default_str();
    bench->add_option("--out", b_out, "output directory")->capture_default_str();
    bench->callback([&] { rc = cmd_bench(g, b_scenario, b_runs, b_out); });

    // ---- sensor ----
    auto* sensor = app.add_subcommand("sensor", "trace generation utilities");
    sensor->require_subcommand(1);
    auto* trace_cmd = sensor->add_subcommand("trace", "generate a logger trace as JSON-lines");
    std::string tr_loc, tr_base = "5.00", tr_noise = "0.00", tr_out, tr_excursion;
    std::uint64_t tr_interval = 600, tr_t0 = 0, tr_duration = 0, tr_seed = 42;
    std::string tr_drift = "0.00";
    trace_cmd->add_option("--location", tr_loc, "location id")->required();
    trace_cmd->add_option("--base", tr_base, "base temperature")->capture_default_str();
    trace_cmd->add_option("--noise", tr_noise, "noise amplitude")->capture_default_str();
    trace_cmd->add_option("--drift-per-day", tr_drift, "linear drift per day")
        ->capture_default_str();
    trace_cmd->add_option("--interval", tr_interval, "seconds between readings")
        ->capture_default_str();
    trace_cmd->add_option("--t0", tr_t0, "trace start (Unix seconds)")->required();
    trace_cmd->add_option("--duration", tr_duration, "trace length in seconds")->required();
    trace_cmd->add_option("--seed", tr_seed, "noise seed")->capture_default_str();
    trace_cmd->add_option("--excursion", tr_excursion, excursion_arg_help);
    trace_cmd->add_option("--out", tr_out, "output file (default stdout)");
    trace_cmd->callback([&] {
        auto base = parse_temp_arg(tr_base);
        auto noise = parse_temp_arg(tr_noise);
        auto drift = parse_temp_arg(tr_drift);
        if (!base || !noise || !drift) {
            rc = fail("bad temperature argument");
            return;
        }
        SensorProfile profile{tr_loc, base.value(), noise.value(), tr_interval, drift.value()};
        auto trace = generate_trace(profile, tr_t0, tr_duration, tr_seed);
        if (!trace) {
            rc = fail(trace.error());
            return;
        }
        std::vector<TemperatureReading> readings = std::move(trace).take();
        if (!tr_excursion.empty()) {
            std::istringstream spec_in(tr_excursion);
            std::string s_start, s_end, s_target, s_ramp;
            std::getline(spec_in, s_start, ':');
            std::getline(spec_in, s_end, ':');
            std::getline(spec_in, s_target, ':');
            std::getline(spec_in, s_ramp, ':');
            auto target = parse_temp_arg(s_target);
            if (s_start.empty() || s_end.empty() || s_ramp.empty() || !target) {
                rc = fail("bad --excursion, expected start:end:target:ramp");
                return;
            }
            ExcursionSpec spec{std::stoull(s_start), std::stoull(s_end), target.value(),
                               std::stoull(s_ramp)};
            auto injected = inject_excursion(std::move(readings), spec);
            if (!injected) {
                rc = fail(injected.error());
                return;
            }
            readings = std::move(injected).take();
        }
        if (tr_out.empty()) {
            write_trace_jsonl(std::cout, readings);
        } else {
            std::ofstream out(tr_out, std::ios::trunc);
            write_trace_jsonl(out, readings);
            if (!out) {
                rc = fail("cannot write " + tr_out);
                return;
            }
            std::cout << "wrote " << readings.size() << " readings to " << tr_out << '\n';
        }
    });

    CLI11_PARSE(app, argc, argv);
    return rc;
}

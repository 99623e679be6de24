// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcc/replay.hpp"
#include "bcc/result.hpp"
#include "bcc/sim/simulation.hpp"

namespace bcc::sim {

struct OrgSpec {
    OrgId name;
    std::uint32_t peers = 0;
    std::uint32_t orderers = 0;
};

struct FaultSpec {
    std::uint64_t at_ms = 0;
    NodeId node;  // empty for heal
    FaultCmd cmd;
};

struct WorkloadSpec {
    std::uint32_t tx_count = 500;
    std::uint64_t tx_duration_s = 44;
    std::uint32_t view_count = 500;
    std::uint64_t view_duration_s = 44;
    std::vector<LocationId> locations = {"FRIDGE-1"};
    // The prologue (locations, sensor bindings, the item) must commit
    // before sensors may submit, so the workload starts just past the
    // first block interval.
    std::uint64_t start_ms = 11500;
};

/// A complete experiment: node roster, ordering policy, faults, workload
/// and the RNG seed that pins every random draw.
struct Scenario {
    std::string name = "default";
    std::uint64_t seed = 42;
    std::uint64_t base_time = 1700000000;
    ConsensusConfig consensus;
    std::vector<OrgSpec> orgs = {{"org1", 2, 1}, {"org2", 0, 1}, {"org3", 0, 1}, {"org4", 0, 1}};
    WorkloadSpec workload;
    std::vector<FaultSpec> faults;
    std::uint64_t run_until_s = 0;  // 0: derived from workload and faults

    std::uint32_t orderer_count() const {
        std::uint32_t n = 0;
        for (const auto& org : orgs) n += org.orderers;
        return n;
    }
    std::uint32_t peer_count() const {
        std::uint32_t n = 0;
        for (const auto& org : orgs) n += org.peers;
        return n;
    }

    std::uint64_t effective_run_until_ms() const {
        if (run_until_s > 0) return run_until_s * 1000;
        std::uint64_t end = workload.start_ms +
                            std::max(workload.tx_duration_s, workload.view_duration_s) * 1000;
        for (const auto& fault : faults) end = std::max(end, fault.at_ms);
        return end + 12 * consensus.interval_ms() + 60000;
    }

    Result<void> validate() const {
        std::uint32_t n = orderer_count();
        if (n == 0) return Error(Err::ScenarioError, "no orderers");
        if (peer_count() == 0) return Error(Err::ScenarioError, "no peers");
        if (consensus.quorum != 0 && consensus.quorum < n / 2 + 1)
            return Error(Err::ScenarioError, "quorum below majority");
        if (consensus.quorum > n) return Error(Err::ScenarioError, "quorum above orderer count");
        if (consensus.block_interval_s == 0)
            return Error(Err::ScenarioError, "block interval must be positive");
        if (consensus.pow_difficulty < 0 || consensus.pow_difficulty > 24)
            return Error(Err::ScenarioError, "difficulty out of range");
        if (workload.locations.empty()) return Error(Err::ScenarioError, "no workload locations");
        for (const auto& fault : faults)
            if (fault.cmd.kind != FaultCmd::Kind::Heal && fault.node.empty())
                return Error(Err::ScenarioError, "fault without a node");
        return {};
    }
};

inline Result<Scenario> scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    try {
        s.name = j.value("name", s.name);
        s.seed = j.value("seed", s.seed);
        s.base_time = j.value("base_time", s.base_time);
        if (j.contains("consensus")) {
            const auto& c = j.at("consensus");
            std::string mode = c.value("mode", "poa");
            if (mode == "poa") s.consensus.mode = ConsensusMode::PoA;
            else if (mode == "pow") s.consensus.mode = ConsensusMode::PoW;
            else return Error(Err::ScenarioError, "unknown consensus mode " + mode);
            s.consensus.block_interval_s = c.value("block_interval_s", s.consensus.block_interval_s);
            s.consensus.batch_max = c.value("batch_max", s.consensus.batch_max);
            s.consensus.quorum = c.value("quorum", s.consensus.quorum);
            s.consensus.pow_difficulty = c.value("pow_difficulty", s.consensus.pow_difficulty);
            s.consensus.ms_per_attempt = c.value("ms_per_attempt", s.consensus.ms_per_attempt);
        }
        if (j.contains("orgs")) {
            s.orgs.clear();
            for (const auto& o : j.at("orgs"))
                s.orgs.push_back(OrgSpec{o.at("name").get<std::string>(), o.value("peers", 0u),
                                         o.value("orderers", 0u)});
        }
        if (j.contains("workload")) {
            const auto& w = j.at("workload");
            s.workload.tx_count = w.value("tx_count", s.workload.tx_count);
            s.workload.tx_duration_s = w.value("tx_duration_s", s.workload.tx_duration_s);
            s.workload.view_count = w.value("view_count", s.workload.view_count);
            s.workload.view_duration_s = w.value("view_duration_s", s.workload.view_duration_s);
            s.workload.start_ms = w.value("start_ms", s.workload.start_ms);
            if (w.contains("locations"))
                s.workload.locations = w.at("locations").get<std::vector<std::string>>();
        }
        if (j.contains("faults")) {
            for (const auto& f : j.at("faults")) {
                FaultSpec spec;
                spec.at_ms = f.at("at_ms").get<std::uint64_t>();
                spec.node = f.value("node", "");
                std::string kind = f.at("kind").get<std::string>();
                if (kind == "crash") spec.cmd.kind = FaultCmd::Kind::Crash;
                else if (kind == "recover") spec.cmd.kind = FaultCmd::Kind::Recover;
                else if (kind == "partition") spec.cmd.kind = FaultCmd::Kind::Partition;
                else if (kind == "heal") spec.cmd.kind = FaultCmd::Kind::Heal;
                else return Error(Err::ScenarioError, "unknown fault kind " + kind);
                spec.cmd.group = f.value("group", 1);
                s.faults.push_back(std::move(spec));
            }
        }
        s.run_until_s = j.value("run_until_s", s.run_until_s);
    } catch (const nlohmann::json::exception& e) {
        return Error(Err::ScenarioError, e.what());
    }
    auto valid = s.validate();
    if (!valid) return valid.error();
    return s;
}

inline Result<Scenario> load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Error(Err::IoError, "cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return Error(Err::ScenarioError, "invalid JSON in " + path);
    return scenario_from_json(j);
}

// ---------------------------------------------------------------------------

/// Deterministic actor keys for a scenario, derived by role label.
struct ScenarioKeys {
    KeyPair admin;
    std::vector<KeyPair> sensors;  // one per workload location

    static ScenarioKeys derive(const Scenario& s) {
        ScenarioKeys keys{KeyPair::derive("admin#" + s.name), {}};
        for (const auto& loc : s.workload.locations)
            keys.sensors.push_back(KeyPair::derive("sensor#" + loc));
        return keys;
    }
};

struct BenchSummary {
    std::size_t submitted = 0;
    std::size_t committed = 0;
    std::size_t rejected = 0;
    std::size_t unresolved = 0;
    double mean_submit_ms = 0;
    std::uint64_t max_submit_ms = 0;
    std::size_t views = 0;
    double mean_view_ms = 0;
    std::uint64_t max_view_ms = 0;

    double submit_view_ratio() const {
        return mean_view_ms > 0 ? mean_submit_ms / mean_view_ms : 0;
    }

    std::string to_string() const {
        std::ostringstream out;
        out << "submitted=" << submitted << " committed=" << committed
            << " rejected=" << rejected << " unresolved=" << unresolved << '\n';
        out << "submit latency: mean=" << mean_submit_ms / 1000.0
            << " s, max=" << max_submit_ms / 1000.0 << " s\n";
        out << "view latency:   mean=" << mean_view_ms / 1000.0
            << " s, max=" << max_view_ms / 1000.0 << " s\n";
        out << "submit/view mean ratio: " << submit_view_ratio() << "x\n";
        return out.str();
    }
};

struct RunResult {
    std::unique_ptr<Simulation> sim;
    std::string latency_csv;
    std::string commit_log;
    std::string state_root;  // first peer's final root
    bool roots_agree = true;
    BenchSummary summary;
};

inline BenchSummary summarize(const Simulation& sim) {
    BenchSummary s;
    double submit_total = 0;
    std::size_t submit_n = 0;
    for (const auto& r : sim.receipts()) {
        ++s.submitted;
        if (r.committed_ms && r.accepted_ms) {
            ++s.committed;
            std::uint64_t latency = *r.committed_ms - *r.accepted_ms;
            submit_total += static_cast<double>(latency);
            ++submit_n;
            s.max_submit_ms = std::max(s.max_submit_ms, latency);
        } else if (r.error) {
            ++s.rejected;
        } else {
            ++s.unresolved;
        }
    }
    if (submit_n > 0) s.mean_submit_ms = submit_total / static_cast<double>(submit_n);
    double view_total = 0;
    for (const auto& v : sim.views()) {
        if (v.error) continue;
        ++s.views;
        view_total += static_cast<double>(v.latency_ms());
        s.max_view_ms = std::max(s.max_view_ms, v.latency_ms());
    }
    if (s.views > 0) s.mean_view_ms = view_total / static_cast<double>(s.views);
    return s;
}

inline std::string latency_csv(const Simulation& sim) {
    std::string out = "tx_id,kind,accepted_ms,committed_ms\n";
    for (const auto& r : sim.receipts()) {
        out += 't' + std::to_string(r.seq);
        out += ',';
        out += r.kind;
        out += ',';
        if (r.accepted_ms) out += std::to_string(*r.accepted_ms);
        out += ',';
        if (r.committed_ms) out += std::to_string(*r.committed_ms);
        else if (r.error) out += err_name(*r.error);
        out += '\n';
    }
    for (const auto& v : sim.views()) {
        out += 'v' + std::to_string(v.seq);
        out += ",View,";
        out += std::to_string(v.issued_ms);
        out += ',';
        if (v.error) out += err_name(*v.error);
        else out += std::to_string(v.answered_ms);
        out += '\n';
    }
    return out;
}

/// Builds the network, seeds the ledger with the genesis deploy, runs the
/// standing prologue (locations, item, first custody hop), the submit and
/// view workload, and any scripted faults, then drains.
inline Result<RunResult> run_scenario(const Scenario& scenario) {
    auto valid = scenario.validate();
    if (!valid) return valid.error();
    ScenarioKeys keys = ScenarioKeys::derive(scenario);

    auto sim = std::make_unique<Simulation>(scenario.consensus, scenario.base_time, scenario.seed);
    for (const auto& org : scenario.orgs) {
        for (std::uint32_t i = 0; i < org.peers; ++i) sim->add_node(org.name, NodeKind::Peer);
        for (std::uint32_t i = 0; i < org.orderers; ++i) sim->add_node(org.name, NodeKind::Orderer);
    }
    auto genesis = make_genesis(keys.admin, scenario.base_time);
    if (!genesis) return genesis.error();
    auto preloaded = sim->preload(Chain::from_genesis(std::move(genesis).take()));
    if (!preloaded) return preloaded.error();
    sim->start(scenario.effective_run_until_ms());

    std::vector<NodeId> peers = sim->peer_ids();
    const NodeId& entry_peer = peers.front();

    // Prologue: manufacturer, monitored locations with bound sensors, one
    // registered lot moved into the first monitored location.
    std::uint64_t admin_nonce = 1;  // genesis deploy used nonce 1
    std::uint64_t at_ms = 1;
    auto submit_admin = [&](TxPayload payload) -> Result<void> {
        auto tx = sign_tx(keys.admin, std::move(payload), ++admin_nonce);
        if (!tx) return tx.error();
        sim->schedule_submit(at_ms++, std::move(tx).take(), entry_peer);
        return {};
    };
    if (auto r = submit_admin(AddLocationPayload{"MFG-1", LocationKind::Manufacturer, {}}); !r)
        return r.error();
    for (std::size_t i = 0; i < scenario.workload.locations.size(); ++i) {
        if (auto r = submit_admin(AddLocationPayload{scenario.workload.locations[i],
                                                     LocationKind::Refrigerator,
                                                     keys.sensors[i].id()});
            !r)
            return r.error();
    }
    RegisterItemPayload lot;
    lot.item_id = "LOT-1";
    lot.manufacturer = "MFG-1";
    lot.registered_at = scenario.base_time;
    if (auto r = submit_admin(lot); !r) return r.error();
    if (auto r = submit_admin(ItemDeparturePayload{"LOT-1", "MFG-1", scenario.base_time + 1}); !r)
        return r.error();
    if (auto r = submit_admin(ItemArrivalPayload{"LOT-1", scenario.workload.locations.front(),
                                                 scenario.base_time + 2});
        !r)
        return r.error();

    // Submit workload: temperature readings, safely in range. Reading
    // timestamps are a per-location counter and values derive from the
    // index, so the seed steers timing only and the final state is the
    // same whatever the seed.
    std::size_t location_count = scenario.workload.locations.size();
    std::vector<std::uint64_t> sensor_nonce(location_count, 0);
    std::vector<std::uint64_t> reading_ts(location_count, scenario.base_time + 10);
    std::uint64_t tx_window_ms = scenario.workload.tx_duration_s * 1000;
    for (std::uint32_t i = 0; i < scenario.workload.tx_count; ++i) {
        std::size_t slot = i % location_count;
        TemperaturePayload reading;
        reading.location_id = scenario.workload.locations[slot];
        reading.ts = ++reading_ts[slot];
        reading.temp = static_cast<CentiCelsius>(kDefaultSafeMin + 100 + (i * 37) % 400);
        auto tx = sign_tx(keys.sensors[slot], reading, ++sensor_nonce[slot]);
        if (!tx) return tx.error();
        std::uint64_t submit_at =
            scenario.workload.start_ms +
            (scenario.workload.tx_count > 1
                 ? i * tx_window_ms / (scenario.workload.tx_count - 1)
                 : 0);
        sim->schedule_submit(submit_at, std::move(tx).take(),
                             peers[slot % peers.size()]);
    }

    // View workload: location temperature reads straight off peer state.
    std::uint64_t view_window_ms = scenario.workload.view_duration_s * 1000;
    for (std::uint32_t j = 0; j < scenario.workload.view_count; ++j) {
        std::size_t slot = j % location_count;
        LocationId loc = scenario.workload.locations[slot];
        std::uint64_t from = scenario.base_time;
        std::uint64_t to = scenario.base_time + 10 + scenario.workload.tx_count + 1;
        std::uint64_t view_at =
            scenario.workload.start_ms +
            (scenario.workload.view_count > 1
                 ? j * view_window_ms / (scenario.workload.view_count - 1)
                 : 0) +
            1;
        sim->schedule_view(view_at, peers[j % peers.size()],
                           [loc, from, to](const ContractState& state) {
                               (void)query_location_temps(state, loc, from, to);
                           });
    }

    for (const auto& fault : scenario.faults)
        sim->schedule_fault(fault.at_ms, fault.node, fault.cmd);

    sim->run_to_end();

    RunResult result;
    result.latency_csv = latency_csv(*sim);
    result.commit_log = sim->commit_log();
    result.summary = summarize(*sim);
    Hash32 first_root;
    bool first = true;
    for (const auto& node : sim->nodes()) {
        if (node.crashed) continue;
        Hash32 root = state_root(node.state);
        if (first) {
            first_root = root;
            result.state_root = root.hex();
            first = false;
        } else if (root != first_root) {
            result.roots_agree = false;
        }
    }
    result.sim = std::move(sim);
    return result;
}

}  // namespace bcc::sim

// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bcc/hash.hpp"
#include "bcc/keys.hpp"
#include "bcc/payload_store.hpp"
#include "bcc/result.hpp"
#include "bcc/serial.hpp"
#include "bcc/tx.hpp"

namespace bcc {

struct Location {
    LocationId id;
    LocationKind kind = LocationKind::Refrigerator;
    bool active = true;  // inactive locations accept no new arrivals or readings
};

struct Item {
    ItemId id;
    LocationId manufacturer;
    CentiCelsius safe_min = kDefaultSafeMin;
    CentiCelsius safe_max = kDefaultSafeMax;
    std::uint64_t registered_at = 0;
};

struct CustodyInterval {
    LocationId location;
    std::uint64_t arrived_at = 0;
    std::optional<std::uint64_t> departed_at;  // nullopt while custody is open

    bool open() const { return !departed_at.has_value(); }
    auto operator<=>(const CustodyInterval&) const = default;
};

struct TempSample {
    std::uint64_t ts = 0;
    CentiCelsius temp = 0;
    auto operator<=>(const TempSample&) const = default;
};

/// The world state of the cold-chain contract. A value type: handlers copy,
/// mutate the copy and return it, so a failed transaction can never leave a
/// half-applied state behind.
struct ContractState {
    std::set<PublicKeyId> admins;
    std::map<LocationId, Location> locations;
    std::map<ItemId, Item> items;
    std::map<ItemId, std::vector<CustodyInterval>> custody;
    std::map<LocationId, std::vector<TempSample>> temps;
    std::map<PublicKeyId, LocationId> sensor_bindings;
    std::map<PublicKeyId, std::uint64_t> last_nonce;

    bool deployed() const { return !admins.empty(); }
    bool is_admin(const PublicKeyId& key) const { return admins.count(key) > 0; }

    std::optional<LocationId> sensor_location(const PublicKeyId& key) const {
        auto it = sensor_bindings.find(key);
        if (it == sensor_bindings.end()) return std::nullopt;
        return it->second;
    }

    // Admin, or the sensor key bound to exactly this location.
    bool may_act_for(const PublicKeyId& key, const LocationId& location) const {
        if (is_admin(key)) return true;
        auto bound = sensor_location(key);
        return bound && *bound == location;
    }

    std::optional<std::size_t> open_interval_index(const ItemId& item) const {
        auto it = custody.find(item);
        if (it == custody.end() || it->second.empty()) return std::nullopt;
        if (it->second.back().open()) return it->second.size() - 1;
        return std::nullopt;
    }

    std::uint64_t last_item_event_ts(const ItemId& item) const {
        std::uint64_t last = 0;
        auto reg = items.find(item);
        if (reg != items.end()) last = reg->second.registered_at;
        auto it = custody.find(item);
        if (it != custody.end())
            for (const auto& iv : it->second) {
                last = std::max(last, iv.arrived_at);
                if (iv.departed_at) last = std::max(last, *iv.departed_at);
            }
        return last;
    }

    std::uint64_t last_reading_ts(const LocationId& location) const {
        auto it = temps.find(location);
        if (it == temps.end() || it->second.empty()) return 0;
        return it->second.back().ts;
    }

    /// Latest timestamp known to the state, used as "now" for open custody
    /// intervals (wall clock would break replay determinism).
    std::uint64_t latest_known_ts() const {
        std::uint64_t last = 0;
        for (const auto& [id, item] : items) last = std::max(last, item.registered_at);
        for (const auto& [id, intervals] : custody)
            for (const auto& iv : intervals) {
                last = std::max(last, iv.arrived_at);
                if (iv.departed_at) last = std::max(last, *iv.departed_at);
            }
        for (const auto& [loc, series] : temps)
            if (!series.empty()) last = std::max(last, series.back().ts);
        return last;
    }
};

/// Canonical state bytes; their hash is the state root asserted by the
/// replay and determinism checks.
inline Bytes serialize_state(const ContractState& state) {
    Writer w;
    w.u32(static_cast<std::uint32_t>(state.admins.size()));
    for (const auto& admin : state.admins) w.raw(admin.bytes);
    w.u32(static_cast<std::uint32_t>(state.locations.size()));
    for (const auto& [id, loc] : state.locations) {
        w.str(id, kMaxIdLen, "location_id");
        w.u8(static_cast<std::uint8_t>(loc.kind));
        w.u8(loc.active ? 1 : 0);
    }
    w.u32(static_cast<std::uint32_t>(state.items.size()));
    for (const auto& [id, item] : state.items) {
        w.str(id, kMaxIdLen, "item_id");
        w.str(item.manufacturer, kMaxIdLen, "manufacturer");
        w.i32(item.safe_min);
        w.i32(item.safe_max);
        w.u64(item.registered_at);
    }
    w.u32(static_cast<std::uint32_t>(state.custody.size()));
    for (const auto& [id, intervals] : state.custody) {
        w.str(id, kMaxIdLen, "item_id");
        w.u32(static_cast<std::uint32_t>(intervals.size()));
        for (const auto& iv : intervals) {
            w.str(iv.location, kMaxIdLen, "location_id");
            w.u64(iv.arrived_at);
            w.u8(iv.departed_at ? 1 : 0);
            w.u64(iv.departed_at.value_or(0));
        }
    }
    w.u32(static_cast<std::uint32_t>(state.temps.size()));
    for (const auto& [loc, series] : state.temps) {
        w.str(loc, kMaxIdLen, "location_id");
        w.u32(static_cast<std::uint32_t>(series.size()));
        for (const auto& sample : series) {
            w.u64(sample.ts);
            w.i32(sample.temp);
        }
    }
    w.u32(static_cast<std::uint32_t>(state.sensor_bindings.size()));
    for (const auto& [key, loc] : state.sensor_bindings) {
        w.raw(key.bytes);
        w.str(loc, kMaxIdLen, "location_id");
    }
    w.u32(static_cast<std::uint32_t>(state.last_nonce.size()));
    for (const auto& [key, nonce] : state.last_nonce) {
        w.raw(key.bytes);
        w.u64(nonce);
    }
    return std::move(w).take_unchecked();
}

inline Hash32 state_root(const ContractState& state) {
    return hash_bytes(serialize_state(state));
}

/// Known actors (admins plus bound sensor keys) and their last nonces.
inline KeyRegistry build_registry(const ContractState& state) {
    KeyRegistry registry;
    auto nonce_of = [&state](const PublicKeyId& key) {
        auto it = state.last_nonce.find(key);
        return it == state.last_nonce.end() ? 0 : it->second;
    };
    for (const auto& admin : state.admins)
        registry.emplace(admin, RegistryEntry{admin, nonce_of(admin)});
    for (const auto& [key, loc] : state.sensor_bindings)
        registry.emplace(key, RegistryEntry{key, nonce_of(key)});
    return registry;
}

/// verify_tx against the registry this state implies. The genesis deploy
/// bootstraps itself: an undeployed state accepts only a self-signed
/// Deploy from the named deployer.
inline Result<bool> verify_against_state(const ContractState& state, const SignedTransaction& tx) {
    if (!state.deployed()) {
        const auto* deploy = std::get_if<DeployPayload>(&tx.payload);
        if (deploy == nullptr || deploy->deployer != tx.submitter)
            return Error(Err::UnknownSubmitter, tx.submitter.hex());
        if (tx.nonce == 0) return false;
        return tx_signature_valid(tx);
    }
    return verify_tx(tx, build_registry(state));
}

// ---------------------------------------------------------------------------
// Mutating handlers. Each returns the successor state or an error and
// touches nothing else.

inline Result<ContractState> deploy(const ContractState& state, const PublicKeyId& deployer) {
    if (state.deployed()) return Error(Err::DuplicateDeploy);
    ContractState next = state;
    next.admins.insert(deployer);
    return next;
}

inline Result<ContractState> add_admin(const ContractState& state, const PublicKeyId& caller,
                                       const PublicKeyId& new_admin) {
    if (!state.is_admin(caller)) return Error(Err::Unauthorized);
    if (state.is_admin(new_admin)) return Error(Err::DuplicateId, "already an admin");
    ContractState next = state;
    next.admins.insert(new_admin);
    return next;
}

inline Result<ContractState> add_location(const ContractState& state, const PublicKeyId& caller,
                                          const LocationId& id, LocationKind kind,
                                          const std::optional<PublicKeyId>& sensor_key) {
    if (!state.is_admin(caller)) return Error(Err::Unauthorized);
    if (id.empty() || id.size() > kMaxIdLen) return Error(Err::OversizeField, "location_id");
    if (state.locations.count(id)) return Error(Err::DuplicateId, id);
    if (sensor_key && state.sensor_bindings.count(*sensor_key))
        return Error(Err::DuplicateId, "sensor key already bound");
    ContractState next = state;
    next.locations.emplace(id, Location{id, kind, true});
    if (sensor_key) next.sensor_bindings.emplace(*sensor_key, id);
    return next;
}

/// Soft delete: the location stops accepting arrivals and readings but all
/// of its history stays on record.
inline Result<ContractState> remove_location(const ContractState& state, const PublicKeyId& caller,
                                             const LocationId& id) {
    if (!state.is_admin(caller)) return Error(Err::Unauthorized);
    auto it = state.locations.find(id);
    if (it == state.locations.end()) return Error(Err::UnknownLocation, id);
    if (!it->second.active) return Error(Err::InactiveLocation, id);
    ContractState next = state;
    next.locations[id].active = false;
    return next;
}

inline Result<ContractState> register_item(const ContractState& state, const PublicKeyId& caller,
                                           const Item& item) {
    auto loc = state.locations.find(item.manufacturer);
    if (loc == state.locations.end()) return Error(Err::UnknownLocation, item.manufacturer);
    if (!loc->second.active) return Error(Err::InactiveLocation, item.manufacturer);
    if (!state.may_act_for(caller, item.manufacturer)) return Error(Err::Unauthorized);
    if (item.id.empty() || item.id.size() > kMaxIdLen) return Error(Err::OversizeField, "item_id");
    if (state.items.count(item.id)) return Error(Err::DuplicateId, item.id);
    if (item.safe_min >= item.safe_max || item.safe_min < kUltracoldFloor ||
        item.safe_max > kGlobalTempMax)
        return Error(Err::BadRange, "safe range " + centi_to_string(item.safe_min) + ".." +
                                        centi_to_string(item.safe_max));
    ContractState next = state;
    next.items.emplace(item.id, item);
    next.custody[item.id].push_back(CustodyInterval{item.manufacturer, item.registered_at, std::nullopt});
    return next;
}

inline Result<ContractState> record_arrival(const ContractState& state, const PublicKeyId& caller,
                                            const ItemId& item, const LocationId& location,
                                            std::uint64_t ts) {
    if (!state.items.count(item)) return Error(Err::UnknownItem, item);
    auto loc = state.locations.find(location);
    if (loc == state.locations.end()) return Error(Err::UnknownLocation, location);
    if (!loc->second.active) return Error(Err::InactiveLocation, location);
    if (!state.may_act_for(caller, location)) return Error(Err::Unauthorized);
    if (state.open_interval_index(item))
        return Error(Err::CustodyConflict, "item still held elsewhere");
    if (ts <= state.last_item_event_ts(item)) return Error(Err::StaleTimestamp);
    ContractState next = state;
    next.custody[item].push_back(CustodyInterval{location, ts, std::nullopt});
    return next;
}

inline Result<ContractState> record_departure(const ContractState& state, const PublicKeyId& caller,
                                              const ItemId& item, const LocationId& location,
                                              std::uint64_t ts) {
    if (!state.items.count(item)) return Error(Err::UnknownItem, item);
    if (!state.locations.count(location)) return Error(Err::UnknownLocation, location);
    // Departures from inactive locations stay legal so an item cannot be
    // trapped by a removal.
    if (!state.may_act_for(caller, location)) return Error(Err::Unauthorized);
    auto open = state.open_interval_index(item);
    if (!open || state.custody.at(item)[*open].location != location)
        return Error(Err::CustodyConflict, "no open custody at " + location);
    if (ts <= state.custody.at(item)[*open].arrived_at || ts <= state.last_item_event_ts(item))
        return Error(Err::StaleTimestamp);
    ContractState next = state;
    next.custody[item][*open].departed_at = ts;
    return next;
}

/// An out-of-range reading seen while an item is in open custody at the
/// reading's location. Alarms ride on the transaction result; the reading
/// itself is accepted either way.
struct Alarm {
    ItemId item;
    LocationId location;
    std::uint64_t ts = 0;
    CentiCelsius temp = 0;
    CentiCelsius safe_min = 0;
    CentiCelsius safe_max = 0;
};

struct TempAccept {
    ContractState state;
    std::vector<Alarm> alarms;
};

inline Result<TempAccept> record_temperature(const ContractState& state, const PublicKeyId& caller,
                                             const LocationId& location, std::uint64_t ts,
                                             CentiCelsius temp) {
    auto loc = state.locations.find(location);
    if (loc == state.locations.end()) return Error(Err::UnknownLocation, location);
    if (!loc->second.active) return Error(Err::InactiveLocation, location);
    if (!state.may_act_for(caller, location)) return Error(Err::Unauthorized);
    if (ts <= state.last_reading_ts(location)) return Error(Err::StaleTimestamp);
    if (temp < kGlobalTempMin || temp > kGlobalTempMax)
        return Error(Err::OutOfGlobalBounds, centi_to_string(temp));
    TempAccept result;
    result.state = state;
    result.state.temps[location].push_back(TempSample{ts, temp});
    for (const auto& [item_id, intervals] : state.custody) {
        if (intervals.empty() || !intervals.back().open()) continue;
        const CustodyInterval& iv = intervals.back();
        if (iv.location != location || iv.arrived_at > ts) continue;
        const Item& item = state.items.at(item_id);
        if (temp < item.safe_min || temp > item.safe_max)
            result.alarms.push_back(
                Alarm{item_id, location, ts, temp, item.safe_min, item.safe_max});
    }
    return result;
}

/// Folds a stored dump into the location's series exactly as if each
/// reading had been submitted individually, while the chain carries only
/// the one reference transaction.
inline Result<TempAccept> ingest_dump(const ContractState& state, const PublicKeyId& caller,
                                      const LoggerDumpRefPayload& ref, const PayloadStore& store) {
    auto dump = get_dump(store, ref.dump_hash);
    if (!dump) return dump.error();
    const LoggerDump& d = dump.value();
    if (d.location != ref.location_id || d.readings.size() != ref.count ||
        (ref.count > 0 && (d.readings.front().ts != ref.first_ts ||
                           d.readings.back().ts != ref.last_ts)))
        return Error(Err::CorruptPayload, "dump reference does not match stored dump");
    TempAccept result;
    result.state = state;
    for (const auto& reading : d.readings) {
        auto step = record_temperature(result.state, caller, reading.location, reading.ts,
                                       reading.temp);
        if (!step) return step.error();
        result.state = std::move(step.value().state);
        for (auto& alarm : step.value().alarms) result.alarms.push_back(std::move(alarm));
    }
    return result;
}

// ---------------------------------------------------------------------------

/// Applies one verified transaction. All-or-nothing: on error the caller's
/// state is untouched. `store` is only needed for LoggerDumpRef payloads.
inline Result<TempAccept> apply_tx(const ContractState& state, const SignedTransaction& tx,
                                   const PayloadStore* store = nullptr) {
    const PublicKeyId& caller = tx.submitter;
    Result<TempAccept> outcome = [&]() -> Result<TempAccept> {
        if (const auto* p = std::get_if<DeployPayload>(&tx.payload)) {
            if (p->deployer != caller) return Error(Err::Unauthorized, "deploy must be self-signed");
            auto next = deploy(state, p->deployer);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<RegisterItemPayload>(&tx.payload)) {
            Item item{p->item_id, p->manufacturer, p->safe_min, p->safe_max, p->registered_at};
            auto next = register_item(state, caller, item);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<AddAdminPayload>(&tx.payload)) {
            auto next = add_admin(state, caller, p->new_admin);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<AddLocationPayload>(&tx.payload)) {
            auto next = add_location(state, caller, p->location_id, p->kind, p->sensor_key);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<RemoveLocationPayload>(&tx.payload)) {
            auto next = remove_location(state, caller, p->location_id);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<ItemArrivalPayload>(&tx.payload)) {
            auto next = record_arrival(state, caller, p->item_id, p->location_id, p->ts);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<ItemDeparturePayload>(&tx.payload)) {
            auto next = record_departure(state, caller, p->item_id, p->location_id, p->ts);
            if (!next) return next.error();
            return TempAccept{std::move(next).take(), {}};
        }
        if (const auto* p = std::get_if<TemperaturePayload>(&tx.payload)) {
            return record_temperature(state, caller, p->location_id, p->ts, p->temp);
        }
        if (const auto* p = std::get_if<LoggerDumpRefPayload>(&tx.payload)) {
            if (store == nullptr) return Error(Err::Missing, "no payload store attached");
            return ingest_dump(state, caller, *p, *store);
        }
        return Error(Err::MalformedRecord, "unhandled payload kind");
    }();
    if (!outcome) return outcome;
    outcome.value().state.last_nonce[caller] =
        std::max(outcome.value().state.last_nonce[caller], tx.nonce);
    return outcome;
}

// ---------------------------------------------------------------------------
// Queries. Read-only; all run against an immutable state snapshot.

struct MonitoringGap {
    std::uint64_t from = 0;
    std::uint64_t to = 0;
    auto operator<=>(const MonitoringGap&) const = default;
};

struct Excursion {
    std::size_t hop = 0;  // index into the item's custody intervals
    LocationId location;
    std::uint64_t ts = 0;
    CentiCelsius temp = 0;
    auto operator<=>(const Excursion&) const = default;
};

enum class Verdict { SAFE, COMPROMISED, UNKNOWN };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::SAFE: return "SAFE";
        case Verdict::COMPROMISED: return "COMPROMISED";
        case Verdict::UNKNOWN: return "UNKNOWN";
    }
    return "UNKNOWN";
}

struct HopReport {
    CustodyInterval interval;
    std::vector<TempSample> readings;   // readings with arrived_at <= ts < end
    std::vector<MonitoringGap> gaps;    // sub-windows longer than the threshold with no reading
};

struct ItemReport {
    Item item;
    std::vector<HopReport> hops;
    std::vector<Excursion> excursions;
    Verdict verdict = Verdict::UNKNOWN;
    std::uint64_t as_of = 0;
    std::uint64_t gap_threshold = 0;
};

inline constexpr std::uint64_t kDefaultGapThreshold = 600;  // logger cadence: 10 minutes

/// Hop-by-hop history with excursions and monitoring gaps. A reading
/// belongs to a hop iff arrived_at <= ts < departed_at, with open
/// intervals closed off at `as_of` (default: latest timestamp in state).
inline Result<ItemReport> query_item_history(const ContractState& state, const ItemId& item_id,
                                             std::uint64_t gap_threshold = kDefaultGapThreshold,
                                             std::optional<std::uint64_t> as_of = std::nullopt) {
    auto item_it = state.items.find(item_id);
    if (item_it == state.items.end()) return Error(Err::UnknownItem, item_id);
    ItemReport report;
    report.item = item_it->second;
    report.gap_threshold = gap_threshold;
    report.as_of = as_of.value_or(state.latest_known_ts());

    bool any_gap = false;
    bool any_empty_hop = false;
    auto custody_it = state.custody.find(item_id);
    const std::vector<CustodyInterval> no_custody;
    const auto& intervals = custody_it == state.custody.end() ? no_custody : custody_it->second;
    for (std::size_t hop = 0; hop < intervals.size(); ++hop) {
        const CustodyInterval& iv = intervals[hop];
        HopReport hop_report;
        hop_report.interval = iv;
        std::uint64_t window_end = iv.departed_at.value_or(std::max(report.as_of, iv.arrived_at));
        auto series_it = state.temps.find(iv.location);
        if (series_it != state.temps.end()) {
            for (const auto& sample : series_it->second) {
                if (sample.ts < iv.arrived_at) continue;
                bool in_window = iv.departed_at ? sample.ts < *iv.departed_at
                                                : true;  // open custody: no upper bound yet
                if (!in_window) continue;
                hop_report.readings.push_back(sample);
                if (sample.temp < report.item.safe_min || sample.temp > report.item.safe_max)
                    report.excursions.push_back(
                        Excursion{hop, iv.location, sample.ts, sample.temp});
            }
        }
        std::uint64_t prev = iv.arrived_at;
        for (const auto& sample : hop_report.readings) {
            if (sample.ts - prev > gap_threshold)
                hop_report.gaps.push_back(MonitoringGap{prev, sample.ts});
            prev = sample.ts;
        }
        if (window_end > prev && window_end - prev > gap_threshold)
            hop_report.gaps.push_back(MonitoringGap{prev, window_end});
        if (hop_report.readings.empty()) any_empty_hop = true;
        if (!hop_report.gaps.empty()) any_gap = true;
        report.hops.push_back(std::move(hop_report));
    }
    if (!report.excursions.empty())
        report.verdict = Verdict::COMPROMISED;
    else if (any_gap || any_empty_hop || report.hops.empty())
        report.verdict = Verdict::UNKNOWN;
    else
        report.verdict = Verdict::SAFE;
    return report;
}

struct Violations {
    std::vector<Excursion> excursions;
    std::vector<MonitoringGap> gaps;
};

/// Same excursions and gaps the item report carries, as a flat list.
inline Result<Violations> detect_violations(const ContractState& state, const ItemId& item_id,
                                            std::uint64_t gap_threshold = kDefaultGapThreshold,
                                            std::optional<std::uint64_t> as_of = std::nullopt) {
    auto report = query_item_history(state, item_id, gap_threshold, as_of);
    if (!report) return report.error();
    Violations v;
    v.excursions = report.value().excursions;
    for (const auto& hop : report.value().hops)
        for (const auto& gap : hop.gaps) v.gaps.push_back(gap);
    return v;
}

/// Items whose custody interval covers `at` at this location.
inline Result<std::vector<ItemId>> query_location_items(const ContractState& state,
                                                        const LocationId& location,
                                                        std::uint64_t at) {
    if (!state.locations.count(location)) return Error(Err::UnknownLocation, location);
    std::vector<ItemId> out;
    for (const auto& [item_id, intervals] : state.custody)
        for (const auto& iv : intervals) {
            if (iv.location != location) continue;
            bool covers = iv.arrived_at <= at && (iv.open() || at < *iv.departed_at);
            if (covers) {
                out.push_back(item_id);
                break;
            }
        }
    return out;
}

/// All readings with from <= ts <= to at the location, time-ordered.
inline Result<std::vector<TempSample>> query_location_temps(const ContractState& state,
                                                            const LocationId& location,
                                                            std::uint64_t from, std::uint64_t to) {
    if (!state.locations.count(location)) return Error(Err::UnknownLocation, location);
    if (from > to) return Error(Err::BadRange, "from > to");
    std::vector<TempSample> out;
    auto it = state.temps.find(location);
    if (it == state.temps.end()) return out;
    for (const auto& sample : it->second)
        if (sample.ts >= from && sample.ts <= to) out.push_back(sample);
    return out;
}

}  // namespace bcc

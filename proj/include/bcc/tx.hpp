// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "bcc/hash.hpp"
#include "bcc/keys.hpp"
#include "bcc/result.hpp"
#include "bcc/serial.hpp"

namespace bcc {

using LocationId = std::string;  // ≤ 64 bytes
using ItemId = std::string;      // ≤ 64 bytes

// Signed centi-degrees Celsius. Integer on purpose: hashed payloads must
// be bit-deterministic, so no floating point ever reaches the chain.
using CentiCelsius = std::int32_t;

inline constexpr CentiCelsius kGlobalTempMin = -12000;  // -120.00 C
inline constexpr CentiCelsius kGlobalTempMax = 6000;    //  +60.00 C
inline constexpr CentiCelsius kUltracoldFloor = -9000;  //  -90.00 C
inline constexpr CentiCelsius kDefaultSafeMin = 200;    //   +2.00 C
inline constexpr CentiCelsius kDefaultSafeMax = 800;    //   +8.00 C

/// Renders centi-degrees as a decimal string with two fraction digits,
/// e.g. 500 -> "5.00", -50 -> "-0.50".
inline std::string centi_to_string(CentiCelsius t) {
    long long abs_t = t < 0 ? -static_cast<long long>(t) : t;
    std::string s = t < 0 ? "-" : "";
    s += std::to_string(abs_t / 100);
    s += '.';
    s += static_cast<char>('0' + (abs_t % 100) / 10);
    s += static_cast<char>('0' + (abs_t % 100) % 10);
    return s;
}

/// Parses "5", "5.1" or "-0.25" into centi-degrees; rejects more than two
/// fraction digits (they would not round-trip).
inline std::optional<CentiCelsius> parse_centi(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    long long whole = 0;
    std::size_t digits = 0;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i, ++digits)
        whole = whole * 10 + (s[i] - '0');
    if (digits == 0 || whole > 1000000) return std::nullopt;
    long long frac = 0;
    if (i < s.size()) {
        if (s[i] != '.') return std::nullopt;
        ++i;
        std::size_t frac_digits = 0;
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i, ++frac_digits) {
            if (frac_digits >= 2) return std::nullopt;
            frac = frac * 10 + (s[i] - '0');
        }
        if (frac_digits == 0) return std::nullopt;
        if (frac_digits == 1) frac *= 10;
    }
    if (i != s.size()) return std::nullopt;
    long long centi = whole * 100 + frac;
    return static_cast<CentiCelsius>(neg ? -centi : centi);
}

/// One sensor reading, as exchanged with traces and logger dumps.
struct TemperatureReading {
    LocationId location;
    std::uint64_t ts = 0;
    CentiCelsius temp = 0;

    auto operator<=>(const TemperatureReading&) const = default;
};

enum class LocationKind : std::uint8_t {
    ColdRoom = 0,
    FreezerRoom = 1,
    Freezer = 2,
    Refrigerator = 3,
    ColdBox = 4,
    RefrigeratedTruck = 5,
    VaccineCarrier = 6,
    HealthCenter = 7,
    Airport = 8,
    CentralStore = 9,
    RegionalStore = 10,
    Manufacturer = 11,
};

inline const char* location_kind_name(LocationKind kind) {
    switch (kind) {
        case LocationKind::ColdRoom: return "ColdRoom";
        case LocationKind::FreezerRoom: return "FreezerRoom";
        case LocationKind::Freezer: return "Freezer";
        case LocationKind::Refrigerator: return "Refrigerator";
        case LocationKind::ColdBox: return "ColdBox";
        case LocationKind::RefrigeratedTruck: return "RefrigeratedTruck";
        case LocationKind::VaccineCarrier: return "VaccineCarrier";
        case LocationKind::HealthCenter: return "HealthCenter";
        case LocationKind::Airport: return "Airport";
        case LocationKind::CentralStore: return "CentralStore";
        case LocationKind::RegionalStore: return "RegionalStore";
        case LocationKind::Manufacturer: return "Manufacturer";
    }
    return "Unknown";
}

inline std::optional<LocationKind> location_kind_from_name(const std::string& name) {
    for (int k = 0; k <= 11; ++k) {
        auto kind = static_cast<LocationKind>(k);
        if (name == location_kind_name(kind)) return kind;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Transaction payload union. Tag bytes are part of the wire format and
// must never be renumbered.

struct DeployPayload {
    PublicKeyId deployer;
    static constexpr std::uint8_t kTag = 0;
};

struct RegisterItemPayload {
    ItemId item_id;
    LocationId manufacturer;
    CentiCelsius safe_min = kDefaultSafeMin;
    CentiCelsius safe_max = kDefaultSafeMax;
    std::uint64_t registered_at = 0;
    static constexpr std::uint8_t kTag = 1;
};

struct AddAdminPayload {
    PublicKeyId new_admin;
    static constexpr std::uint8_t kTag = 2;
};

struct AddLocationPayload {
    LocationId location_id;
    LocationKind kind = LocationKind::Refrigerator;
    std::optional<PublicKeyId> sensor_key;
    static constexpr std::uint8_t kTag = 3;
};

struct RemoveLocationPayload {
    LocationId location_id;
    static constexpr std::uint8_t kTag = 4;
};

struct ItemArrivalPayload {
    ItemId item_id;
    LocationId location_id;
    std::uint64_t ts = 0;
    static constexpr std::uint8_t kTag = 5;
};

struct ItemDeparturePayload {
    ItemId item_id;
    LocationId location_id;
    std::uint64_t ts = 0;
    static constexpr std::uint8_t kTag = 6;
};

struct TemperaturePayload {
    LocationId location_id;
    std::uint64_t ts = 0;
    CentiCelsius temp = 0;
    static constexpr std::uint8_t kTag = 7;
};

struct LoggerDumpRefPayload {
    LocationId location_id;
    Hash32 dump_hash;
    std::uint64_t first_ts = 0;
    std::uint64_t last_ts = 0;
    std::uint32_t count = 0;
    static constexpr std::uint8_t kTag = 8;
};

using TxPayload = std::variant<DeployPayload, RegisterItemPayload, AddAdminPayload,
                               AddLocationPayload, RemoveLocationPayload, ItemArrivalPayload,
                               ItemDeparturePayload, TemperaturePayload, LoggerDumpRefPayload>;

inline const char* payload_kind_name(const TxPayload& payload) {
    switch (payload.index()) {
        case 0: return "Deploy";
        case 1: return "RegisterItem";
        case 2: return "AddAdmin";
        case 3: return "AddLocation";
        case 4: return "RemoveLocation";
        case 5: return "ItemArrival";
        case 6: return "ItemDeparture";
        case 7: return "TemperatureReading";
        case 8: return "LoggerDumpRef";
    }
    return "Unknown";
}

/// Canonical payload bytes: tag byte, then the fields in declared order.
inline Result<Bytes> serialize_payload(const TxPayload& payload) {
    Writer w;
    std::visit(
        [&w](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            w.u8(P::kTag);
            if constexpr (std::is_same_v<P, DeployPayload>) {
                w.raw(p.deployer.bytes);
            } else if constexpr (std::is_same_v<P, RegisterItemPayload>) {
                w.str(p.item_id, kMaxIdLen, "item_id");
                w.str(p.manufacturer, kMaxIdLen, "manufacturer");
                w.i32(p.safe_min);
                w.i32(p.safe_max);
                w.u64(p.registered_at);
            } else if constexpr (std::is_same_v<P, AddAdminPayload>) {
                w.raw(p.new_admin.bytes);
            } else if constexpr (std::is_same_v<P, AddLocationPayload>) {
                w.str(p.location_id, kMaxIdLen, "location_id");
                w.u8(static_cast<std::uint8_t>(p.kind));
                w.u8(p.sensor_key ? 1 : 0);
                if (p.sensor_key) w.raw(p.sensor_key->bytes);
            } else if constexpr (std::is_same_v<P, RemoveLocationPayload>) {
                w.str(p.location_id, kMaxIdLen, "location_id");
            } else if constexpr (std::is_same_v<P, ItemArrivalPayload>) {
                w.str(p.item_id, kMaxIdLen, "item_id");
                w.str(p.location_id, kMaxIdLen, "location_id");
                w.u64(p.ts);
            } else if constexpr (std::is_same_v<P, ItemDeparturePayload>) {
                w.str(p.item_id, kMaxIdLen, "item_id");
                w.str(p.location_id, kMaxIdLen, "location_id");
                w.u64(p.ts);
            } else if constexpr (std::is_same_v<P, TemperaturePayload>) {
                w.str(p.location_id, kMaxIdLen, "location_id");
                w.u64(p.ts);
                w.i32(p.temp);
            } else if constexpr (std::is_same_v<P, LoggerDumpRefPayload>) {
                w.str(p.location_id, kMaxIdLen, "location_id");
                w.raw(p.dump_hash.bytes);
                w.u64(p.first_ts);
                w.u64(p.last_ts);
                w.u32(p.count);
            }
        },
        payload);
    return std::move(w).take();
}

inline Result<TxPayload> parse_payload(const Bytes& data) {
    Reader r(data);
    std::uint8_t tag = r.u8();
    TxPayload payload;
    switch (tag) {
        case DeployPayload::kTag: {
            DeployPayload p;
            p.deployer.bytes = r.raw<32>();
            payload = p;
            break;
        }
        case RegisterItemPayload::kTag: {
            RegisterItemPayload p;
            p.item_id = r.str(kMaxIdLen);
            p.manufacturer = r.str(kMaxIdLen);
            p.safe_min = r.i32();
            p.safe_max = r.i32();
            p.registered_at = r.u64();
            payload = p;
            break;
        }
        case AddAdminPayload::kTag: {
            AddAdminPayload p;
            p.new_admin.bytes = r.raw<32>();
            payload = p;
            break;
        }
        case AddLocationPayload::kTag: {
            AddLocationPayload p;
            p.location_id = r.str(kMaxIdLen);
            p.kind = static_cast<LocationKind>(r.u8());
            if (r.u8() != 0) {
                PublicKeyId key;
                key.bytes = r.raw<32>();
                p.sensor_key = key;
            }
            payload = p;
            break;
        }
        case RemoveLocationPayload::kTag: {
            RemoveLocationPayload p;
            p.location_id = r.str(kMaxIdLen);
            payload = p;
            break;
        }
        case ItemArrivalPayload::kTag: {
            ItemArrivalPayload p;
            p.item_id = r.str(kMaxIdLen);
            p.location_id = r.str(kMaxIdLen);
            p.ts = r.u64();
            payload = p;
            break;
        }
        case ItemDeparturePayload::kTag: {
            ItemDeparturePayload p;
            p.item_id = r.str(kMaxIdLen);
            p.location_id = r.str(kMaxIdLen);
            p.ts = r.u64();
            payload = p;
            break;
        }
        case TemperaturePayload::kTag: {
            TemperaturePayload p;
            p.location_id = r.str(kMaxIdLen);
            p.ts = r.u64();
            p.temp = r.i32();
            payload = p;
            break;
        }
        case LoggerDumpRefPayload::kTag: {
            LoggerDumpRefPayload p;
            p.location_id = r.str(kMaxIdLen);
            p.dump_hash.bytes = r.raw<32>();
            p.first_ts = r.u64();
            p.last_ts = r.u64();
            p.count = r.u32();
            payload = p;
            break;
        }
        default:
            return Error(Err::MalformedRecord, "unknown payload tag");
    }
    if (!r.done()) return Error(Err::MalformedRecord, "trailing or truncated payload bytes");
    return payload;
}

// ---------------------------------------------------------------------------

struct SignedTransaction {
    TxPayload payload;
    PublicKeyId submitter;
    std::uint64_t nonce = 0;  // strictly increasing per submitter
    Signature signature;
};

/// Signing preimage. Covers submitter and nonce along with the payload so
/// that a captured transaction cannot be replayed under a fresh nonce.
inline Result<Bytes> signing_bytes(const TxPayload& payload, const PublicKeyId& submitter,
                                   std::uint64_t nonce) {
    auto payload_bytes = serialize_payload(payload);
    if (!payload_bytes) return payload_bytes.error();
    Writer w;
    w.u32(static_cast<std::uint32_t>(payload_bytes.value().size()));
    w.raw(payload_bytes.value().data(), payload_bytes.value().size());
    w.raw(submitter.bytes);
    w.u64(nonce);
    return std::move(w).take();
}

/// Canonical transaction bytes (payload, submitter, nonce, signature);
/// hashed for tx_root and stored verbatim in the ledger file.
inline Result<Bytes> serialize_tx(const SignedTransaction& tx) {
    auto payload_bytes = serialize_payload(tx.payload);
    if (!payload_bytes) return payload_bytes.error();
    Writer w;
    w.u32(static_cast<std::uint32_t>(payload_bytes.value().size()));
    w.raw(payload_bytes.value().data(), payload_bytes.value().size());
    w.raw(tx.submitter.bytes);
    w.u64(tx.nonce);
    w.raw(tx.signature.bytes);
    return std::move(w).take();
}

inline Result<SignedTransaction> parse_tx(Reader& r) {
    Bytes payload_bytes = r.var_bytes(1u << 20);
    if (!r.ok()) return Error(Err::MalformedRecord, "bad payload length");
    auto payload = parse_payload(payload_bytes);
    if (!payload) return payload.error();
    SignedTransaction tx;
    tx.payload = std::move(payload).take();
    tx.submitter.bytes = r.raw<32>();
    tx.nonce = r.u64();
    tx.signature.bytes = r.raw<64>();
    if (!r.ok()) return Error(Err::MalformedRecord, "truncated transaction");
    return tx;
}

inline Hash32 tx_hash(const SignedTransaction& tx) {
    auto bytes = serialize_tx(tx);
    // Payload field maxima are enforced when transactions are built.
    return hash_bytes(bytes.value());
}

/// Builds and signs a transaction. The submitter id is the signing key's
/// public half.
inline Result<SignedTransaction> sign_tx(const KeyPair& key, TxPayload payload,
                                         std::uint64_t nonce) {
    SignedTransaction tx;
    tx.payload = std::move(payload);
    tx.submitter = key.id();
    tx.nonce = nonce;
    auto preimage = signing_bytes(tx.payload, tx.submitter, tx.nonce);
    if (!preimage) return preimage.error();
    tx.signature = key.sign(preimage.value());
    return tx;
}

/// Registry of known actors: public key plus the last nonce seen on chain.
struct RegistryEntry {
    PublicKeyId key;
    std::uint64_t last_nonce = 0;
};
using KeyRegistry = std::map<PublicKeyId, RegistryEntry>;

/// True iff the signature verifies for the registered key and the nonce is
/// fresh (strictly above the submitter's last seen nonce).
inline Result<bool> verify_tx(const SignedTransaction& tx, const KeyRegistry& registry) {
    auto entry = registry.find(tx.submitter);
    if (entry == registry.end()) return Error(Err::UnknownSubmitter, tx.submitter.hex());
    if (tx.nonce <= entry->second.last_nonce) return false;
    auto preimage = signing_bytes(tx.payload, tx.submitter, tx.nonce);
    if (!preimage) return preimage.error();
    return verify_signature(entry->second.key, preimage.value(), tx.signature);
}

/// Signature check alone, with the submitter id as the verifying key.
/// Chain validation uses this; membership and nonce rules are enforced by
/// the contract replay.
inline bool tx_signature_valid(const SignedTransaction& tx) {
    auto preimage = signing_bytes(tx.payload, tx.submitter, tx.nonce);
    if (!preimage) return false;
    return verify_signature(tx.submitter, preimage.value(), tx.signature);
}

}  // namespace bcc

// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "bcc/hash.hpp"
#include "bcc/result.hpp"
#include "bcc/serial.hpp"
#include "bcc/tx.hpp"

namespace bcc {

/// Off-chain batched sensor history: up to 30 days at 10-minute cadence.
/// Only its content hash ever reaches the chain.
struct LoggerDump {
    LocationId location;
    std::vector<TemperatureReading> readings;

    Result<void> validate() const {
        if (location.size() > kMaxIdLen) return Error(Err::OversizeField, "location");
        if (readings.size() > kMaxDumpReadings)
            return Error(Err::OversizeField, "readings exceed 30-day capacity");
        std::uint64_t prev_ts = 0;
        bool first = true;
        for (const auto& r : readings) {
            if (r.location != location)
                return Error(Err::MalformedRecord, "reading for foreign location");
            if (!first && r.ts <= prev_ts)
                return Error(Err::StaleTimestamp, "dump readings not strictly increasing");
            prev_ts = r.ts;
            first = false;
        }
        return {};
    }
};

inline Result<Bytes> serialize_dump(const LoggerDump& dump) {
    auto valid = dump.validate();
    if (!valid) return valid.error();
    Writer w;
    w.str(dump.location, kMaxIdLen, "location");
    w.u32(static_cast<std::uint32_t>(dump.readings.size()));
    for (const auto& r : dump.readings) {
        w.u64(r.ts);
        w.i32(r.temp);
    }
    return std::move(w).take();
}

inline Result<LoggerDump> parse_dump(const Bytes& data) {
    Reader r(data);
    LoggerDump dump;
    dump.location = r.str(kMaxIdLen);
    std::uint32_t count = r.u32();
    if (!r.ok() || count > kMaxDumpReadings) return Error(Err::MalformedRecord, "bad dump header");
    dump.readings.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        TemperatureReading reading;
        reading.location = dump.location;
        reading.ts = r.u64();
        reading.temp = r.i32();
        dump.readings.push_back(reading);
    }
    if (!r.done()) return Error(Err::MalformedRecord, "trailing dump bytes");
    auto valid = dump.validate();
    if (!valid) return valid.error();
    return dump;
}

/// The on-chain reference for a stored dump.
inline LoggerDumpRefPayload make_dump_ref(const LoggerDump& dump, const Hash32& hash) {
    LoggerDumpRefPayload ref;
    ref.location_id = dump.location;
    ref.dump_hash = hash;
    ref.count = static_cast<std::uint32_t>(dump.readings.size());
    if (!dump.readings.empty()) {
        ref.first_ts = dump.readings.front().ts;
        ref.last_ts = dump.readings.back().ts;
    }
    return ref;
}

// ---------------------------------------------------------------------------

/// Content-addressed blob store. Implementations must be idempotent on
/// put and may be hit by concurrent writers of the same content.
class PayloadStore {
  public:
    virtual ~PayloadStore() = default;
    virtual Result<Hash32> put_bytes(const Bytes& data) = 0;
    virtual Result<Bytes> get_bytes(const Hash32& hash) const = 0;
    virtual std::size_t size() const = 0;
};

class MemPayloadStore final : public PayloadStore {
  public:
    Result<Hash32> put_bytes(const Bytes& data) override {
        Hash32 h = hash_bytes(data);
        blobs_.emplace(h, data);
        return h;
    }

    Result<Bytes> get_bytes(const Hash32& hash) const override {
        auto it = blobs_.find(hash);
        if (it == blobs_.end()) return Error(Err::Missing, hash.hex());
        return it->second;
    }

    std::size_t size() const override { return blobs_.size(); }

  private:
    std::map<Hash32, Bytes> blobs_;
};

/// One file per payload, named by the lowercase hex of its hash. Writes go
/// through a temp file plus rename so concurrent writers of the same
/// content cannot leave a torn blob behind.
class DirPayloadStore final : public PayloadStore {
  public:
    explicit DirPayloadStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    Result<Hash32> put_bytes(const Bytes& data) override {
        Hash32 h = hash_bytes(data);
        auto path = blob_path(h);
        std::error_code ec;
        if (std::filesystem::exists(path, ec)) return h;  // idempotent
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) return Error(Err::IoError, "cannot write " + tmp.string());
            out.write(reinterpret_cast<const char*>(data.data()), data.size());
            if (!out) return Error(Err::IoError, "write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) return Error(Err::IoError, "rename failed: " + path.string());
        return h;
    }

    Result<Bytes> get_bytes(const Hash32& hash) const override {
        auto path = blob_path(hash);
        std::ifstream in(path, std::ios::binary);
        if (!in) return Error(Err::Missing, hash.hex());
        Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return data;
    }

    std::size_t size() const override {
        std::size_t n = 0;
        std::error_code ec;
        for (auto it = std::filesystem::directory_iterator(dir_, ec);
             !ec && it != std::filesystem::directory_iterator(); ++it)
            if (it->path().extension() != ".tmp") ++n;
        return n;
    }

    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path blob_path(const Hash32& hash) const { return dir_ / hash.hex(); }

    std::filesystem::path dir_;
};

/// Stores a dump under its content hash; same dump twice is a no-op.
inline Result<Hash32> put_dump(PayloadStore& store, const LoggerDump& dump) {
    auto bytes = serialize_dump(dump);
    if (!bytes) return bytes.error();
    return store.put_bytes(bytes.value());
}

/// Fetches a dump and re-verifies the stored bytes against the hash before
/// returning, so at-rest corruption surfaces as CorruptPayload.
inline Result<LoggerDump> get_dump(const PayloadStore& store, const Hash32& hash) {
    auto bytes = store.get_bytes(hash);
    if (!bytes) return bytes.error();
    if (hash_bytes(bytes.value()) != hash)
        return Error(Err::CorruptPayload, "stored bytes do not match hash " + hash.hex());
    return parse_dump(bytes.value());
}

}  // namespace bcc

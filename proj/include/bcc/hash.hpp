// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include <sodium.h>

#include "bcc/bytes.hpp"

namespace bcc {

inline void crypto_init() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("sodium_init failed");
}

/// 32-byte digest. The all-zero value is reserved for the genesis
/// block's predecessor and never occurs as a real digest in practice.
struct Hash32 {
    std::array<std::uint8_t, 32> bytes{};

    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    std::string hex() const { return to_hex(bytes.data(), bytes.size()); }

    static Hash32 from_hex_or_throw(const std::string& hex_str) {
        auto raw = from_hex(hex_str);
        if (!raw || raw->size() != 32) throw std::invalid_argument("bad hash hex");
        Hash32 h;
        std::memcpy(h.bytes.data(), raw->data(), 32);
        return h;
    }

    auto operator<=>(const Hash32&) const = default;
};

/// SHA-256 of `data`.
inline Hash32 hash_bytes(const std::uint8_t* data, std::size_t len) {
    crypto_init();
    Hash32 out;
    crypto_hash_sha256(out.bytes.data(), data, len);
    return out;
}

inline Hash32 hash_bytes(const Bytes& data) {
    return hash_bytes(data.data(), data.size());
}

/// Number of leading zero bits of the digest, used by the proof-of-work
/// difficulty predicate.
inline int leading_zero_bits(const Hash32& h) {
    int bits = 0;
    for (auto b : h.bytes) {
        if (b == 0) {
            bits += 8;
            continue;
        }
        for (int i = 7; i >= 0; --i) {
            if (b & (1u << i)) return bits;
            ++bits;
        }
    }
    return bits;
}

}  // namespace bcc

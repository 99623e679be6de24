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
#include "bcc/hash.hpp"

namespace bcc {

// Actors are identified by their Ed25519 public key; no separate id space.
struct PublicKeyId {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const { return to_hex(bytes.data(), bytes.size()); }
    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
    auto operator<=>(const PublicKeyId&) const = default;
};

struct Signature {
    std::array<std::uint8_t, 64> bytes{};
    auto operator<=>(const Signature&) const = default;
};

/// Ed25519 keypair derived from a 32-byte seed. The seed is what key
/// files on disk contain; the expanded secret key stays in memory only.
class KeyPair {
  public:
    static KeyPair from_seed(const std::array<std::uint8_t, 32>& seed) {
        crypto_init();
        KeyPair kp;
        kp.seed_ = seed;
        crypto_sign_seed_keypair(kp.pub_.bytes.data(), kp.secret_.data(), seed.data());
        return kp;
    }

    static KeyPair from_seed_hex(const std::string& hex_str) {
        auto raw = from_hex(hex_str);
        if (!raw || raw->size() != 32) throw std::invalid_argument("key seed must be 32 hex-encoded bytes");
        std::array<std::uint8_t, 32> seed{};
        std::memcpy(seed.data(), raw->data(), 32);
        return from_seed(seed);
    }

    /// Deterministic test/scenario keys: seed = SHA-256 of a label.
    static KeyPair derive(const std::string& label) {
        Hash32 h = hash_bytes(reinterpret_cast<const std::uint8_t*>(label.data()), label.size());
        return from_seed(h.bytes);
    }

    const PublicKeyId& id() const { return pub_; }
    const std::array<std::uint8_t, 32>& seed() const { return seed_; }
    std::string seed_hex() const { return to_hex(seed_.data(), seed_.size()); }

    Signature sign(const Bytes& message) const {
        crypto_init();
        Signature sig;
        crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), secret_.data());
        return sig;
    }

  private:
    std::array<std::uint8_t, 32> seed_{};
    std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> secret_{};
    PublicKeyId pub_;
};

inline bool verify_signature(const PublicKeyId& key, const Bytes& message, const Signature& sig) {
    crypto_init();
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(), key.bytes.data()) == 0;
}

}  // namespace bcc

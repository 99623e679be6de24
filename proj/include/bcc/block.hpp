// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcc/hash.hpp"
#include "bcc/result.hpp"
#include "bcc/serial.hpp"
#include "bcc/tx.hpp"

namespace bcc {

struct BlockHeader {
    std::uint64_t height = 0;
    Hash32 prev_hash;          // all-zero marks the genesis predecessor
    std::uint64_t timestamp = 0;  // producer-assigned Unix seconds, UTC
    Hash32 tx_root;
    Bytes meta;  // opaque, ≤ 256 bytes; proof-of-work keeps its nonce here
};

struct Block {
    BlockHeader header;
    std::vector<SignedTransaction> txs;
    Hash32 block_hash;  // hash of the canonical header bytes

    std::uint64_t height() const { return header.height; }
};

inline Result<Bytes> serialize_header(const BlockHeader& header) {
    Writer w;
    w.u64(header.height);
    w.raw(header.prev_hash.bytes);
    w.u64(header.timestamp);
    w.raw(header.tx_root.bytes);
    w.var_bytes(header.meta, kMaxMetaLen, "meta");
    return std::move(w).take();
}

inline Result<Hash32> compute_block_hash(const BlockHeader& header) {
    auto bytes = serialize_header(header);
    if (!bytes) return bytes.error();
    return hash_bytes(bytes.value());
}

/// Flat hash of the concatenated transaction hashes, in block order.
inline Hash32 compute_tx_root(const std::vector<SignedTransaction>& txs) {
    Bytes concat;
    concat.reserve(txs.size() * 32);
    for (const auto& tx : txs) {
        Hash32 h = tx_hash(tx);
        concat.insert(concat.end(), h.bytes.begin(), h.bytes.end());
    }
    return hash_bytes(concat);
}

/// Assembles the block that extends `prev` (or the genesis block when
/// `prev` is empty). Non-genesis blocks must carry at least one
/// transaction and a timestamp no earlier than their predecessor's.
inline Result<Block> build_block(const std::optional<Block>& prev,
                                 std::vector<SignedTransaction> txs, std::uint64_t timestamp,
                                 Bytes meta = {}) {
    Block block;
    if (prev) {
        if (txs.empty()) return Error(Err::EmptyBlock, "non-genesis block without transactions");
        if (timestamp < prev->header.timestamp)
            return Error(Err::NonMonotonicTimestamp,
                         "block timestamp earlier than predecessor");
        block.header.height = prev->header.height + 1;
        block.header.prev_hash = prev->block_hash;
    } else {
        block.header.height = 0;
        // prev_hash stays all-zero
    }
    block.header.timestamp = timestamp;
    block.header.meta = std::move(meta);
    block.txs = std::move(txs);
    block.header.tx_root = compute_tx_root(block.txs);
    auto hash = compute_block_hash(block.header);
    if (!hash) return hash.error();
    block.block_hash = hash.value();
    return block;
}

/// Canonical block record: header, stored block hash, then
/// length-prefixed transactions. The hash is stored so that a tampered
/// header is caught at its own height, not one link later.
inline Result<Bytes> serialize_block(const Block& block) {
    auto header_bytes = serialize_header(block.header);
    if (!header_bytes) return header_bytes.error();
    Writer w;
    w.raw(header_bytes.value().data(), header_bytes.value().size());
    w.raw(block.block_hash.bytes);
    w.u32(static_cast<std::uint32_t>(block.txs.size()));
    for (const auto& tx : block.txs) {
        auto tx_bytes = serialize_tx(tx);
        if (!tx_bytes) return tx_bytes.error();
        w.u32(static_cast<std::uint32_t>(tx_bytes.value().size()));
        w.raw(tx_bytes.value().data(), tx_bytes.value().size());
    }
    return std::move(w).take();
}

/// Structural parse; keeps the stored hash as-is so validation can call
/// out a header/hash mismatch at the right height.
inline Result<Block> parse_block(const Bytes& data) {
    Reader r(data);
    Block block;
    block.header.height = r.u64();
    block.header.prev_hash.bytes = r.raw<32>();
    block.header.timestamp = r.u64();
    block.header.tx_root.bytes = r.raw<32>();
    block.header.meta = r.var_bytes(kMaxMetaLen);
    block.block_hash.bytes = r.raw<32>();
    std::uint32_t tx_count = r.u32();
    if (!r.ok()) return Error(Err::MalformedRecord, "truncated block header");
    block.txs.reserve(tx_count);
    for (std::uint32_t i = 0; i < tx_count; ++i) {
        Bytes tx_bytes = r.var_bytes(1u << 20);
        if (!r.ok()) return Error(Err::MalformedRecord, "bad transaction length");
        Reader tr(tx_bytes);
        auto tx = parse_tx(tr);
        if (!tx) return tx.error();
        if (!tr.done()) return Error(Err::MalformedRecord, "trailing transaction bytes");
        block.txs.push_back(std::move(tx).take());
    }
    if (!r.done()) return Error(Err::MalformedRecord, "trailing block bytes");
    return block;
}

}  // namespace bcc

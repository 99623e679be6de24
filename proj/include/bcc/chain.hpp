// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcc/block.hpp"
#include "bcc/result.hpp"

namespace bcc {

/// Append-only list of hash-linked blocks. No operation removes or
/// rewrites a block once appended.
class Chain {
  public:
    Chain() = default;

    static Chain from_genesis(Block genesis) {
        Chain c;
        c.blocks_.push_back(std::move(genesis));
        return c;
    }

    /// Wraps deserialized blocks without link checks; callers that take
    /// chains from outside run validate_chain before trusting them.
    static Chain from_blocks_unchecked(std::vector<Block> blocks) {
        Chain c;
        c.blocks_ = std::move(blocks);
        return c;
    }

    /// Appends iff the block is the legitimate successor of the tip.
    Result<void> append(Block block) {
        auto recomputed = compute_block_hash(block.header);
        if (!recomputed) return recomputed.error();
        if (recomputed.value() != block.block_hash)
            return Error(Err::BadBlockHash, "stored block hash does not match header");
        if (blocks_.empty()) {
            if (block.header.height != 0)
                return Error(Err::HeightMismatch, "first block must have height 0");
            if (!block.header.prev_hash.is_zero())
                return Error(Err::LinkMismatch, "genesis prev_hash must be all-zero");
        } else {
            const Block& tip_block = blocks_.back();
            if (block.header.height != tip_block.header.height + 1)
                return Error(Err::HeightMismatch);
            if (block.header.prev_hash != tip_block.block_hash) return Error(Err::LinkMismatch);
            if (block.header.timestamp < tip_block.header.timestamp)
                return Error(Err::NonMonotonicTimestamp);
        }
        blocks_.push_back(std::move(block));
        return {};
    }

    bool empty() const { return blocks_.empty(); }
    std::size_t size() const { return blocks_.size(); }
    const Block& at(std::uint64_t height) const { return blocks_.at(height); }
    const Block& tip() const { return blocks_.back(); }
    const std::vector<Block>& blocks() const { return blocks_; }

    std::uint64_t next_height() const { return blocks_.size(); }

  private:
    std::vector<Block> blocks_;
};

/// Full re-verification of every link, height, tx_root, block hash and
/// transaction signature. Returns the lowest invalid height, or nullopt
/// when the chain is intact.
inline std::optional<std::uint64_t> validate_chain(const Chain& chain) {
    const auto& blocks = chain.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.header.height != i) return i;
        if (i == 0) {
            if (!b.header.prev_hash.is_zero()) return i;
        } else {
            if (b.header.prev_hash.is_zero()) return i;
            if (b.header.prev_hash != blocks[i - 1].block_hash) return i;
            if (b.header.timestamp < blocks[i - 1].header.timestamp) return i;
            if (b.txs.empty()) return i;
        }
        auto recomputed = compute_block_hash(b.header);
        if (!recomputed || recomputed.value() != b.block_hash) return i;
        if (compute_tx_root(b.txs) != b.header.tx_root) return i;
        for (const auto& tx : b.txs)
            if (!tx_signature_valid(tx)) return i;
    }
    return std::nullopt;
}

}  // namespace bcc

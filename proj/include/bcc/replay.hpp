// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bcc/chain.hpp"
#include "bcc/contract.hpp"
#include "bcc/payload_store.hpp"
#include "bcc/result.hpp"

namespace bcc {

/// Genesis convention: height 0, all-zero predecessor, a single
/// self-signed Deploy naming the contract administrator.
inline Result<Block> make_genesis(const KeyPair& deployer, std::uint64_t timestamp) {
    auto tx = sign_tx(deployer, DeployPayload{deployer.id()}, 1);
    if (!tx) return tx.error();
    return build_block(std::nullopt, {std::move(tx).take()}, timestamp);
}

struct ReplayOutcome {
    ContractState state;
    std::uint64_t applied_txs = 0;
};

/// Re-derives the contract state from a structurally valid chain,
/// re-running signature, nonce and contract checks on the way. Returns the
/// failing height if any transaction no longer verifies or applies.
inline Result<ReplayOutcome> replay_chain(const Chain& chain, const PayloadStore* store) {
    ReplayOutcome out;
    for (const auto& block : chain.blocks()) {
        for (const auto& tx : block.txs) {
            auto verified = verify_against_state(out.state, tx);
            std::string at = "height " + std::to_string(block.height());
            if (!verified) return Error(verified.error().code, at);
            if (!verified.value()) return Error(Err::InvalidSignature, at);
            auto effect = apply_tx(out.state, tx, store);
            if (!effect) return Error(effect.error().code, at + ": " + effect.error().detail);
            out.state = std::move(effect.value().state);
            ++out.applied_txs;
        }
    }
    return out;
}

}  // namespace bcc

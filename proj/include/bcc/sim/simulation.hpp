// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bcc/chain.hpp"
#include "bcc/contract.hpp"
#include "bcc/payload_store.hpp"
#include "bcc/replay.hpp"
#include "bcc/result.hpp"
#include "bcc/rng.hpp"
#include "bcc/sim/clock.hpp"

namespace bcc::sim {

using NodeId = std::string;
using OrgId = std::string;

enum class ConsensusMode { PoA, PoW };
enum class NodeKind { Peer, Orderer };
enum class NodeStatus { Up, Crashed, Partitioned };

struct ConsensusConfig {
    ConsensusMode mode = ConsensusMode::PoA;
    std::uint64_t block_interval_s = 11;
    std::uint32_t batch_max = 100;
    std::uint32_t quorum = 0;  // 0: derive floor(n/2)+1 from the orderer count
    int pow_difficulty = 8;    // leading zero bits; desk scale caps at 24
    std::uint64_t ms_per_attempt = 2;  // virtual mining cost per nonce tried

    std::uint64_t interval_ms() const { return block_interval_s * 1000; }
};

struct FaultCmd {
    enum class Kind { Crash, Recover, Partition, Heal };
    Kind kind = Kind::Crash;
    int group = 1;  // partition target group
};

/// Submission receipt. `accepted_ms` is set when the entry peer verified
/// the transaction; `committed_ms` when that peer applied the containing
/// block. A rejected transaction carries the error instead.
struct TxReceipt {
    std::uint64_t seq = 0;
    Hash32 hash;
    std::string kind;
    NodeId via;
    std::optional<std::uint64_t> accepted_ms;
    std::optional<std::uint64_t> committed_ms;
    std::optional<Err> error;
    std::vector<Alarm> alarms;

    bool resolved() const { return committed_ms.has_value() || error.has_value(); }
};

struct ViewSample {
    std::uint64_t seq = 0;
    NodeId via;
    std::uint64_t issued_ms = 0;
    std::uint64_t answered_ms = 0;
    std::optional<Err> error;

    std::uint64_t latency_ms() const { return answered_ms - issued_ms; }
};

struct CommittedBlock {
    std::uint64_t height = 0;
    Hash32 hash;
    std::uint64_t first_commit_ms = 0;
    std::vector<Hash32> tx_hashes;
};

/// A simulated consortium node: an organization's peer (validates, stores,
/// serves reads) or orderer (batches transactions into blocks and drives
/// consensus). Peers never produce blocks.
struct NodeSim {
    NodeId id;
    OrgId org;
    NodeKind kind = NodeKind::Peer;
    bool crashed = false;
    int partition_group = 0;

    Chain chain;
    ContractState state;
    std::set<Hash32> seen_txs;  // pool members plus everything committed

    struct PendingTx {
        SignedTransaction tx;
        Hash32 hash;
        std::uint64_t arrival_ms = 0;
    };
    std::vector<PendingTx> pool;  // ordered by (arrival_ms, hash)

    // Round-robin proof-of-authority bookkeeping.
    std::uint64_t attempts = 0;  // barren intervals since the height advanced
    bool tick_seen = false;
    std::uint64_t last_tick_height = 0;
    bool last_tick_pending = false;
    std::optional<Block> proposed;
    std::set<NodeId> acks;
    std::uint64_t last_ack_height = ~0ull;
    std::uint64_t last_ack_tick = ~0ull;

    // Proof-of-work bookkeeping.
    std::uint64_t mine_session = 0;  // a bump cancels the in-flight find event
    bool mining_in_flight = false;

    NodeStatus status() const {
        if (crashed) return NodeStatus::Crashed;
        if (partition_group != 0) return NodeStatus::Partitioned;
        return NodeStatus::Up;
    }
};

// ---------------------------------------------------------------------------

/// Longest valid chain; ties go to the lexicographically smaller tip hash.
inline Result<Chain> fork_choice(const std::vector<Chain>& candidates) {
    if (candidates.empty()) return Error(Err::InvalidCandidate, "no candidates");
    const Chain* best = nullptr;
    for (const auto& candidate : candidates) {
        if (candidate.empty() || validate_chain(candidate).has_value())
            return Error(Err::InvalidCandidate);
        if (best == nullptr || candidate.size() > best->size() ||
            (candidate.size() == best->size() &&
             candidate.tip().block_hash.bytes < best->tip().block_hash.bytes))
            best = &candidate;
    }
    return *best;
}

struct MineResult {
    std::uint64_t nonce = 0;
    std::uint64_t attempts = 0;
    Block block;
};

/// Sequential nonce search from `start_nonce` until the block hash clears
/// `difficulty` leading zero bits. The winning nonce lands in block meta.
inline Result<MineResult> pow_mine(const Block& tmpl, int difficulty,
                                   std::uint64_t start_nonce = 0) {
    if (difficulty < 0 || difficulty > 24)
        return Error(Err::BadRange, "difficulty out of desk-scale range [0, 24]");
    MineResult result;
    Block candidate = tmpl;
    for (std::uint64_t k = 0;; ++k) {
        std::uint64_t nonce = start_nonce + k;
        Writer w;
        w.u64(nonce);
        candidate.header.meta = std::move(w).take_unchecked();
        auto hash = compute_block_hash(candidate.header);
        if (!hash) return hash.error();
        candidate.block_hash = hash.value();
        if (leading_zero_bits(candidate.block_hash) >= difficulty) {
            result.nonce = nonce;
            result.attempts = k + 1;
            result.block = std::move(candidate);
            return result;
        }
    }
}

// ---------------------------------------------------------------------------

/// Deterministic single-channel consortium simulation: organizations with
/// peers and orderers, seeded per-message link latencies, round-robin
/// proof-of-authority or toy proof-of-work ordering, crash and partition
/// faults. Runs entirely in virtual time off one event queue, so two runs
/// from the same seed produce identical commit logs.
class Simulation {
  public:
    Simulation(ConsensusConfig config, std::uint64_t base_time, std::uint64_t seed,
               const PayloadStore* store = nullptr)
        : config_(config), base_time_(base_time), link_rng_(Rng(seed).fork(1)),
          mine_rng_(Rng(seed).fork(2)), store_(store) {}

    // Scheduled events capture `this`.
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    NodeId add_node(const OrgId& org, NodeKind kind) {
        NodeSim node;
        node.org = org;
        std::size_t ordinal = 0;
        for (const auto& existing : nodes_)
            if (existing.org == org && existing.kind == kind) ++ordinal;
        node.id = org + (kind == NodeKind::Peer ? ".peer" : ".orderer") + std::to_string(ordinal);
        node.kind = kind;
        NodeId id = node.id;
        nodes_.push_back(std::move(node));
        if (kind == NodeKind::Orderer) orderers_.push_back(id);
        return id;
    }

    /// Every node starts from this chain; its state is replayed once. The
    /// preloaded prefix acts as a checkpoint: proof-of-work difficulty is
    /// only demanded of blocks mined after it.
    Result<void> preload(const Chain& chain) {
        auto replayed = replay_chain(chain, store_);
        if (!replayed) return replayed.error();
        preload_size_ = chain.size();
        for (auto& node : nodes_) {
            node.chain = chain;
            node.state = replayed.value().state;
            for (const auto& block : chain.blocks())
                for (const auto& tx : block.txs) node.seen_txs.insert(tx_hash(tx));
        }
        for (const auto& block : chain.blocks()) {
            CommittedBlock cb{block.height(), block.block_hash, 0, {}};
            for (const auto& tx : block.txs) cb.tx_hashes.push_back(tx_hash(tx));
            committed_.push_back(std::move(cb));
        }
        return {};
    }

    void start(std::uint64_t run_until_ms) {
        run_until_ms_ = run_until_ms;
        if (config_.quorum == 0)
            config_.quorum = static_cast<std::uint32_t>(orderers_.size() / 2 + 1);
        if (config_.mode == ConsensusMode::PoA) {
            for (std::uint64_t t = config_.interval_ms(); t <= run_until_ms_;
                 t += config_.interval_ms())
                for (const auto& id : orderers_)
                    clock_.schedule_at(t, [this, id] {
                        NodeSim* node = find_node(id);
                        if (node != nullptr) on_tick(*node);
                    });
        }
        // PoW mining arms itself when an orderer's pool first goes non-empty.
    }

    void run_until(std::uint64_t until_ms) { clock_.run_until(until_ms); }
    void run_to_end() { clock_.run_until(run_until_ms_); }
    std::uint64_t now_ms() const { return clock_.now_ms(); }
    std::uint64_t run_until_ms() const { return run_until_ms_; }

    // -- client surface ------------------------------------------------------

    /// Schedules a signed transaction for submission through `via`.
    /// Returns the receipt slot, resolved as the simulation advances.
    std::uint64_t schedule_submit(std::uint64_t at_ms, SignedTransaction tx, const NodeId& via) {
        std::uint64_t seq = receipts_.size();
        TxReceipt receipt;
        receipt.seq = seq;
        receipt.hash = tx_hash(tx);
        receipt.kind = payload_kind_name(tx.payload);
        receipt.via = via;
        receipt_index_.emplace(receipt.hash, seq);
        receipts_.push_back(std::move(receipt));
        clock_.schedule_at(at_ms, [this, seq, tx = std::move(tx), via]() mutable {
            on_client_submit(seq, std::move(tx), via);
        });
        return seq;
    }

    /// Schedules a read-only query against `via`'s state snapshot. Answered
    /// immediately at the cost of one network hop; never waits for ordering.
    std::uint64_t schedule_view(std::uint64_t at_ms, const NodeId& via,
                                std::function<void(const ContractState&)> reader = {}) {
        std::uint64_t seq = views_.size();
        ViewSample sample;
        sample.seq = seq;
        sample.via = via;
        views_.push_back(sample);
        clock_.schedule_at(at_ms, [this, seq, via, reader = std::move(reader)] {
            ViewSample& s = views_[seq];
            s.issued_ms = clock_.now_ms();
            NodeSim* node = find_node(via);
            if (node == nullptr) {
                s.error = Err::UnknownNode;
                s.answered_ms = s.issued_ms;
                return;
            }
            if (node->crashed) {
                s.error = Err::NodeDown;
                s.answered_ms = s.issued_ms;
                return;
            }
            if (reader) reader(node->state);
            s.answered_ms = s.issued_ms + draw_latency();
        });
        return seq;
    }

    void schedule_fault(std::uint64_t at_ms, const NodeId& node, FaultCmd cmd) {
        clock_.schedule_at(at_ms, [this, node, cmd] { (void)inject_fault(node, cmd); });
    }

    /// Applies a fault right now; scenario files go through schedule_fault.
    Result<void> inject_fault(const NodeId& id, FaultCmd cmd) {
        if (cmd.kind == FaultCmd::Kind::Heal) {
            for (auto& node : nodes_) node.partition_group = 0;
            // Gossip resumes: every survivor announces its tip so the two
            // sides discover each other's chains and converge.
            for (auto& node : nodes_)
                if (!node.crashed) broadcast_tip(node);
            return {};
        }
        NodeSim* node = find_node(id);
        if (node == nullptr) return Error(Err::UnknownNode, id);
        switch (cmd.kind) {
            case FaultCmd::Kind::Crash:
                node->crashed = true;
                node->proposed.reset();
                break;
            case FaultCmd::Kind::Recover:
                node->crashed = false;
                node->proposed.reset();
                node->tick_seen = false;
                node->attempts = 0;
                ++node->mine_session;
                broadcast_tip(*node);  // invites a chain catch-up
                maybe_start_mining(*node);
                break;
            case FaultCmd::Kind::Partition:
                node->partition_group = cmd.group;
                break;
            case FaultCmd::Kind::Heal:
                break;  // handled above
        }
        return {};
    }

    // -- introspection --------------------------------------------------------

    const std::vector<NodeSim>& nodes() const { return nodes_; }
    const std::vector<NodeId>& orderers() const { return orderers_; }
    const std::vector<TxReceipt>& receipts() const { return receipts_; }
    const std::vector<ViewSample>& views() const { return views_; }
    const std::vector<CommittedBlock>& committed() const { return committed_; }
    const ConsensusConfig& config() const { return config_; }
    bool safety_violation() const { return safety_violation_; }
    bool apply_divergence() const { return apply_divergence_; }

    const NodeSim& node(const NodeId& id) const {
        const NodeSim* n = const_cast<Simulation*>(this)->find_node(id);
        if (n == nullptr) throw std::out_of_range("unknown node " + id);
        return *n;
    }

    std::vector<NodeId> peer_ids() const {
        std::vector<NodeId> out;
        for (const auto& node : nodes_)
            if (node.kind == NodeKind::Peer) out.push_back(node.id);
        return out;
    }

    /// Canonical commit log: one line per first-committed block; byte
    /// stable across reruns of the same seed.
    std::string commit_log() const {
        std::string out;
        for (const auto& cb : committed_) {
            out += std::to_string(cb.height);
            out += ',';
            out += cb.hash.hex();
            out += ',';
            out += std::to_string(cb.tx_hashes.size());
            for (const auto& h : cb.tx_hashes) {
                out += ',';
                out += h.hex();
            }
            out += '\n';
        }
        return out;
    }

  private:
    NodeSim* find_node(const NodeId& id) {
        for (auto& node : nodes_)
            if (node.id == id) return &node;
        return nullptr;
    }

    std::uint64_t draw_latency() { return link_rng_.uniform_u64(5, 50); }

    std::uint64_t block_timestamp() const { return base_time_ + clock_.now_ms() / 1000; }

    // -- messages ---------------------------------------------------------------

    struct MsgSubmit {
        SignedTransaction tx;
        Hash32 hash;
    };
    struct MsgPropose {
        Block block;
    };
    struct MsgAck {
        std::uint64_t height = 0;
        Hash32 block_hash;
    };
    struct MsgCommit {
        Block block;
    };
    struct MsgRoundReject {
        std::vector<std::pair<Hash32, Err>> rejected;
    };
    struct MsgNewBlock {
        Block block;
    };
    struct MsgChainReq {};
    struct MsgChainResp {
        std::vector<Block> blocks;
    };
    struct MsgTip {
        std::uint64_t height = 0;
        Hash32 tip_hash;
    };
    using Msg = std::variant<MsgSubmit, MsgPropose, MsgAck, MsgCommit, MsgRoundReject, MsgNewBlock,
                             MsgChainReq, MsgChainResp, MsgTip>;

    /// A message is dropped when the receiver is crashed, or the sender's
    /// partition group at send time no longer matches the receiver's at
    /// delivery. Bytes already on the wire survive a sender crash.
    void send(const NodeSim& from, const NodeId& to, Msg msg) {
        int sender_group = from.partition_group;
        NodeId from_id = from.id;
        clock_.schedule_after(draw_latency(),
                              [this, from_id, sender_group, to, msg = std::move(msg)] {
                                  NodeSim* receiver = find_node(to);
                                  if (receiver == nullptr || receiver->crashed) return;
                                  if (receiver->partition_group != sender_group) return;
                                  dispatch(*receiver, from_id, msg);
                              });
    }

    void broadcast(const NodeSim& from, const Msg& msg, bool orderers_only) {
        // Targets resolved up front: a handler downstream may grow nodes_.
        std::vector<NodeId> targets;
        for (const auto& node : nodes_) {
            if (orderers_only && node.kind != NodeKind::Orderer) continue;
            if (node.id == from.id) continue;
            targets.push_back(node.id);
        }
        for (const auto& to : targets) send(from, to, msg);
    }

    void broadcast_tip(NodeSim& node) {
        if (node.chain.empty()) return;
        broadcast(node, MsgTip{node.chain.tip().height(), node.chain.tip().block_hash}, false);
    }

    void dispatch(NodeSim& node, const NodeId& from, const Msg& msg) {
        std::visit(
            [&](const auto& m) {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, MsgSubmit>) on_tx_gossip(node, m);
                else if constexpr (std::is_same_v<M, MsgPropose>) on_propose(node, from, m);
                else if constexpr (std::is_same_v<M, MsgAck>) on_ack(node, from, m);
                else if constexpr (std::is_same_v<M, MsgCommit>) on_commit(node, from, m);
                else if constexpr (std::is_same_v<M, MsgRoundReject>) on_round_reject(node, m);
                else if constexpr (std::is_same_v<M, MsgNewBlock>) on_new_block(node, from, m);
                else if constexpr (std::is_same_v<M, MsgChainReq>) on_chain_req(node, from);
                else if constexpr (std::is_same_v<M, MsgChainResp>) on_chain_resp(node, m);
                else if constexpr (std::is_same_v<M, MsgTip>) on_tip(node, from, m);
            },
            msg);
    }

    // -- submission path ---------------------------------------------------------

    void on_client_submit(std::uint64_t seq, SignedTransaction tx, const NodeId& via) {
        TxReceipt& receipt = receipts_[seq];
        NodeSim* peer = find_node(via);
        if (peer == nullptr) {
            receipt.error = Err::UnknownNode;
            return;
        }
        if (peer->crashed) {
            receipt.error = Err::NodeDown;
            return;
        }
        auto verified = verify_against_state(peer->state, tx);
        if (!verified) {
            receipt.error = verified.error().code;
            return;
        }
        if (!verified.value()) {
            receipt.error = Err::InvalidSignature;
            return;
        }
        receipt.accepted_ms = clock_.now_ms();
        MsgSubmit gossip{std::move(tx), receipt.hash};
        pool_insert(*peer, gossip.tx, gossip.hash);
        broadcast(*peer, gossip, /*orderers_only=*/true);
    }

    void on_tx_gossip(NodeSim& node, const MsgSubmit& msg) {
        pool_insert(node, msg.tx, msg.hash);
        maybe_start_mining(node);
    }

    void pool_insert(NodeSim& node, const SignedTransaction& tx, const Hash32& hash) {
        if (node.seen_txs.count(hash)) return;
        node.seen_txs.insert(hash);
        if (node.kind != NodeKind::Orderer) return;
        NodeSim::PendingTx entry{tx, hash, clock_.now_ms()};
        auto pos = std::upper_bound(node.pool.begin(), node.pool.end(), entry,
                                    [](const auto& a, const auto& b) {
                                        if (a.arrival_ms != b.arrival_ms)
                                            return a.arrival_ms < b.arrival_ms;
                                        return a.hash.bytes < b.hash.bytes;
                                    });
        node.pool.insert(pos, std::move(entry));
    }

    // -- proof-of-authority round --------------------------------------------------

    struct BatchResult {
        std::vector<SignedTransaction> txs;
        std::vector<std::pair<Hash32, Err>> rejected;
    };

    /// Orders the pool into the next batch against a scratch state.
    /// Transactions that fail verification or the contract are rejected
    /// for good and announced with the round.
    ///
    /// Order is arrival time with hash tie-break, except that one
    /// submitter's transactions stay in nonce order among themselves:
    /// gossip jitter may deliver a burst out of order, and consuming a
    /// later nonce first would strand the earlier ones.
    BatchResult build_batch(NodeSim& node) {
        std::vector<const NodeSim::PendingTx*> ordered;
        ordered.reserve(node.pool.size());
        for (const auto& entry : node.pool) ordered.push_back(&entry);
        std::map<PublicKeyId, std::vector<std::size_t>> by_submitter;
        for (std::size_t i = 0; i < ordered.size(); ++i)
            by_submitter[ordered[i]->tx.submitter].push_back(i);
        for (auto& [submitter, slots] : by_submitter) {
            std::vector<const NodeSim::PendingTx*> group;
            group.reserve(slots.size());
            for (std::size_t slot : slots) group.push_back(ordered[slot]);
            std::sort(group.begin(), group.end(), [](const auto* a, const auto* b) {
                if (a->tx.nonce != b->tx.nonce) return a->tx.nonce < b->tx.nonce;
                return a->hash.bytes < b->hash.bytes;
            });
            for (std::size_t k = 0; k < slots.size(); ++k) ordered[slots[k]] = group[k];
        }

        BatchResult result;
        ContractState scratch = node.state;
        std::set<Hash32> drop;
        for (const auto* entry_ptr : ordered) {
            const auto& entry = *entry_ptr;
            if (result.txs.size() >= config_.batch_max) break;
            auto verified = verify_against_state(scratch, entry.tx);
            if (!verified) {
                result.rejected.emplace_back(entry.hash, verified.error().code);
                drop.insert(entry.hash);
                continue;
            }
            if (!verified.value()) {
                result.rejected.emplace_back(entry.hash, Err::InvalidSignature);
                drop.insert(entry.hash);
                continue;
            }
            auto effect = apply_tx(scratch, entry.tx, store_);
            if (!effect) {
                result.rejected.emplace_back(entry.hash, effect.error().code);
                drop.insert(entry.hash);
                continue;
            }
            scratch = std::move(effect.value().state);
            result.txs.push_back(entry.tx);
        }
        if (!drop.empty())
            std::erase_if(node.pool, [&](const auto& e) { return drop.count(e.hash) > 0; });
        return result;
    }

    void on_tick(NodeSim& node) {
        if (node.crashed || node.kind != NodeKind::Orderer) return;
        if (config_.mode != ConsensusMode::PoA) return;
        node.proposed.reset();
        node.acks.clear();
        std::uint64_t height = node.chain.next_height();
        bool pending = !node.pool.empty();
        if (node.tick_seen && node.last_tick_height == height && node.last_tick_pending)
            ++node.attempts;
        else if (!node.tick_seen || node.last_tick_height != height)
            node.attempts = 0;
        node.tick_seen = true;
        node.last_tick_height = height;
        node.last_tick_pending = pending;
        if (!pending) return;

        // Round-robin by height; every barren interval hands the turn to
        // the next orderer (view change).
        const NodeId& leader = orderers_[(height + node.attempts) % orderers_.size()];
        if (leader != node.id) return;

        BatchResult batch = build_batch(node);
        if (!batch.rejected.empty())
            announce_rejections(node, batch.rejected);
        if (batch.txs.empty()) return;  // no empty blocks
        auto block = build_block(node.chain.tip(), std::move(batch.txs), block_timestamp());
        if (!block) return;
        node.proposed = std::move(block).take();
        node.acks = {node.id};
        if (node.acks.size() >= config_.quorum) {
            commit_proposal(node);
            return;
        }
        broadcast(node, MsgPropose{*node.proposed}, true);
    }

    void announce_rejections(NodeSim& node, const std::vector<std::pair<Hash32, Err>>& rejected) {
        MsgRoundReject msg{rejected};
        on_round_reject(node, msg);
        broadcast(node, msg, false);
    }

    void on_propose(NodeSim& node, const NodeId& from, const MsgPropose& msg) {
        if (node.kind != NodeKind::Orderer) return;
        std::uint64_t height = msg.block.height();
        if (height > node.chain.next_height()) {
            request_chain(node, from);
            return;
        }
        if (height != node.chain.next_height()) return;
        if (node.chain.empty() || msg.block.header.prev_hash != node.chain.tip().block_hash)
            return;
        std::uint64_t tick_no = clock_.now_ms() / config_.interval_ms();
        if (node.last_ack_height == height && node.last_ack_tick == tick_no)
            return;  // one ack per height per interval keeps quorums exclusive
        if (!block_valid_for(node, msg.block)) return;
        node.last_ack_height = height;
        node.last_ack_tick = tick_no;
        send(node, from, MsgAck{height, msg.block.block_hash});
    }

    bool block_valid_for(const NodeSim& node, const Block& block) const {
        auto recomputed = compute_block_hash(block.header);
        if (!recomputed || recomputed.value() != block.block_hash) return false;
        if (compute_tx_root(block.txs) != block.header.tx_root) return false;
        if (!node.chain.empty() && block.header.timestamp < node.chain.tip().header.timestamp)
            return false;
        if (block.txs.empty()) return false;
        for (const auto& tx : block.txs)
            if (!tx_signature_valid(tx)) return false;
        return true;
    }

    void on_ack(NodeSim& node, const NodeId& from, const MsgAck& msg) {
        if (!node.proposed || node.proposed->height() != msg.height ||
            node.proposed->block_hash != msg.block_hash)
            return;
        node.acks.insert(from);
        if (node.acks.size() >= config_.quorum) commit_proposal(node);
    }

    void commit_proposal(NodeSim& leader) {
        MsgCommit commit{*leader.proposed};
        leader.proposed.reset();
        leader.acks.clear();
        on_commit(leader, leader.id, commit);
        broadcast(leader, commit, false);
    }

    void on_round_reject(NodeSim& node, const MsgRoundReject& msg) {
        for (const auto& [hash, code] : msg.rejected) {
            if (node.kind == NodeKind::Orderer)
                std::erase_if(node.pool, [&](const auto& e) { return e.hash == hash; });
            resolve_rejection(node, hash, code);
        }
    }

    void on_commit(NodeSim& node, const NodeId& from, const MsgCommit& msg) {
        std::uint64_t height = msg.block.height();
        if (height > node.chain.next_height()) {
            request_chain(node, from);
            return;
        }
        if (height < node.chain.next_height()) return;  // duplicate
        adopt_block(node, msg.block);
    }

    /// Appends a block extending the node's tip, applies its transactions
    /// and settles receipts this node is the entry peer for.
    void adopt_block(NodeSim& node, const Block& block) {
        auto appended = node.chain.append(block);
        if (!appended) {
            apply_divergence_ = true;
            return;
        }
        record_commit(block);
        for (const auto& tx : block.txs) {
            Hash32 hash = tx_hash(tx);
            node.seen_txs.insert(hash);
            if (node.kind == NodeKind::Orderer)
                std::erase_if(node.pool, [&](const auto& e) { return e.hash == hash; });
            auto effect = apply_tx(node.state, tx, store_);
            if (!effect) {
                apply_divergence_ = true;
                continue;
            }
            node.state = std::move(effect.value().state);
            resolve_commit(node, hash, effect.value().alarms);
        }
        if (config_.mode == ConsensusMode::PoW && node.kind == NodeKind::Orderer) {
            ++node.mine_session;  // tip moved; the in-flight find is stale
            maybe_start_mining(node);
        }
    }

    /// First commit per height is canon. In proof-of-authority, any later
    /// disagreement at the same height marks the run unsafe; proof-of-work
    /// forks legitimately and resolves through fork choice instead.
    void record_commit(const Block& block) {
        std::uint64_t height = block.height();
        for (const auto& cb : committed_)
            if (cb.height == height) {
                if (config_.mode == ConsensusMode::PoA && cb.hash != block.block_hash)
                    safety_violation_ = true;
                return;
            }
        CommittedBlock cb;
        cb.height = height;
        cb.hash = block.block_hash;
        cb.first_commit_ms = clock_.now_ms();
        for (const auto& tx : block.txs) cb.tx_hashes.push_back(tx_hash(tx));
        committed_.push_back(std::move(cb));
    }

    void resolve_commit(NodeSim& node, const Hash32& hash, const std::vector<Alarm>& alarms) {
        auto it = receipt_index_.find(hash);
        if (it == receipt_index_.end()) return;
        TxReceipt& receipt = receipts_[it->second];
        if (receipt.via != node.id || receipt.committed_ms) return;
        receipt.committed_ms = clock_.now_ms();
        receipt.alarms = alarms;
    }

    void resolve_rejection(NodeSim& node, const Hash32& hash, Err code) {
        auto it = receipt_index_.find(hash);
        if (it == receipt_index_.end()) return;
        TxReceipt& receipt = receipts_[it->second];
        if (receipt.via != node.id || receipt.resolved()) return;
        receipt.error = code;
    }

    // -- chain sync -----------------------------------------------------------------

    void request_chain(NodeSim& node, const NodeId& from) {
        if (from != node.id) send(node, from, MsgChainReq{});
    }

    void on_chain_req(NodeSim& node, const NodeId& from) {
        if (node.chain.empty()) return;
        send(node, from, MsgChainResp{node.chain.blocks()});
    }

    void on_chain_resp(NodeSim& node, const MsgChainResp& msg) {
        Chain candidate;
        for (const auto& block : msg.blocks)
            if (!candidate.append(block)) return;
        if (!candidate.empty()) adopt_chain(node, candidate);
    }

    void on_tip(NodeSim& node, const NodeId& from, const MsgTip& msg) {
        bool behind = msg.height + 1 > node.chain.size();
        bool forked = msg.height + 1 == node.chain.size() && !node.chain.empty() &&
                      msg.tip_hash != node.chain.tip().block_hash;
        if (behind || forked) {
            request_chain(node, from);
        } else if (msg.height + 1 < node.chain.size()) {
            // The announcer lags; hand it our chain so a recovered node
            // catches up even when no new commits are flowing.
            send(node, from, MsgChainResp{node.chain.blocks()});
        }
    }

    void on_new_block(NodeSim& node, const NodeId& from, const MsgNewBlock& msg) {
        if (config_.mode != ConsensusMode::PoW) return;
        if (!node.chain.empty() && msg.block.header.prev_hash == node.chain.tip().block_hash) {
            if (pow_block_ok(msg.block)) adopt_block(node, msg.block);
            return;
        }
        if (msg.block.height() + 1 >= node.chain.size()) request_chain(node, from);
    }

    bool pow_block_ok(const Block& block) const {
        if (leading_zero_bits(block.block_hash) < config_.pow_difficulty) return false;
        auto recomputed = compute_block_hash(block.header);
        if (!recomputed || recomputed.value() != block.block_hash) return false;
        if (compute_tx_root(block.txs) != block.header.tx_root) return false;
        for (const auto& tx : block.txs)
            if (!tx_signature_valid(tx)) return false;
        return true;
    }

    /// Longest-chain adoption with full validation and state replay; ties
    /// break toward the smaller tip hash, so healed partitions converge.
    void adopt_chain(NodeSim& node, const Chain& candidate) {
        bool longer = candidate.size() > node.chain.size();
        bool tie_wins = candidate.size() == node.chain.size() && !node.chain.empty() &&
                        candidate.tip().block_hash.bytes < node.chain.tip().block_hash.bytes;
        if (node.chain.empty()) {
            longer = true;
        } else if (!longer && !tie_wins) {
            return;
        }
        if (config_.mode == ConsensusMode::PoW) {
            for (std::size_t h = std::max<std::size_t>(1, preload_size_); h < candidate.size();
                 ++h)
                if (leading_zero_bits(candidate.at(h).block_hash) < config_.pow_difficulty)
                    return;
        }
        std::vector<Chain> candidates;
        if (!node.chain.empty()) candidates.push_back(node.chain);
        candidates.push_back(candidate);
        auto chosen = fork_choice(candidates);
        if (!chosen || chosen.value().tip().block_hash != candidate.tip().block_hash) return;
        auto replayed = replay_chain(candidate, store_);
        if (!replayed) {
            apply_divergence_ = true;
            return;
        }
        node.chain = candidate;
        node.state = std::move(replayed.value().state);
        for (const auto& block : candidate.blocks()) {
            record_commit(block);
            for (const auto& tx : block.txs) {
                Hash32 hash = tx_hash(tx);
                node.seen_txs.insert(hash);
                if (node.kind == NodeKind::Orderer)
                    std::erase_if(node.pool, [&](const auto& e) { return e.hash == hash; });
                resolve_commit(node, hash, {});
            }
        }
        if (config_.mode == ConsensusMode::PoW && node.kind == NodeKind::Orderer) {
            ++node.mine_session;
            maybe_start_mining(node);
        }
    }

    // -- proof-of-work ------------------------------------------------------------------

    /// Arms one mining session per tip. New transactions do not restart a
    /// session in flight; they wait for the next block.
    void maybe_start_mining(NodeSim& node) {
        if (config_.mode != ConsensusMode::PoW || node.kind != NodeKind::Orderer) return;
        if (node.crashed || node.mining_in_flight || node.pool.empty() || node.chain.empty())
            return;
        std::uint64_t session = node.mine_session;
        BatchResult batch = build_batch(node);
        if (!batch.rejected.empty())
            announce_rejections(node, batch.rejected);
        if (batch.txs.empty()) return;
        auto tmpl = build_block(node.chain.tip(), std::move(batch.txs), block_timestamp());
        if (!tmpl) return;
        auto mined = pow_mine(tmpl.value(), config_.pow_difficulty, mine_rng_.next_u64());
        if (!mined) return;
        node.mining_in_flight = true;
        std::uint64_t found_at = clock_.now_ms() + mined.value().attempts * config_.ms_per_attempt;
        NodeId id = node.id;
        clock_.schedule_at(found_at, [this, id, session, found = std::move(mined.value().block)] {
            NodeSim* miner = find_node(id);
            if (miner == nullptr) return;
            miner->mining_in_flight = false;
            if (miner->crashed) return;
            if (miner->mine_session != session ||
                miner->chain.tip().block_hash != found.header.prev_hash) {
                maybe_start_mining(*miner);  // tip moved mid-search; remine
                return;
            }
            Block block = found;
            adopt_block(*miner, block);
            broadcast(*miner, MsgNewBlock{block}, false);
        });
    }

    // -- members ---------------------------------------------------------------------

    ConsensusConfig config_;
    std::uint64_t base_time_;
    SimClock clock_;
    Rng link_rng_;
    Rng mine_rng_;
    const PayloadStore* store_;
    std::vector<NodeSim> nodes_;
    std::vector<NodeId> orderers_;
    std::vector<TxReceipt> receipts_;
    std::vector<ViewSample> views_;
    std::map<Hash32, std::uint64_t> receipt_index_;
    std::vector<CommittedBlock> committed_;
    std::size_t preload_size_ = 1;
    std::uint64_t run_until_ms_ = 0;
    bool safety_violation_ = false;
    bool apply_divergence_ = false;
};

}  // namespace bcc::sim

#pragma once

#include "cspsim/ledger.hpp"
#include "cspsim/simnet.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace cspsim {

/// Round-robin proposer schedule; view 0 of height h is nodes[h mod n].
Outcome<std::string> next_proposer(const NodeRoster& roster, std::int64_t height);
std::string proposer_for(const NodeRoster& roster, std::int64_t height, std::int64_t view);

struct ConsensusConfig {
    std::int64_t propose_interval = 5; // ticks between proposal attempts
    std::int64_t view_timeout = 10;    // base proposer-failure timeout (linear backoff per view)
    std::int64_t msg_timeout = 10;     // retransmission/repair cadence
    std::int64_t mempool_ttl = 1000;   // ticks a pending tx survives in the mempool
    std::int64_t max_block_txs = 256;

    bool operator==(const ConsensusConfig&) const = default;
};

enum class ConsensusPhase { idle, proposed, voted, committed };

/// Send-side hooks the engine uses; bound to the owning simulated node.
class NetCtx {
  public:
    NetCtx(SimNet& net, std::string self) : net_(&net), self_(std::move(self)) {}
    std::int64_t now() const { return net_->now(); }
    const std::string& self() const { return self_; }
    void send(const std::string& dst, std::string type, Json body) {
        (void)net_->schedule_send(self_, dst, std::move(type), std::move(body));
    }
    void timer(std::string type, Json body, std::int64_t delay) {
        net_->schedule_timer(self_, std::move(type), std::move(body), delay);
    }
    SimNet& net() { return *net_; }

  private:
    SimNet* net_;
    std::string self_;
};

/// One node's per-domain consensus state machine. Crash-fault tolerant:
/// heights are decided one at a time with quorum votes; when a proposer
/// stalls, followers time out into the next view and the new proposer adopts
/// the highest accepted block reported by a quorum, so a block that may have
/// been certified is never displaced. Votes sign (domain, height, block_hash)
/// and aggregate across views.
///
/// Durable across crashes: the ledger. Volatile: mempool, proposal/vote state.
class ConsensusEngine {
  public:
    using CommitHook = std::function<void(const LedgerBlock&)>;

    ConsensusEngine(std::string node_id, ConsensusConfig cfg, Bytes node_secret, Ledger ledger);

    const std::string& node_id() const { return node_id_; }
    const Ledger& ledger() const { return ledger_; }
    const NodeRoster& roster() const { return ledger_.roster(); }
    std::int64_t working_height() const { return ledger_.tip_height() + 1; }
    ConsensusPhase phase() const;
    std::size_t mempool_size() const { return mempool_.size(); }
    bool has_pending_work() const;

    void set_commit_hook(CommitHook hook) { commit_hook_ = std::move(hook); }

    void on_start(NetCtx& ctx);
    void on_crash();
    void on_restart(NetCtx& ctx);

    /// Accepts a transaction from a local client (driver, gateway, service),
    /// gossips it to peers, and schedules proposals.
    void local_submit(const PrimitiveTx& tx, NetCtx& ctx);

    static bool handles(std::string_view type) { return type.starts_with("cs."); }
    void on_message(const Envelope& env, NetCtx& ctx);

  private:
    struct MempoolEntry {
        std::int64_t arrival_tick = 0;
        PrimitiveTx tx;
    };
    struct NewViewInfo {
        std::int64_t accepted_view = -1;
        std::optional<LedgerBlock> accepted_block;
    };

    void handle_submit(const Envelope& env, NetCtx& ctx);
    void handle_proposal(const Envelope& env, NetCtx& ctx);
    void handle_vote(const Envelope& env, NetCtx& ctx);
    void handle_commit(const Envelope& env, NetCtx& ctx);
    void handle_newview(const Envelope& env, NetCtx& ctx);
    void handle_tip(const Envelope& env, NetCtx& ctx);
    void handle_sync_req(const Envelope& env, NetCtx& ctx);
    void handle_propose_timer(const Envelope& env, NetCtx& ctx);
    void handle_view_timer(const Envelope& env, NetCtx& ctx);
    void handle_repair_timer(const Envelope& env, NetCtx& ctx);

    void add_to_mempool(const PrimitiveTx& tx, NetCtx& ctx, bool gossip);
    void gc_mempool(std::int64_t now);
    LedgerBlock build_block() const;
    void broadcast(NetCtx& ctx, const std::string& type, Json body);
    void propose(NetCtx& ctx, std::int64_t view, const LedgerBlock& block);
    Status accept_proposal(const Envelope& env, NetCtx& ctx);
    void try_commit(const Digest& hash, NetCtx& ctx);
    bool append_committed(const LedgerBlock& block, NetCtx& ctx);
    void enter_next_height(NetCtx& ctx);
    void arm_propose_timer(NetCtx& ctx);
    void arm_view_timer(NetCtx& ctx);
    void arm_repair_timer(NetCtx& ctx);
    void note_peer_tip(const std::string& peer, std::int64_t tip);
    Json tipped(Json body) const;
    Bytes vote_signature(std::int64_t height, const Digest& hash) const;

    std::string node_id_;
    ConsensusConfig cfg_;
    Bytes node_secret_;
    Ledger ledger_; // durable

    // Volatile per-height consensus state (wiped by crashes).
    std::vector<MempoolEntry> mempool_;
    std::int64_t promised_view_ = 0;
    std::int64_t accepted_view_ = -1;
    std::optional<LedgerBlock> accepted_block_;
    bool proposal_outstanding_ = false;
    std::map<std::string, std::map<std::string, Bytes>> votes_by_hash_; // hash hex -> node -> sig
    std::map<std::string, LedgerBlock> blocks_by_hash_;
    std::map<std::int64_t, std::map<std::string, NewViewInfo>> newviews_; // view -> reporter
    std::map<std::string, std::int64_t> peer_tips_;
    bool propose_timer_armed_ = false;
    bool view_timer_armed_ = false;
    bool repair_timer_armed_ = false;

    CommitHook commit_hook_;
};

} // namespace cspsim

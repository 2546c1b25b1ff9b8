#include "cspsim/consensus.hpp"

#include <algorithm>

namespace cspsim {

Outcome<std::string> next_proposer(const NodeRoster& roster, std::int64_t height) {
    if (roster.nodes.empty()) return err(Errc::empty_roster, roster.domain_id);
    const auto n = static_cast<std::int64_t>(roster.nodes.size());
    return roster.nodes[static_cast<std::size_t>(height % n)].node_id;
}

std::string proposer_for(const NodeRoster& roster, std::int64_t height, std::int64_t view) {
    const auto n = static_cast<std::int64_t>(roster.nodes.size());
    return roster.nodes[static_cast<std::size_t>((height + view) % n)].node_id;
}

ConsensusEngine::ConsensusEngine(std::string node_id, ConsensusConfig cfg, Bytes node_secret,
                                 Ledger ledger)
    : node_id_(std::move(node_id)), cfg_(cfg), node_secret_(std::move(node_secret)),
      ledger_(std::move(ledger)) {}

ConsensusPhase ConsensusEngine::phase() const {
    if (accepted_block_) return ConsensusPhase::voted;
    if (proposal_outstanding_) return ConsensusPhase::proposed;
    return ConsensusPhase::idle;
}

bool ConsensusEngine::has_pending_work() const {
    return !mempool_.empty() || accepted_block_.has_value() || !votes_by_hash_.empty() ||
           !newviews_.empty();
}

Json ConsensusEngine::tipped(Json body) const {
    body["d"] = ledger_.domain_id();
    body["tip"] = ledger_.tip_height();
    return body;
}

Bytes ConsensusEngine::vote_signature(std::int64_t height, const Digest& hash) const {
    return ed25519().sign(vote_signing_bytes(ledger_.domain_id(), height, hash), node_secret_);
}

void ConsensusEngine::broadcast(NetCtx& ctx, const std::string& type, Json body) {
    for (const auto& peer : roster().nodes) {
        if (peer.node_id == node_id_) continue;
        ctx.send(peer.node_id, type, body);
    }
}

void ConsensusEngine::on_start(NetCtx& ctx) {
    // Genesis is constructed identically by every node.
    for (const auto& peer : roster().nodes) {
        if (peer.node_id != node_id_) peer_tips_[peer.node_id] = 0;
    }
    arm_repair_timer(ctx);
}

void ConsensusEngine::on_crash() {
    mempool_.clear();
    promised_view_ = 0;
    accepted_view_ = -1;
    accepted_block_.reset();
    proposal_outstanding_ = false;
    votes_by_hash_.clear();
    blocks_by_hash_.clear();
    newviews_.clear();
    peer_tips_.clear();
    propose_timer_armed_ = false;
    view_timer_armed_ = false;
    repair_timer_armed_ = false;
}

void ConsensusEngine::on_restart(NetCtx& ctx) {
    // Durable chain survived; announce the tip so peers repair us (and we them).
    broadcast(ctx, "cs.tip", tipped(Json::object()));
    arm_repair_timer(ctx);
}

void ConsensusEngine::local_submit(const PrimitiveTx& tx, NetCtx& ctx) {
    add_to_mempool(tx, ctx, /*gossip=*/true);
}

void ConsensusEngine::add_to_mempool(const PrimitiveTx& tx, NetCtx& ctx, bool gossip) {
    if (ledger_.state().applied_tx_ids.contains(tx.tx_id)) return;
    for (const auto& entry : mempool_) {
        if (entry.tx.tx_id == tx.tx_id) return;
    }
    mempool_.push_back({ctx.now(), tx});
    if (gossip) {
        broadcast(ctx, "cs.submit_tx", tipped(Json{{"tx", tx_to_json(tx)}}));
    }
    arm_propose_timer(ctx);
    arm_view_timer(ctx);
}

void ConsensusEngine::gc_mempool(std::int64_t now) {
    std::erase_if(mempool_, [&](const MempoolEntry& e) {
        return now - e.arrival_tick > cfg_.mempool_ttl ||
               ledger_.state().applied_tx_ids.contains(e.tx.tx_id);
    });
}

LedgerBlock ConsensusEngine::build_block() const {
    // FIFO by (arrival tick, tx_id); include the prefix of txs that validate
    // against the staged state, skipping (and retaining) the rest. An empty
    // block is legitimate: it advances ledger logical time.
    std::vector<const MempoolEntry*> order;
    order.reserve(mempool_.size());
    for (const auto& e : mempool_) order.push_back(&e);
    std::stable_sort(order.begin(), order.end(), [](const MempoolEntry* a, const MempoolEntry* b) {
        if (a->arrival_tick != b->arrival_tick) return a->arrival_tick < b->arrival_tick;
        return a->tx.tx_id < b->tx.tx_id;
    });

    LedgerBlock block;
    block.height = working_height();
    block.prev_hash = ledger_.tip_hash();
    block.proposer = node_id_;
    StateTable staged = ledger_.state();
    std::int64_t included = 0;
    for (const auto* entry : order) {
        if (included >= cfg_.max_block_txs) break;
        if (apply_tx(staged, entry->tx)) {
            block.tx_list.push_back(entry->tx);
            ++included;
        }
    }
    block.block_hash = compute_block_hash(ledger_.domain_id(), block);
    return block;
}

void ConsensusEngine::propose(NetCtx& ctx, std::int64_t view, const LedgerBlock& block) {
    promised_view_ = std::max(promised_view_, view);
    accepted_view_ = view;
    accepted_block_ = block;
    blocks_by_hash_[block.block_hash.hex()] = block;
    votes_by_hash_[block.block_hash.hex()][node_id_] =
        vote_signature(block.height, block.block_hash);
    proposal_outstanding_ = true;
    Json body = tipped(Json{{"h", block.height}, {"v", view}, {"block", block_to_json(block)}});
    broadcast(ctx, "cs.proposal", body);
    arm_view_timer(ctx);
    try_commit(block.block_hash, ctx); // single-node roster commits immediately
}

void ConsensusEngine::on_message(const Envelope& env, NetCtx& ctx) {
    const std::string& type = env.type;
    if (type == "cs.t.propose") {
        handle_propose_timer(env, ctx);
        return;
    }
    if (type == "cs.t.view") {
        handle_view_timer(env, ctx);
        return;
    }
    if (type == "cs.t.repair") {
        handle_repair_timer(env, ctx);
        return;
    }
    if (!env.body.is_object() || !env.body.contains("d") ||
        env.body.at("d").get<std::string>() != ledger_.domain_id()) {
        ctx.net().trace_event(Json{{"ev", "domain_mismatch"}, {"node", node_id_}, {"type", type}});
        return;
    }
    if (env.body.contains("tip") && roster().find(env.src) != nullptr) {
        note_peer_tip(env.src, env.body.at("tip").get<std::int64_t>());
        if (peer_tips_[env.src] < ledger_.tip_height()) arm_repair_timer(ctx);
    }
    if (type == "cs.submit_tx") {
        handle_submit(env, ctx);
    } else if (type == "cs.proposal") {
        handle_proposal(env, ctx);
    } else if (type == "cs.vote") {
        handle_vote(env, ctx);
    } else if (type == "cs.commit") {
        handle_commit(env, ctx);
    } else if (type == "cs.newview") {
        handle_newview(env, ctx);
    } else if (type == "cs.tip" || type == "cs.tip_ack") {
        handle_tip(env, ctx);
    } else if (type == "cs.sync_req") {
        handle_sync_req(env, ctx);
    }
}

void ConsensusEngine::handle_submit(const Envelope& env, NetCtx& ctx) {
    auto tx = tx_from_json(env.body.at("tx"));
    if (!tx) return;
    // Forwarded copies are not re-gossiped; the submitting node floods once.
    add_to_mempool(tx.value(), ctx, /*gossip=*/false);
}

Status ConsensusEngine::accept_proposal(const Envelope& env, NetCtx& ctx) {
    const std::int64_t h = env.body.at("h").get<std::int64_t>();
    const std::int64_t v = env.body.at("v").get<std::int64_t>();
    auto block_doc = block_from_json(env.body.at("block"));
    if (!block_doc) return block_doc.error();
    const LedgerBlock& block = block_doc.value();

    if (h != working_height()) return err(Errc::height_gap, "stale proposal");
    if (v < promised_view_) return err(Errc::bad_transition, "view below promise");
    if (proposer_for(roster(), h, v) != env.src) return err(Errc::unauthorized, "wrong proposer");
    if (block.height != h) return err(Errc::height_gap, "block height mismatch");
    if (block.prev_hash != ledger_.tip_hash()) return err(Errc::prev_hash_mismatch, "proposal");
    if (compute_block_hash(ledger_.domain_id(), block) != block.block_hash)
        return err(Errc::hash_mismatch, "proposal");

    // Full primitive validation before voting.
    StateTable staged = ledger_.state();
    for (const auto& tx : block.tx_list) {
        if (auto st = apply_tx(staged, tx); !st) {
            return err(Errc::tx_invalid, tx.tx_id + ": " + st.error().to_string());
        }
    }

    promised_view_ = v;
    accepted_view_ = v;
    accepted_block_ = block;
    blocks_by_hash_[block.block_hash.hex()] = block;
    ctx.send(env.src, "cs.vote",
             tipped(Json{{"h", h},
                         {"v", v},
                         {"hash", block.block_hash.hex()},
                         {"node", node_id_},
                         {"sig", to_base64(vote_signature(h, block.block_hash))}}));
    arm_view_timer(ctx);
    return Status::ok();
}

void ConsensusEngine::handle_proposal(const Envelope& env, NetCtx& ctx) {
    const std::int64_t h = env.body.at("h").get<std::int64_t>();
    if (h > working_height()) {
        ctx.send(env.src, "cs.sync_req", tipped(Json{{"have", ledger_.tip_height()}}));
        return;
    }
    if (h < working_height()) {
        ctx.send(env.src, "cs.tip_ack", tipped(Json::object()));
        return;
    }
    (void)accept_proposal(env, ctx);
}

void ConsensusEngine::handle_vote(const Envelope& env, NetCtx& ctx) {
    const std::int64_t h = env.body.at("h").get<std::int64_t>();
    if (h != working_height()) return;
    const std::string hash_hex = env.body.at("hash").get<std::string>();
    auto hash = Digest::from_hex(hash_hex);
    if (!hash) return;
    const std::string voter = env.body.at("node").get<std::string>();
    const RosterNode* node = roster().find(voter);
    if (node == nullptr) return;
    auto sig = from_base64(env.body.at("sig").get<std::string>());
    if (!sig) return;
    if (!ed25519().verify(vote_signing_bytes(ledger_.domain_id(), h, *hash), *sig,
                          node->node_public_key)) {
        return;
    }
    votes_by_hash_[hash_hex][voter] = std::move(*sig);
    try_commit(*hash, ctx);
}

void ConsensusEngine::try_commit(const Digest& hash, NetCtx& ctx) {
    const std::string hash_hex = hash.hex();
    auto votes_it = votes_by_hash_.find(hash_hex);
    if (votes_it == votes_by_hash_.end()) return;
    const auto needed = quorum_size(static_cast<std::int64_t>(roster().nodes.size()));
    if (static_cast<std::int64_t>(votes_it->second.size()) < needed) return;
    auto block_it = blocks_by_hash_.find(hash_hex);
    if (block_it == blocks_by_hash_.end()) return;

    LedgerBlock block = block_it->second;
    block.quorum_cert.clear();
    for (const auto& [voter, sig] : votes_it->second) {
        block.quorum_cert.push_back({voter, sig});
    }
    if (append_committed(block, ctx)) {
        broadcast(ctx, "cs.commit", tipped(Json{{"block", block_to_json(block)}}));
        enter_next_height(ctx);
    }
}

bool ConsensusEngine::append_committed(const LedgerBlock& block, NetCtx& ctx) {
    auto st = ledger_.append_block(block);
    if (!st) {
        ctx.net().trace_event(Json{{"ev", "append_reject"},
                                   {"node", node_id_},
                                   {"reason", st.error().to_string()}});
        return false;
    }
    ctx.net().trace_event(Json{{"ev", "commit"},
                               {"node", node_id_},
                               {"d", ledger_.domain_id()},
                               {"h", block.height},
                               {"hash", block.block_hash.hex()},
                               {"txs", static_cast<std::int64_t>(block.tx_list.size())}});
    if (commit_hook_) commit_hook_(block);
    return true;
}

void ConsensusEngine::enter_next_height(NetCtx& ctx) {
    promised_view_ = 0;
    accepted_view_ = -1;
    accepted_block_.reset();
    proposal_outstanding_ = false;
    votes_by_hash_.clear();
    blocks_by_hash_.clear();
    newviews_.clear();
    gc_mempool(ctx.now());
    arm_propose_timer(ctx);
    arm_view_timer(ctx);
    arm_repair_timer(ctx);
}

void ConsensusEngine::handle_commit(const Envelope& env, NetCtx& ctx) {
    auto block_doc = block_from_json(env.body.at("block"));
    if (!block_doc) return;
    const LedgerBlock& block = block_doc.value();
    if (block.height < working_height()) {
        ctx.send(env.src, "cs.tip_ack", tipped(Json::object()));
        return;
    }
    if (block.height > working_height()) {
        ctx.send(env.src, "cs.sync_req", tipped(Json{{"have", ledger_.tip_height()}}));
        return;
    }
    if (append_committed(block, ctx)) {
        // Echo once so a crashed proposer cannot strand the certificate.
        broadcast(ctx, "cs.commit", tipped(Json{{"block", block_to_json(block)}}));
        enter_next_height(ctx);
    }
}

void ConsensusEngine::handle_newview(const Envelope& env, NetCtx& ctx) {
    const std::int64_t h = env.body.at("h").get<std::int64_t>();
    const std::int64_t v = env.body.at("v").get<std::int64_t>();
    if (h != working_height()) return;
    if (proposer_for(roster(), h, v) != node_id_) return;

    NewViewInfo info;
    info.accepted_view = env.body.at("accepted_view").get<std::int64_t>();
    if (env.body.contains("accepted_block")) {
        auto block = block_from_json(env.body.at("accepted_block"));
        if (!block) return;
        info.accepted_block = std::move(block).take();
    }
    newviews_[v][env.src] = std::move(info);

    // This node promises the view it is collecting for.
    if (v > promised_view_) promised_view_ = v;
    NewViewInfo own;
    own.accepted_view = accepted_view_;
    own.accepted_block = accepted_block_;
    newviews_[v][node_id_] = own;

    const auto needed = quorum_size(static_cast<std::int64_t>(roster().nodes.size()));
    if (static_cast<std::int64_t>(newviews_[v].size()) < needed) return;

    // Adopt the highest accepted block among the quorum, else propose fresh.
    std::int64_t best_view = -1;
    std::optional<LedgerBlock> carry;
    for (const auto& [reporter, rep] : newviews_[v]) {
        if (rep.accepted_view > best_view && rep.accepted_block) {
            best_view = rep.accepted_view;
            carry = rep.accepted_block;
        }
    }
    gc_mempool(ctx.now());
    if (!carry && mempool_.empty()) return; // nothing to decide
    LedgerBlock block = carry ? *carry : build_block();
    propose(ctx, v, block);
}

void ConsensusEngine::handle_tip(const Envelope& env, NetCtx& ctx) {
    (void)ctx; // peer tip recorded by the shared preamble
    (void)env;
}

void ConsensusEngine::handle_sync_req(const Envelope& env, NetCtx& ctx) {
    const std::int64_t have = env.body.at("have").get<std::int64_t>();
    const std::int64_t from = have + 1;
    for (std::int64_t h = from; h <= ledger_.tip_height(); ++h) {
        const auto& block = ledger_.blocks()[static_cast<std::size_t>(h)];
        ctx.send(env.src, "cs.commit", tipped(Json{{"block", block_to_json(block)}}));
    }
}

void ConsensusEngine::handle_propose_timer(const Envelope& env, NetCtx& ctx) {
    (void)env;
    propose_timer_armed_ = false;
    gc_mempool(ctx.now());
    const std::int64_t h = working_height();
    if (proposer_for(roster(), h, 0) != node_id_) return;
    if (promised_view_ > 0 || accepted_block_) return; // view 0 passed already
    if (mempool_.empty()) return;
    propose(ctx, 0, build_block());
}

void ConsensusEngine::handle_view_timer(const Envelope& env, NetCtx& ctx) {
    const std::int64_t h = env.body.at("h").get<std::int64_t>();
    view_timer_armed_ = false;
    if (h != working_height()) {
        arm_view_timer(ctx);
        return;
    }
    gc_mempool(ctx.now());
    if (!has_pending_work()) return;
    const std::int64_t v = promised_view_ + 1;
    promised_view_ = v;
    Json body = tipped(Json{{"h", h}, {"v", v}, {"accepted_view", accepted_view_}});
    if (accepted_block_) body["accepted_block"] = block_to_json(*accepted_block_);
    const std::string proposer = proposer_for(roster(), h, v);
    if (proposer == node_id_) {
        Envelope self;
        self.src = node_id_;
        self.dst = node_id_;
        self.type = "cs.newview";
        self.body = body;
        handle_newview(self, ctx);
    } else {
        ctx.send(proposer, "cs.newview", body);
    }
    arm_view_timer(ctx);
}

void ConsensusEngine::handle_repair_timer(const Envelope& env, NetCtx& ctx) {
    (void)env;
    repair_timer_armed_ = false;
    // Push the lowest missing block to every peer known (or assumed) to lag.
    bool any_lagging = false;
    for (const auto& peer : roster().nodes) {
        if (peer.node_id == node_id_) continue;
        auto it = peer_tips_.find(peer.node_id);
        const std::int64_t peer_tip = it == peer_tips_.end() ? -1 : it->second;
        if (peer_tip < ledger_.tip_height()) {
            any_lagging = true;
            const auto& block = ledger_.blocks()[static_cast<std::size_t>(peer_tip + 1)];
            ctx.send(peer.node_id, "cs.commit", tipped(Json{{"block", block_to_json(block)}}));
        }
    }
    if (any_lagging || has_pending_work()) arm_repair_timer(ctx);
}

void ConsensusEngine::note_peer_tip(const std::string& peer, std::int64_t tip) {
    auto& known = peer_tips_[peer];
    known = std::max(known, tip);
}

void ConsensusEngine::arm_propose_timer(NetCtx& ctx) {
    if (propose_timer_armed_) return;
    if (mempool_.empty()) return;
    if (proposer_for(roster(), working_height(), 0) != node_id_) return;
    propose_timer_armed_ = true;
    ctx.timer("cs.t.propose", Json{{"h", working_height()}}, cfg_.propose_interval);
}

void ConsensusEngine::arm_view_timer(NetCtx& ctx) {
    if (view_timer_armed_) return;
    if (!has_pending_work()) return;
    view_timer_armed_ = true;
    const std::int64_t backoff = cfg_.view_timeout * (1 + std::max<std::int64_t>(0, promised_view_));
    ctx.timer("cs.t.view", Json{{"h", working_height()}}, backoff);
}

void ConsensusEngine::arm_repair_timer(NetCtx& ctx) {
    if (repair_timer_armed_) return;
    repair_timer_armed_ = true;
    ctx.timer("cs.t.repair", Json::object(), cfg_.msg_timeout);
}

} // namespace cspsim

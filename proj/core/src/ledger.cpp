#include "cspsim/ledger.hpp"

#include <sstream>

namespace cspsim {

Json NodeRoster::to_json() const {
    Json nodes_doc = Json::array();
    for (const auto& n : nodes) {
        nodes_doc.push_back(Json{{"csp", n.owning_csp_id},
                                 {"node_id", n.node_id},
                                 {"public_key", to_base64(n.node_public_key)},
                                 {"stack_tag", n.stack_tag}});
    }
    return Json{{"domain_id", domain_id}, {"nodes", nodes_doc}};
}

Outcome<NodeRoster> NodeRoster::from_json(const Json& doc) {
    NodeRoster roster;
    try {
        roster.domain_id = doc.at("domain_id").get<std::string>();
        for (const auto& n : doc.at("nodes")) {
            RosterNode node;
            node.node_id = n.at("node_id").get<std::string>();
            node.owning_csp_id = n.at("csp").get<std::string>();
            node.stack_tag = n.at("stack_tag").get<std::string>();
            auto pk = from_base64(n.at("public_key").get<std::string>());
            if (!pk) return err(Errc::parse_error, "bad node public key");
            node.node_public_key = std::move(*pk);
            roster.nodes.push_back(std::move(node));
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return roster;
}

std::int64_t quorum_size(std::int64_t roster_size) {
    return (2 * roster_size) / 3 + 1;
}

Digest compute_block_hash(const std::string& domain_id, const LedgerBlock& block) {
    Json txs = Json::array();
    for (const auto& tx : block.tx_list) txs.push_back(tx_to_json(tx));
    Json doc{
        {"domain", domain_id},
        {"height", block.height},
        {"prev_hash", block.prev_hash.hex()},
        {"proposer", block.proposer},
        {"tx_list", txs},
    };
    return canonical_digest(doc);
}

Bytes vote_signing_bytes(const std::string& domain_id, std::int64_t height,
                         const Digest& block_hash) {
    Json doc{
        {"block_hash", block_hash.hex()},
        {"domain", domain_id},
        {"height", height},
        {"vote", true},
    };
    return canonical_bytes(doc);
}

Json block_to_json(const LedgerBlock& block) {
    Json txs = Json::array();
    for (const auto& tx : block.tx_list) txs.push_back(tx_to_json(tx));
    Json cert = Json::array();
    for (const auto& sig : block.quorum_cert) {
        cert.push_back(Json{{"node", sig.node_id}, {"sig", to_base64(sig.signature)}});
    }
    return Json{
        {"block_hash", block.block_hash.hex()},
        {"height", block.height},
        {"prev_hash", block.prev_hash.hex()},
        {"proposer", block.proposer},
        {"quorum_cert", cert},
        {"tx_list", txs},
    };
}

Outcome<LedgerBlock> block_from_json(const Json& doc) {
    LedgerBlock block;
    try {
        block.height = doc.at("height").get<std::int64_t>();
        auto prev = Digest::from_hex(doc.at("prev_hash").get<std::string>());
        auto hash = Digest::from_hex(doc.at("block_hash").get<std::string>());
        if (!prev || !hash) return err(Errc::parse_error, "bad digest");
        block.prev_hash = *prev;
        block.block_hash = *hash;
        block.proposer = doc.at("proposer").get<std::string>();
        for (const auto& tx_doc : doc.at("tx_list")) {
            auto tx = tx_from_json(tx_doc);
            if (!tx) return tx.error();
            block.tx_list.push_back(std::move(tx).take());
        }
        for (const auto& sig_doc : doc.at("quorum_cert")) {
            QuorumSig sig;
            sig.node_id = sig_doc.at("node").get<std::string>();
            auto raw = from_base64(sig_doc.at("sig").get<std::string>());
            if (!raw) return err(Errc::parse_error, "bad cert signature");
            sig.signature = std::move(*raw);
            block.quorum_cert.push_back(std::move(sig));
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return block;
}

Status Ledger::check_quorum_cert(const LedgerBlock& block, const SignatureScheme& scheme) const {
    const std::int64_t needed = quorum_size(static_cast<std::int64_t>(roster_.nodes.size()));
    std::set<std::string> signers;
    const Bytes message = vote_signing_bytes(domain_id_, block.height, block.block_hash);
    for (const auto& sig : block.quorum_cert) {
        const RosterNode* node = roster_.find(sig.node_id);
        if (node == nullptr)
            return err(Errc::quorum_insufficient, "unknown signer " + sig.node_id);
        if (!scheme.verify(message, sig.signature, node->node_public_key))
            return err(Errc::quorum_insufficient, "bad signature from " + sig.node_id);
        signers.insert(sig.node_id);
    }
    if (static_cast<std::int64_t>(signers.size()) < needed) {
        return err(Errc::quorum_insufficient,
                   std::to_string(signers.size()) + " of " + std::to_string(needed));
    }
    return Status::ok();
}

Status Ledger::apply_block_txs(StateTable& state, const LedgerBlock& block) const {
    ApplyOptions opts;
    opts.genesis = block.height == 0;
    for (const auto& tx : block.tx_list) {
        if (auto st = apply_tx(state, tx, opts); !st) {
            return err(Errc::tx_invalid,
                       "height " + std::to_string(block.height) + " tx " + tx.tx_id + ": " +
                           st.error().to_string());
        }
    }
    state.next_logical_time += 1; // one tick of ledger logical time per block
    return Status::ok();
}

Status Ledger::append_block(const LedgerBlock& block, const SignatureScheme& scheme) {
    const std::int64_t expected = tip_height() + 1;
    if (block.height != expected) {
        return err(Errc::height_gap,
                   "expected " + std::to_string(expected) + " got " + std::to_string(block.height));
    }
    if (block.prev_hash != tip_hash()) {
        return err(Errc::prev_hash_mismatch, "height " + std::to_string(block.height));
    }
    if (compute_block_hash(domain_id_, block) != block.block_hash) {
        return err(Errc::hash_mismatch, "block_hash at height " + std::to_string(block.height));
    }
    if (auto st = check_quorum_cert(block, scheme); !st) return st;

    StateTable next = state_;
    if (auto st = apply_block_txs(next, block); !st) return st;
    blocks_.push_back(block);
    state_ = std::move(next);
    return Status::ok();
}

Status Ledger::verify_chain(const SignatureScheme& scheme) const {
    StateTable replay;
    Digest prev = Digest::zero();
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const LedgerBlock& block = blocks_[i];
        const std::string at = "height " + std::to_string(block.height);
        if (block.height != static_cast<std::int64_t>(i)) return err(Errc::height_gap, at);
        if (block.prev_hash != prev) return err(Errc::prev_hash_mismatch, at);
        if (compute_block_hash(domain_id_, block) != block.block_hash)
            return err(Errc::hash_mismatch, at);
        if (auto st = check_quorum_cert(block, scheme); !st)
            return err(st.error().code, at + ": " + st.error().detail);
        if (auto st = apply_block_txs(replay, block); !st) return st;
        prev = block.block_hash;
    }
    if (!(replay == state_)) {
        return err(Errc::hash_mismatch, "replayed state table differs from live state");
    }
    return Status::ok();
}

Outcome<CustomerView> Ledger::customer_view(const std::string& customer_key_id) const {
    const KeyRecord* rec = state_.find_key(customer_key_id);
    if (rec == nullptr || rec->holder_kind != HolderKind::customer) {
        return err(Errc::customer_unknown, customer_key_id + " not enrolled in " + domain_id_);
    }
    CustomerView view;
    view.customer_key_id = customer_key_id;
    view.domain_id = domain_id_;
    for (const auto& [id, asset] : state_.assets) {
        if (asset.owner_key_id == customer_key_id) {
            view.visible_assets.push_back({asset, false});
        } else if (asset.state == AssetState::escrowed &&
                   asset.escrow->beneficiary_key_id == customer_key_id) {
            view.visible_assets.push_back({asset, true});
        }
    }
    return view;
}

std::string Ledger::dump_ndjson() const {
    std::ostringstream out;
    for (const auto& block : blocks_) {
        out << canonical_dump_or_throw(block_to_json(block)) << '\n';
    }
    return out.str();
}

Outcome<Ledger> Ledger::load_ndjson(const std::string& domain_id, NodeRoster roster,
                                    std::string_view ndjson, const SignatureScheme& scheme) {
    Ledger ledger(domain_id, std::move(roster));
    std::size_t start = 0;
    while (start < ndjson.size()) {
        std::size_t end = ndjson.find('\n', start);
        if (end == std::string_view::npos) end = ndjson.size();
        std::string_view line = ndjson.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        auto doc = parse_json(line);
        if (!doc) return doc.error();
        auto block = block_from_json(doc.value());
        if (!block) return block.error();
        if (auto st = ledger.append_block(block.value(), scheme); !st) return st.error();
    }
    return ledger;
}

} // namespace cspsim

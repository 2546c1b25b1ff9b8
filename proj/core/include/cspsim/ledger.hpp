#pragma once

#include "cspsim/primitives.hpp"
#include "cspsim/roster.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cspsim {

struct QuorumSig {
    std::string node_id;
    Bytes signature;
    bool operator==(const QuorumSig&) const = default;
};

/// Hash-chained batch of validated primitive transactions. block_hash covers
/// (height, prev_hash, tx_list, proposer); votes sign the block hash.
struct LedgerBlock {
    std::int64_t height = 0;
    Digest prev_hash{};
    std::vector<PrimitiveTx> tx_list;
    std::string proposer;
    std::vector<QuorumSig> quorum_cert;
    Digest block_hash{};

    bool operator==(const LedgerBlock&) const = default;
};

Digest compute_block_hash(const std::string& domain_id, const LedgerBlock& block);
/// Canonical bytes a consensus vote signs for a block hash at a height.
Bytes vote_signing_bytes(const std::string& domain_id, std::int64_t height,
                         const Digest& block_hash);

Json block_to_json(const LedgerBlock& block);
Outcome<LedgerBlock> block_from_json(const Json& doc);

struct CustomerView {
    std::string customer_key_id;
    std::string domain_id;
    /// Assets owned by the customer plus assets escrowed to them
    /// (escrowed-in), each tagged with the relationship.
    struct Entry {
        AssetInstance asset;
        bool escrowed_in = false; // true when visible via escrow beneficiary
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> visible_assets;
    bool operator==(const CustomerView&) const = default;
};

/// Per-domain append-only chain plus the state table derived from it. Single
/// writer; snapshots are plain copies.
class Ledger {
  public:
    Ledger() = default;
    Ledger(std::string domain_id, NodeRoster roster)
        : domain_id_(std::move(domain_id)), roster_(std::move(roster)) {}

    const std::string& domain_id() const { return domain_id_; }
    const NodeRoster& roster() const { return roster_; }
    const StateTable& state() const { return state_; }
    const std::vector<LedgerBlock>& blocks() const { return blocks_; }
    std::int64_t tip_height() const { return static_cast<std::int64_t>(blocks_.size()) - 1; }
    Digest tip_hash() const { return blocks_.empty() ? Digest::zero() : blocks_.back().block_hash; }

    /// Extends the chain after checking height continuity, the prev_hash link,
    /// the block hash, and the quorum certificate, then applies every tx. A
    /// failing tx rejects the whole block (consensus pre-validates, so this
    /// signals a protocol bug).
    Status append_block(const LedgerBlock& block,
                        const SignatureScheme& scheme = ed25519());

    /// Full integrity audit: hashes, links, heights, certs, and a replay that
    /// must reproduce the current state table. Reports the first failing
    /// height in the error detail.
    Status verify_chain(const SignatureScheme& scheme = ed25519()) const;

    const AssetInstance* asset_state(const std::string& asset_id) const {
        return state_.find_asset(asset_id);
    }

    Outcome<CustomerView> customer_view(const std::string& customer_key_id) const;

    /// Newline-delimited JSON, one block per line, digests lowercase hex.
    std::string dump_ndjson() const;
    static Outcome<Ledger> load_ndjson(const std::string& domain_id, NodeRoster roster,
                                       std::string_view ndjson,
                                       const SignatureScheme& scheme = ed25519());

    /// Verifies a quorum cert against this ledger's roster.
    Status check_quorum_cert(const LedgerBlock& block, const SignatureScheme& scheme) const;

  private:
    Status apply_block_txs(StateTable& state, const LedgerBlock& block) const;

    std::string domain_id_;
    NodeRoster roster_;
    std::vector<LedgerBlock> blocks_;
    StateTable state_;
};

} // namespace cspsim

#include "cspsim/primitives.hpp"

namespace cspsim {

const char* tx_kind_name(TxKind kind) {
    switch (kind) {
        case TxKind::transfer: return "TRANSFER";
        case TxKind::escrow_create: return "ESCROW_CREATE";
        case TxKind::escrow_release: return "ESCROW_RELEASE";
        case TxKind::escrow_revert: return "ESCROW_REVERT";
        case TxKind::ingress: return "INGRESS";
        case TxKind::egress: return "EGRESS";
        case TxKind::key_op: return "KEY_OP";
        case TxKind::asset_type_op: return "ASSET_TYPE_OP";
    }
    return "?";
}

std::optional<TxKind> tx_kind_from_name(std::string_view name) {
    if (name == "TRANSFER") return TxKind::transfer;
    if (name == "ESCROW_CREATE") return TxKind::escrow_create;
    if (name == "ESCROW_RELEASE") return TxKind::escrow_release;
    if (name == "ESCROW_REVERT") return TxKind::escrow_revert;
    if (name == "INGRESS") return TxKind::ingress;
    if (name == "EGRESS") return TxKind::egress;
    if (name == "KEY_OP") return TxKind::key_op;
    if (name == "ASSET_TYPE_OP") return TxKind::asset_type_op;
    return std::nullopt;
}

const char* key_op_action_name(KeyOpAction action) {
    switch (action) {
        case KeyOpAction::register_key: return "REGISTER";
        case KeyOpAction::rotate: return "ROTATE";
        case KeyOpAction::revoke: return "REVOKE";
    }
    return "?";
}

std::optional<KeyOpAction> key_op_action_from_name(std::string_view name) {
    if (name == "REGISTER") return KeyOpAction::register_key;
    if (name == "ROTATE") return KeyOpAction::rotate;
    if (name == "REVOKE") return KeyOpAction::revoke;
    return std::nullopt;
}

namespace {

Json payload_to_json(const TxPayload& payload) {
    return std::visit(
        [](const auto& p) -> Json {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, TransferPayload>) {
                return Json{{"asset_id", p.asset_id}, {"to_key_id", p.to_key_id}};
            } else if constexpr (std::is_same_v<P, EscrowCreatePayload>) {
                return Json{{"asset_id", p.asset_id},
                            {"beneficiary_key_id", p.beneficiary_key_id},
                            {"condition_tag", p.condition_tag},
                            {"escrow_id", p.escrow_id},
                            {"expiry_at", p.expiry_at}};
            } else if constexpr (std::is_same_v<P, EscrowReleasePayload>) {
                return Json{{"condition_tag", p.condition_tag}, {"escrow_id", p.escrow_id}};
            } else if constexpr (std::is_same_v<P, EscrowRevertPayload>) {
                return Json{{"escrow_id", p.escrow_id}};
            } else if constexpr (std::is_same_v<P, IngressPayload>) {
                return Json{{"asset_id", p.asset_id},
                            {"owner_key_id", p.owner_key_id},
                            {"profile_hash", p.profile_hash.hex()}};
            } else if constexpr (std::is_same_v<P, EgressPayload>) {
                return Json{{"asset_id", p.asset_id},
                            {"dest_domain_id", p.dest_domain_id},
                            {"session_id", p.session_id}};
            } else if constexpr (std::is_same_v<P, KeyOpPayload>) {
                Json doc{{"action", key_op_action_name(p.action)},
                         {"subject_key_id", p.subject_key_id},
                         {"subject_kind", holder_kind_name(p.subject_kind)}};
                if (!p.new_public_key.empty()) doc["new_public_key"] = to_base64(p.new_public_key);
                if (!p.successor_key_id.empty()) doc["successor_key_id"] = p.successor_key_id;
                return doc;
            } else {
                static_assert(std::is_same_v<P, AssetTypeOpPayload>);
                Json doc{{"action", p.action == AssetTypeAction::add ? "ADD" : "REMOVE"},
                         {"profile_hash", p.profile_hash.hex()}};
                if (p.signed_profile) doc["signed_profile"] = signed_profile_to_json(*p.signed_profile);
                return doc;
            }
        },
        payload);
}

Outcome<TxPayload> payload_from_json(TxKind kind, const Json& doc) {
    try {
        switch (kind) {
            case TxKind::transfer: {
                TransferPayload p;
                p.asset_id = doc.at("asset_id").get<std::string>();
                p.to_key_id = doc.at("to_key_id").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::escrow_create: {
                EscrowCreatePayload p;
                p.asset_id = doc.at("asset_id").get<std::string>();
                p.escrow_id = doc.at("escrow_id").get<std::string>();
                p.beneficiary_key_id = doc.at("beneficiary_key_id").get<std::string>();
                p.expiry_at = doc.at("expiry_at").get<std::int64_t>();
                p.condition_tag = doc.at("condition_tag").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::escrow_release: {
                EscrowReleasePayload p;
                p.escrow_id = doc.at("escrow_id").get<std::string>();
                p.condition_tag = doc.at("condition_tag").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::escrow_revert: {
                EscrowRevertPayload p;
                p.escrow_id = doc.at("escrow_id").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::ingress: {
                IngressPayload p;
                auto hash = Digest::from_hex(doc.at("profile_hash").get<std::string>());
                if (!hash) return err(Errc::parse_error, "bad profile_hash");
                p.profile_hash = *hash;
                p.asset_id = doc.at("asset_id").get<std::string>();
                p.owner_key_id = doc.at("owner_key_id").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::egress: {
                EgressPayload p;
                p.asset_id = doc.at("asset_id").get<std::string>();
                p.dest_domain_id = doc.at("dest_domain_id").get<std::string>();
                p.session_id = doc.at("session_id").get<std::string>();
                return TxPayload{p};
            }
            case TxKind::key_op: {
                KeyOpPayload p;
                auto action = key_op_action_from_name(doc.at("action").get<std::string>());
                auto kind_v = holder_kind_from_name(doc.at("subject_kind").get<std::string>());
                if (!action || !kind_v) return err(Errc::parse_error, "bad key op fields");
                p.action = *action;
                p.subject_kind = *kind_v;
                p.subject_key_id = doc.at("subject_key_id").get<std::string>();
                if (doc.contains("new_public_key")) {
                    auto pk = from_base64(doc.at("new_public_key").get<std::string>());
                    if (!pk) return err(Errc::parse_error, "bad new_public_key");
                    p.new_public_key = std::move(*pk);
                }
                if (doc.contains("successor_key_id")) {
                    p.successor_key_id = doc.at("successor_key_id").get<std::string>();
                }
                return TxPayload{p};
            }
            case TxKind::asset_type_op: {
                AssetTypeOpPayload p;
                const auto action = doc.at("action").get<std::string>();
                if (action == "ADD") {
                    p.action = AssetTypeAction::add;
                } else if (action == "REMOVE") {
                    p.action = AssetTypeAction::remove;
                } else {
                    return err(Errc::parse_error, "bad asset type action");
                }
                auto hash = Digest::from_hex(doc.at("profile_hash").get<std::string>());
                if (!hash) return err(Errc::parse_error, "bad profile_hash");
                p.profile_hash = *hash;
                if (doc.contains("signed_profile")) {
                    auto sp = signed_profile_from_json(doc.at("signed_profile"));
                    if (!sp) return sp.error();
                    p.signed_profile = std::move(sp).take();
                }
                return TxPayload{p};
            }
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return err(Errc::parse_error, "unknown tx kind");
}

} // namespace

Json tx_to_json(const PrimitiveTx& tx) {
    return Json{
        {"kind", tx_kind_name(tx.kind)},
        {"payload", payload_to_json(tx.payload)},
        {"signature", to_base64(tx.submitter_signature)},
        {"submitter", tx.submitter_key_id},
        {"tx_id", tx.tx_id},
    };
}

Outcome<PrimitiveTx> tx_from_json(const Json& doc) {
    try {
        PrimitiveTx tx;
        auto kind = tx_kind_from_name(doc.at("kind").get<std::string>());
        if (!kind) return err(Errc::parse_error, "unknown tx kind");
        tx.kind = *kind;
        tx.tx_id = doc.at("tx_id").get<std::string>();
        tx.submitter_key_id = doc.at("submitter").get<std::string>();
        auto sig = from_base64(doc.at("signature").get<std::string>());
        if (!sig) return err(Errc::parse_error, "bad signature base64");
        tx.submitter_signature = std::move(*sig);
        auto payload = payload_from_json(tx.kind, doc.at("payload"));
        if (!payload) return payload.error();
        tx.payload = std::move(payload).take();
        return tx;
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
}

Bytes tx_signing_bytes(const PrimitiveTx& tx) {
    Json doc{
        {"kind", tx_kind_name(tx.kind)},
        {"payload", payload_to_json(tx.payload)},
        {"submitter", tx.submitter_key_id},
        {"tx_id", tx.tx_id},
    };
    return canonical_bytes(doc);
}

PrimitiveTx make_signed_tx(std::string tx_id, TxKind kind, TxPayload payload,
                           std::string submitter_key_id, const Bytes& submitter_secret,
                           const SignatureScheme& scheme) {
    PrimitiveTx tx;
    tx.tx_id = std::move(tx_id);
    tx.kind = kind;
    tx.payload = std::move(payload);
    tx.submitter_key_id = std::move(submitter_key_id);
    tx.submitter_signature = scheme.sign(tx_signing_bytes(tx), submitter_secret);
    return tx;
}

PrimitiveTx make_genesis_tx(std::string tx_id, TxKind kind, TxPayload payload) {
    PrimitiveTx tx;
    tx.tx_id = std::move(tx_id);
    tx.kind = kind;
    tx.payload = std::move(payload);
    tx.submitter_key_id = kGenesisSubmitter;
    return tx;
}

namespace {

/// True when `controller` may act for assets owned by `owner`: either the
/// same key, or the terminal successor of the owner's rotation chain.
bool controls(const StateTable& state, const std::string& controller, const std::string& owner) {
    if (controller == owner) return true;
    const KeyRecord* terminal = state.terminal_successor(owner);
    return terminal != nullptr && terminal->key_id == controller;
}

Status check_submitter_signature(const StateTable& state, const PrimitiveTx& tx,
                                 const ApplyOptions& opts) {
    if (opts.genesis && tx.submitter_key_id == kGenesisSubmitter) return Status::ok();
    const KeyRecord* rec = state.find_key(tx.submitter_key_id);
    if (rec == nullptr) return err(Errc::key_unknown, tx.submitter_key_id);
    if (rec->status != KeyStatus::active) return err(Errc::key_invalid, tx.submitter_key_id);
    if (!opts.scheme->verify(tx_signing_bytes(tx), tx.submitter_signature, rec->public_key)) {
        return err(Errc::signature_invalid, "tx " + tx.tx_id);
    }
    return Status::ok();
}

} // namespace

Status apply_transfer(StateTable& state, const TransferPayload& p, const PrimitiveTx& tx) {
    auto it = state.assets.find(p.asset_id);
    if (it == state.assets.end())
        return err(Errc::asset_not_live, "unknown asset " + p.asset_id);
    AssetInstance& asset = it->second;
    if (asset.state != AssetState::live)
        return err(Errc::asset_not_live, p.asset_id);
    if (!controls(state, tx.submitter_key_id, asset.owner_key_id))
        return err(Errc::not_owner, tx.submitter_key_id);
    const KeyRecord* to = state.find_key(p.to_key_id);
    if (to == nullptr || to->status != KeyStatus::active)
        return err(Errc::recipient_unknown, p.to_key_id);
    if (to->holder_kind != HolderKind::customer)
        return err(Errc::recipient_not_customer, p.to_key_id);
    asset.owner_key_id = p.to_key_id;
    return Status::ok();
}

Status apply_escrow_create(StateTable& state, const EscrowCreatePayload& p,
                           const PrimitiveTx& tx) {
    auto it = state.assets.find(p.asset_id);
    if (it == state.assets.end())
        return err(Errc::asset_not_live, "unknown asset " + p.asset_id);
    AssetInstance& asset = it->second;
    if (asset.state != AssetState::live) return err(Errc::asset_not_live, p.asset_id);
    if (!controls(state, tx.submitter_key_id, asset.owner_key_id))
        return err(Errc::not_owner, tx.submitter_key_id);
    const KeyRecord* beneficiary = state.find_key(p.beneficiary_key_id);
    if (beneficiary == nullptr || beneficiary->status != KeyStatus::active ||
        (beneficiary->holder_kind != HolderKind::customer &&
         beneficiary->holder_kind != HolderKind::csp)) {
        return err(Errc::beneficiary_unknown, p.beneficiary_key_id);
    }
    if (p.expiry_at <= state.next_logical_time)
        return err(Errc::expiry_in_past, std::to_string(p.expiry_at));
    if (state.escrow_index.contains(p.escrow_id))
        return err(Errc::tx_invalid, "escrow_id already exists: " + p.escrow_id);
    EscrowTerms terms;
    terms.escrow_id = p.escrow_id;
    terms.beneficiary_key_id = p.beneficiary_key_id;
    terms.created_at = state.next_logical_time;
    terms.expiry_at = p.expiry_at;
    terms.condition_tag = p.condition_tag;
    asset.state = AssetState::escrowed;
    asset.escrow = std::move(terms);
    state.escrow_index[p.escrow_id] = p.asset_id;
    return Status::ok();
}

Status apply_escrow_release(StateTable& state, const EscrowReleasePayload& p,
                            const PrimitiveTx& tx) {
    auto idx = state.escrow_index.find(p.escrow_id);
    if (idx == state.escrow_index.end()) return err(Errc::escrow_unknown, p.escrow_id);
    AssetInstance& asset = state.assets.at(idx->second);
    const EscrowTerms& terms = *asset.escrow;
    // Expiry boundary is inclusive for revert: at expiry_at the release loses.
    if (state.next_logical_time >= terms.expiry_at)
        return err(Errc::escrow_expired, p.escrow_id);
    if (!controls(state, tx.submitter_key_id, terms.beneficiary_key_id))
        return err(Errc::not_beneficiary, tx.submitter_key_id);
    if (p.condition_tag != terms.condition_tag)
        return err(Errc::condition_mismatch, p.condition_tag);
    asset.owner_key_id = terms.beneficiary_key_id;
    asset.state = AssetState::live;
    asset.escrow.reset();
    state.escrow_index.erase(idx);
    return Status::ok();
}

Status apply_escrow_revert(StateTable& state, const EscrowRevertPayload& p,
                           const PrimitiveTx& tx) {
    (void)tx; // any registered key may trigger an expired revert
    auto idx = state.escrow_index.find(p.escrow_id);
    if (idx == state.escrow_index.end()) return err(Errc::escrow_unknown, p.escrow_id);
    AssetInstance& asset = state.assets.at(idx->second);
    if (state.next_logical_time < asset.escrow->expiry_at)
        return err(Errc::escrow_not_expired, p.escrow_id);
    asset.state = AssetState::live;
    asset.escrow.reset();
    state.escrow_index.erase(idx);
    return Status::ok();
}

Status apply_ingress(StateTable& state, const IngressPayload& p, const PrimitiveTx& tx) {
    const bool genesis = tx.submitter_key_id == kGenesisSubmitter;
    if (!genesis && !state.is_active_kind(tx.submitter_key_id, HolderKind::csp))
        return err(Errc::not_csp, tx.submitter_key_id);
    if (!state.asset_types.contains(p.profile_hash))
        return err(Errc::asset_type_not_admitted, p.profile_hash.hex());
    if (state.assets.contains(p.asset_id)) return err(Errc::duplicate_asset_id, p.asset_id);
    const KeyRecord* owner = state.find_key(p.owner_key_id);
    if (owner == nullptr || owner->status != KeyStatus::active ||
        owner->holder_kind != HolderKind::customer) {
        return err(Errc::owner_unknown, p.owner_key_id);
    }
    AssetInstance asset;
    asset.asset_id = p.asset_id;
    asset.profile_hash = p.profile_hash;
    asset.owner_key_id = p.owner_key_id;
    asset.state = AssetState::live;
    asset.provenance_tx_id = tx.tx_id;
    state.assets[p.asset_id] = std::move(asset);
    state.ingress_count[p.profile_hash] += 1;
    return Status::ok();
}

Status apply_egress(StateTable& state, const EgressPayload& p, const PrimitiveTx& tx) {
    if (!state.is_active_kind(tx.submitter_key_id, HolderKind::csp))
        return err(Errc::not_csp, tx.submitter_key_id);
    auto it = state.assets.find(p.asset_id);
    if (it == state.assets.end()) return err(Errc::asset_not_locked, "unknown asset");
    AssetInstance& asset = it->second;
    if (asset.state != AssetState::escrowed ||
        asset.escrow->beneficiary_key_id != tx.submitter_key_id) {
        return err(Errc::asset_not_locked, p.asset_id);
    }
    if (asset.escrow->condition_tag != p.session_id)
        return err(Errc::session_mismatch, p.session_id);
    const std::string escrow_id = asset.escrow->escrow_id;
    asset.state = AssetState::egressed;
    asset.escrow.reset();
    asset.egress_dest_domain = p.dest_domain_id;
    asset.egress_session_id = p.session_id;
    state.escrow_index.erase(escrow_id);
    return Status::ok();
}

Status apply_key_op(StateTable& state, const KeyOpPayload& p, const PrimitiveTx& tx) {
    const bool genesis = tx.submitter_key_id == kGenesisSubmitter;
    if (p.subject_kind != HolderKind::customer && p.subject_kind != HolderKind::csp &&
        p.subject_kind != HolderKind::profile_authority) {
        return err(Errc::unauthorized, "subject kind not managed on-ledger");
    }
    if (!genesis) {
        if (!state.is_active_kind(tx.submitter_key_id, HolderKind::csp))
            return err(Errc::unauthorized, tx.submitter_key_id);
        // A CSP key may not create or rotate itself into existence.
        if (p.subject_kind == HolderKind::csp && tx.submitter_key_id == p.subject_key_id)
            return err(Errc::unauthorized, "csp key op must be signed by a different csp");
        if (p.subject_kind == HolderKind::profile_authority)
            return err(Errc::unauthorized, "profile authority keys are genesis-seeded");
    }
    switch (p.action) {
        case KeyOpAction::register_key: {
            if (state.keys.contains(p.subject_key_id))
                return err(Errc::bad_transition, "key exists: " + p.subject_key_id);
            if (p.new_public_key.empty()) return err(Errc::key_invalid, "missing public key");
            KeyRecord rec;
            rec.key_id = p.subject_key_id;
            rec.public_key = p.new_public_key;
            rec.holder_kind = p.subject_kind;
            rec.status = KeyStatus::active;
            state.keys[rec.key_id] = std::move(rec);
            return Status::ok();
        }
        case KeyOpAction::rotate: {
            auto it = state.keys.find(p.subject_key_id);
            if (it == state.keys.end()) return err(Errc::key_unknown, p.subject_key_id);
            if (it->second.status != KeyStatus::active)
                return err(Errc::bad_transition, key_status_name(it->second.status));
            if (p.successor_key_id.empty() || p.new_public_key.empty())
                return err(Errc::key_invalid, "rotation requires successor id and key");
            if (state.keys.contains(p.successor_key_id))
                return err(Errc::bad_transition, "successor exists: " + p.successor_key_id);
            it->second.status = KeyStatus::rotated;
            it->second.successor = p.successor_key_id;
            KeyRecord rec;
            rec.key_id = p.successor_key_id;
            rec.public_key = p.new_public_key;
            rec.holder_kind = it->second.holder_kind;
            rec.status = KeyStatus::active;
            state.keys[rec.key_id] = std::move(rec);
            return Status::ok();
        }
        case KeyOpAction::revoke: {
            auto it = state.keys.find(p.subject_key_id);
            if (it == state.keys.end()) return err(Errc::key_unknown, p.subject_key_id);
            if (it->second.status != KeyStatus::active)
                return err(Errc::bad_transition, key_status_name(it->second.status));
            it->second.status = KeyStatus::revoked;
            it->second.successor.reset();
            return Status::ok();
        }
    }
    return err(Errc::unauthorized, "unknown key op");
}

Status apply_asset_type_op(StateTable& state, const AssetTypeOpPayload& p,
                           const PrimitiveTx& tx) {
    const bool genesis = tx.submitter_key_id == kGenesisSubmitter;
    if (!genesis && !state.is_active_kind(tx.submitter_key_id, HolderKind::csp))
        return err(Errc::not_csp, tx.submitter_key_id);
    switch (p.action) {
        case AssetTypeAction::add: {
            if (!p.signed_profile)
                return err(Errc::profile_invalid, "ADD requires the signed profile");
            if (p.signed_profile->profile_hash != p.profile_hash)
                return err(Errc::profile_invalid, "profile_hash mismatch");
            const KeyRegistry registry = state.registry_view();
            if (auto st = verify_profile(*p.signed_profile, registry); !st)
                return err(Errc::profile_invalid, st.error().to_string());
            state.asset_types.insert(p.profile_hash); // idempotent
            return Status::ok();
        }
        case AssetTypeAction::remove: {
            if (!state.asset_types.contains(p.profile_hash))
                return err(Errc::type_unknown, p.profile_hash.hex());
            for (const auto& [id, asset] : state.assets) {
                if (asset.profile_hash == p.profile_hash && asset.state != AssetState::egressed)
                    return err(Errc::type_in_use, id);
            }
            state.asset_types.erase(p.profile_hash);
            return Status::ok();
        }
    }
    return err(Errc::type_unknown, "unknown asset type op");
}

Status apply_tx(StateTable& state, const PrimitiveTx& tx, const ApplyOptions& opts) {
    if (tx.tx_id.empty()) return err(Errc::tx_invalid, "empty tx_id");
    if (state.applied_tx_ids.contains(tx.tx_id))
        return err(Errc::tx_invalid, "duplicate tx_id: " + tx.tx_id);
    if (auto st = check_submitter_signature(state, tx, opts); !st) return st;

    Status result = std::visit(
        [&](const auto& payload) -> Status {
            using P = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<P, TransferPayload>) {
                if (tx.kind != TxKind::transfer) return err(Errc::tx_invalid, "kind mismatch");
                return apply_transfer(state, payload, tx);
            } else if constexpr (std::is_same_v<P, EscrowCreatePayload>) {
                if (tx.kind != TxKind::escrow_create) return err(Errc::tx_invalid, "kind mismatch");
                return apply_escrow_create(state, payload, tx);
            } else if constexpr (std::is_same_v<P, EscrowReleasePayload>) {
                if (tx.kind != TxKind::escrow_release)
                    return err(Errc::tx_invalid, "kind mismatch");
                return apply_escrow_release(state, payload, tx);
            } else if constexpr (std::is_same_v<P, EscrowRevertPayload>) {
                if (tx.kind != TxKind::escrow_revert) return err(Errc::tx_invalid, "kind mismatch");
                return apply_escrow_revert(state, payload, tx);
            } else if constexpr (std::is_same_v<P, IngressPayload>) {
                if (tx.kind != TxKind::ingress) return err(Errc::tx_invalid, "kind mismatch");
                return apply_ingress(state, payload, tx);
            } else if constexpr (std::is_same_v<P, EgressPayload>) {
                if (tx.kind != TxKind::egress) return err(Errc::tx_invalid, "kind mismatch");
                return apply_egress(state, payload, tx);
            } else if constexpr (std::is_same_v<P, KeyOpPayload>) {
                if (tx.kind != TxKind::key_op) return err(Errc::tx_invalid, "kind mismatch");
                return apply_key_op(state, payload, tx);
            } else {
                if (tx.kind != TxKind::asset_type_op) return err(Errc::tx_invalid, "kind mismatch");
                return apply_asset_type_op(state, payload, tx);
            }
        },
        tx.payload);
    if (result) state.applied_tx_ids.insert(tx.tx_id);
    return result;
}

Status validate_tx(const StateTable& state, const PrimitiveTx& tx, const ApplyOptions& opts) {
    StateTable scratch = state;
    return apply_tx(scratch, tx, opts);
}

OpCostTable OpCostTable::defaults() {
    OpCostTable table;
    table.cost_units = {
        {TxKind::transfer, 10},       {TxKind::escrow_create, 15}, {TxKind::escrow_release, 15},
        {TxKind::escrow_revert, 15},  {TxKind::ingress, 25},       {TxKind::egress, 25},
        {TxKind::key_op, 5},          {TxKind::asset_type_op, 20},
    };
    return table;
}

std::int64_t OpCostTable::op_cost(TxKind kind) const {
    auto it = cost_units.find(kind);
    return it == cost_units.end() ? 0 : it->second;
}

Json OpCostTable::to_json() const {
    Json doc = Json::object();
    for (const auto& [kind, units] : cost_units) doc[tx_kind_name(kind)] = units;
    return doc;
}

Outcome<OpCostTable> OpCostTable::from_json(const Json& doc) {
    OpCostTable table;
    for (const auto& [name, units] : doc.items()) {
        auto kind = tx_kind_from_name(name);
        if (!kind) return err(Errc::parse_error, "unknown op kind " + name);
        if (!units.is_number_integer() || units.get<std::int64_t>() <= 0)
            return err(Errc::parse_error, "op cost must be a positive integer");
        table.cost_units[*kind] = units.get<std::int64_t>();
    }
    return table;
}

const FeeTier* FeeSchedule::tier_of(const std::string& customer) const {
    auto it = assignment.find(customer);
    if (it == assignment.end()) return nullptr;
    for (const auto& tier : tiers) {
        if (tier.name == it->second) return &tier;
    }
    return nullptr;
}

Json FeeSchedule::to_json() const {
    Json tiers_doc = Json::array();
    for (const auto& t : tiers) {
        tiers_doc.push_back(Json{{"monthly_included_invocations", t.monthly_included_invocations},
                                 {"name", t.name},
                                 {"per_extra_invocation_fee", t.per_extra_invocation_fee}});
    }
    return Json{{"assignment", assignment}, {"tiers", tiers_doc}};
}

Outcome<FeeSchedule> FeeSchedule::from_json(const Json& doc) {
    FeeSchedule schedule;
    try {
        for (const auto& t : doc.at("tiers")) {
            FeeTier tier;
            tier.name = t.at("name").get<std::string>();
            tier.monthly_included_invocations =
                t.at("monthly_included_invocations").get<std::int64_t>();
            tier.per_extra_invocation_fee = t.at("per_extra_invocation_fee").get<std::int64_t>();
            schedule.tiers.push_back(std::move(tier));
        }
        if (doc.contains("assignment")) {
            schedule.assignment =
                doc.at("assignment").get<std::map<std::string, std::string>>();
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return schedule;
}

Outcome<std::int64_t> invoke_fee(const FeeSchedule& schedule, const std::string& customer,
                                 std::int64_t running_count) {
    const FeeTier* tier = schedule.tier_of(customer);
    if (tier == nullptr) return err(Errc::customer_unassigned, customer);
    if (running_count <= tier->monthly_included_invocations) return std::int64_t{0};
    return tier->per_extra_invocation_fee;
}

} // namespace cspsim

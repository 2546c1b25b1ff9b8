#include "cspsim/state.hpp"

namespace cspsim {

const KeyRecord* StateTable::terminal_successor(const std::string& key_id) const {
    const KeyRecord* rec = find_key(key_id);
    int hops = 0;
    while (rec != nullptr && rec->status == KeyStatus::rotated && rec->successor) {
        rec = find_key(*rec->successor);
        if (++hops > 64) return nullptr; // defensive bound; chains are short
    }
    return rec;
}

KeyRegistry StateTable::registry_view() const {
    KeyRegistry reg;
    reg.records = keys;
    return reg;
}

namespace {

Json key_record_to_json(const KeyRecord& rec) {
    Json doc{
        {"key_id", rec.key_id},
        {"kind", holder_kind_name(rec.holder_kind)},
        {"public_key", to_base64(rec.public_key)},
        {"status", key_status_name(rec.status)},
    };
    if (rec.successor) doc["successor"] = *rec.successor;
    return doc;
}

Outcome<KeyRecord> key_record_from_json(const Json& doc) {
    KeyRecord rec;
    try {
        rec.key_id = doc.at("key_id").get<std::string>();
        auto kind = holder_kind_from_name(doc.at("kind").get<std::string>());
        auto status = key_status_from_name(doc.at("status").get<std::string>());
        if (!kind || !status) return err(Errc::parse_error, "bad key kind/status");
        rec.holder_kind = *kind;
        rec.status = *status;
        auto pk = from_base64(doc.at("public_key").get<std::string>());
        if (!pk) return err(Errc::parse_error, "bad public_key base64");
        rec.public_key = std::move(*pk);
        if (doc.contains("successor")) rec.successor = doc.at("successor").get<std::string>();
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return rec;
}

Json asset_to_json(const AssetInstance& a) {
    Json doc{
        {"asset_id", a.asset_id},
        {"owner_key_id", a.owner_key_id},
        {"profile_hash", a.profile_hash.hex()},
        {"provenance_tx_id", a.provenance_tx_id},
        {"state", asset_state_name(a.state)},
    };
    if (a.escrow) {
        doc["escrow"] = Json{
            {"beneficiary_key_id", a.escrow->beneficiary_key_id},
            {"condition_tag", a.escrow->condition_tag},
            {"created_at", a.escrow->created_at},
            {"escrow_id", a.escrow->escrow_id},
            {"expiry_at", a.escrow->expiry_at},
        };
    }
    if (a.state == AssetState::egressed) {
        doc["egress_dest_domain"] = a.egress_dest_domain;
        doc["egress_session_id"] = a.egress_session_id;
    }
    return doc;
}

Outcome<AssetInstance> asset_from_json(const Json& doc) {
    AssetInstance a;
    try {
        a.asset_id = doc.at("asset_id").get<std::string>();
        a.owner_key_id = doc.at("owner_key_id").get<std::string>();
        auto hash = Digest::from_hex(doc.at("profile_hash").get<std::string>());
        if (!hash) return err(Errc::parse_error, "bad profile_hash");
        a.profile_hash = *hash;
        a.provenance_tx_id = doc.at("provenance_tx_id").get<std::string>();
        auto st = asset_state_from_name(doc.at("state").get<std::string>());
        if (!st) return err(Errc::parse_error, "bad asset state");
        a.state = *st;
        if (doc.contains("escrow")) {
            const Json& e = doc.at("escrow");
            EscrowTerms terms;
            terms.escrow_id = e.at("escrow_id").get<std::string>();
            terms.beneficiary_key_id = e.at("beneficiary_key_id").get<std::string>();
            terms.created_at = e.at("created_at").get<std::int64_t>();
            terms.expiry_at = e.at("expiry_at").get<std::int64_t>();
            terms.condition_tag = e.at("condition_tag").get<std::string>();
            a.escrow = std::move(terms);
        }
        if (doc.contains("egress_dest_domain")) {
            a.egress_dest_domain = doc.at("egress_dest_domain").get<std::string>();
            a.egress_session_id = doc.at("egress_session_id").get<std::string>();
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return a;
}

} // namespace

Json StateTable::to_json() const {
    Json assets_doc = Json::object();
    for (const auto& [id, asset] : assets) assets_doc[id] = asset_to_json(asset);
    Json keys_doc = Json::object();
    for (const auto& [id, rec] : keys) keys_doc[id] = key_record_to_json(rec);
    Json types_doc = Json::array();
    for (const auto& hash : asset_types) types_doc.push_back(hash.hex());
    Json ingress_doc = Json::object();
    for (const auto& [hash, count] : ingress_count) ingress_doc[hash.hex()] = count;
    return Json{
        {"assets", assets_doc},
        {"asset_types", types_doc},
        {"ingress_count", ingress_doc},
        {"keys", keys_doc},
        {"next_logical_time", next_logical_time},
    };
}

Outcome<StateTable> StateTable::from_json(const Json& doc) {
    StateTable table;
    try {
        for (const auto& [id, asset_doc] : doc.at("assets").items()) {
            auto asset = asset_from_json(asset_doc);
            if (!asset) return asset.error();
            if (asset.value().escrow) {
                table.escrow_index[asset.value().escrow->escrow_id] = id;
            }
            table.assets[id] = std::move(asset).take();
        }
        for (const auto& [id, rec_doc] : doc.at("keys").items()) {
            auto rec = key_record_from_json(rec_doc);
            if (!rec) return rec.error();
            table.keys[id] = std::move(rec).take();
        }
        for (const auto& hash_text : doc.at("asset_types")) {
            auto hash = Digest::from_hex(hash_text.get<std::string>());
            if (!hash) return err(Errc::parse_error, "bad asset type hash");
            table.asset_types.insert(*hash);
        }
        for (const auto& [hash_text, count] : doc.at("ingress_count").items()) {
            auto hash = Digest::from_hex(hash_text);
            if (!hash) return err(Errc::parse_error, "bad ingress hash");
            table.ingress_count[*hash] = count.get<std::int64_t>();
        }
        table.next_logical_time = doc.at("next_logical_time").get<std::int64_t>();
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return table;
}

} // namespace cspsim

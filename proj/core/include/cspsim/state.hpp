#pragma once

#include "cspsim/model.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace cspsim {

/// Per-domain state derived by replaying the chain from genesis. Replay of the
/// same chain always yields the same table; operator== is field-for-field.
struct StateTable {
    std::map<std::string, AssetInstance> assets;
    std::map<std::string, KeyRecord> keys;
    std::set<Digest> asset_types;
    std::int64_t next_logical_time = 0;

    // Derived bookkeeping (deterministic functions of the applied history).
    std::map<std::string, std::string> escrow_index; // escrow_id -> asset_id
    std::set<std::string> applied_tx_ids;
    std::map<Digest, std::int64_t> ingress_count; // per profile_hash

    bool operator==(const StateTable&) const = default;

    const AssetInstance* find_asset(const std::string& asset_id) const {
        auto it = assets.find(asset_id);
        return it == assets.end() ? nullptr : &it->second;
    }
    const KeyRecord* find_key(const std::string& key_id) const {
        auto it = keys.find(key_id);
        return it == keys.end() ? nullptr : &it->second;
    }

    bool is_active_kind(const std::string& key_id, HolderKind kind) const {
        const KeyRecord* rec = find_key(key_id);
        return rec != nullptr && rec->status == KeyStatus::active && rec->holder_kind == kind;
    }

    /// Follows ROTATED successor links to the terminal record. Used to let a
    /// customer's current key act for assets still owned by a rotated key_id.
    const KeyRecord* terminal_successor(const std::string& key_id) const;

    /// Registry view over this domain's keys (for profile verification).
    KeyRegistry registry_view() const;

    Json to_json() const;
    static Outcome<StateTable> from_json(const Json& doc);
};

} // namespace cspsim

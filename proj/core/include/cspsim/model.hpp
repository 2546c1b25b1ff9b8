#pragma once

#include "cspsim/bytes.hpp"
#include "cspsim/canonical.hpp"
#include "cspsim/crypto.hpp"
#include "cspsim/result.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cspsim {

/// Prospectus metadata that authoritatively defines an asset type. The
/// denomination is an opaque label: nothing in the ledger, consensus, or
/// gateway paths ever interprets it numerically.
struct AssetProfile {
    std::string profile_id;
    std::string asset_code;
    std::string issuing_authority;
    std::string denomination;
    std::int64_t issue_date = 0; // day count
    std::vector<std::string> circulation_systems;
    std::vector<std::string> jurisdictions;
    std::vector<std::string> validation_urls;
    std::string authority_key_id;

    bool operator==(const AssetProfile&) const = default;
};

Status check_profile(const AssetProfile& profile);

/// Canonical bytes of the profile document (sorted keys, compact, UTF-8,
/// integer numerics). Identical profiles yield identical byte strings
/// regardless of the order fields were populated in.
Outcome<Bytes> canonicalize_profile(const AssetProfile& profile);

Json profile_to_json(const AssetProfile& profile);
Outcome<AssetProfile> profile_from_json(const Json& doc);

enum class HolderKind { customer, csp, profile_authority, issuer, acquirer };
enum class KeyStatus { active, rotated, revoked };

const char* holder_kind_name(HolderKind kind);
const char* key_status_name(KeyStatus status);
std::optional<HolderKind> holder_kind_from_name(std::string_view name);
std::optional<KeyStatus> key_status_from_name(std::string_view name);

struct KeyRecord {
    std::string key_id;
    Bytes public_key;
    HolderKind holder_kind = HolderKind::customer;
    KeyStatus status = KeyStatus::active;
    std::optional<std::string> successor;

    bool operator==(const KeyRecord&) const = default;
};

/// In-memory key registry; the only key-discovery mechanism in the model.
struct KeyRegistry {
    std::map<std::string, KeyRecord> records;

    const KeyRecord* find(const std::string& key_id) const {
        auto it = records.find(key_id);
        return it == records.end() ? nullptr : &it->second;
    }
    void put(KeyRecord record) { records[record.key_id] = std::move(record); }

    bool operator==(const KeyRegistry&) const = default;
};

struct SignedAssetProfile {
    AssetProfile profile;
    Bytes signature;
    Digest profile_hash{};

    bool operator==(const SignedAssetProfile&) const = default;
};

Outcome<SignedAssetProfile> sign_profile(const AssetProfile& profile,
                                         const KeyRecord& authority_record,
                                         const Bytes& authority_secret,
                                         const SignatureScheme& scheme = ed25519());

/// ok iff the signature verifies under the ACTIVE key named by
/// authority_key_id and profile_hash matches the recomputed digest. Historical
/// signatures under since-revoked or rotated keys are rejected.
Status verify_profile(const SignedAssetProfile& sp, const KeyRegistry& registry,
                      const SignatureScheme& scheme = ed25519());

/// Wire form: {"profile": {...}, "signature": base64, "profile_hash": hex}.
Json signed_profile_to_json(const SignedAssetProfile& sp);
Outcome<SignedAssetProfile> signed_profile_from_json(const Json& doc);

struct Jurisdiction {
    std::string code;
    std::set<Digest> permitted_profile_hashes;
    std::set<std::string> permitted_asset_codes;

    bool operator==(const Jurisdiction&) const = default;
};

struct EscrowTerms {
    std::string escrow_id;
    std::string beneficiary_key_id;
    std::int64_t created_at = 0; // logical time
    std::int64_t expiry_at = 0;  // logical time; must be > created_at
    std::string condition_tag;

    bool operator==(const EscrowTerms&) const = default;
};

enum class AssetState { live, escrowed, egressed };
const char* asset_state_name(AssetState state);
std::optional<AssetState> asset_state_from_name(std::string_view name);

/// A ledger-resident asset instance. Instances carry no amount; fungible
/// quantity is modeled as many instances of one profile.
struct AssetInstance {
    std::string asset_id;
    Digest profile_hash{};
    std::string owner_key_id;
    AssetState state = AssetState::live;
    std::optional<EscrowTerms> escrow;
    std::string provenance_tx_id;
    // set when state == egressed
    std::string egress_dest_domain;
    std::string egress_session_id;

    bool operator==(const AssetInstance&) const = default;
};

} // namespace cspsim

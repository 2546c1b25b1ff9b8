#include "cspsim/model.hpp"

namespace cspsim {

Status check_profile(const AssetProfile& profile) {
    if (profile.profile_id.empty()) return err(Errc::field_invalid, "profile_id empty");
    if (profile.asset_code.empty()) return err(Errc::field_invalid, "asset_code empty");
    if (profile.issuing_authority.empty())
        return err(Errc::field_invalid, "issuing_authority empty");
    if (profile.denomination.empty()) return err(Errc::field_invalid, "denomination empty");
    if (profile.jurisdictions.empty()) return err(Errc::field_invalid, "jurisdictions empty");
    if (profile.circulation_systems.empty())
        return err(Errc::field_invalid, "circulation_systems empty");
    if (profile.authority_key_id.empty())
        return err(Errc::field_invalid, "authority_key_id empty");
    if (profile.issue_date < 0) return err(Errc::field_invalid, "issue_date negative");
    return Status::ok();
}

Json profile_to_json(const AssetProfile& p) {
    return Json{
        {"asset_code", p.asset_code},
        {"authority_key_id", p.authority_key_id},
        {"circulation_systems", p.circulation_systems},
        {"denomination", p.denomination},
        {"issue_date", p.issue_date},
        {"issuing_authority", p.issuing_authority},
        {"jurisdictions", p.jurisdictions},
        {"profile_id", p.profile_id},
        {"validation_urls", p.validation_urls},
    };
}

Outcome<AssetProfile> profile_from_json(const Json& doc) {
    if (!doc.is_object()) return err(Errc::parse_error, "profile document must be an object");
    AssetProfile p;
    try {
        p.profile_id = doc.at("profile_id").get<std::string>();
        p.asset_code = doc.at("asset_code").get<std::string>();
        p.issuing_authority = doc.at("issuing_authority").get<std::string>();
        p.denomination = doc.at("denomination").get<std::string>();
        p.issue_date = doc.at("issue_date").get<std::int64_t>();
        p.circulation_systems = doc.at("circulation_systems").get<std::vector<std::string>>();
        p.jurisdictions = doc.at("jurisdictions").get<std::vector<std::string>>();
        p.validation_urls = doc.at("validation_urls").get<std::vector<std::string>>();
        p.authority_key_id = doc.at("authority_key_id").get<std::string>();
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return p;
}

Outcome<Bytes> canonicalize_profile(const AssetProfile& profile) {
    if (auto st = check_profile(profile); !st) return st.error();
    auto text = canonical_dump(profile_to_json(profile));
    if (!text) return text.error();
    return to_bytes(text.value());
}

Outcome<SignedAssetProfile> sign_profile(const AssetProfile& profile,
                                         const KeyRecord& authority_record,
                                         const Bytes& authority_secret,
                                         const SignatureScheme& scheme) {
    if (authority_record.holder_kind != HolderKind::profile_authority) {
        return err(Errc::key_invalid, "signing key is not a profile authority key");
    }
    if (authority_record.status != KeyStatus::active) {
        return err(Errc::key_invalid, "signing key is not active");
    }
    if (authority_record.key_id != profile.authority_key_id) {
        return err(Errc::key_invalid, "profile names a different authority key");
    }
    auto canon = canonicalize_profile(profile);
    if (!canon) return canon.error();

    SignedAssetProfile sp;
    sp.profile = profile;
    sp.profile_hash = sha256(canon.value());
    sp.signature = scheme.sign(canon.value(), authority_secret);
    return sp;
}

Status verify_profile(const SignedAssetProfile& sp, const KeyRegistry& registry,
                      const SignatureScheme& scheme) {
    auto canon = canonicalize_profile(sp.profile);
    if (!canon) return canon.error();
    if (sha256(canon.value()) != sp.profile_hash) {
        return err(Errc::hash_mismatch, "profile_hash does not match canonical bytes");
    }
    const KeyRecord* rec = registry.find(sp.profile.authority_key_id);
    if (rec == nullptr) {
        return err(Errc::key_unknown, sp.profile.authority_key_id);
    }
    if (rec->status == KeyStatus::revoked) {
        return err(Errc::key_revoked, rec->key_id);
    }
    if (rec->status != KeyStatus::active || rec->holder_kind != HolderKind::profile_authority) {
        return err(Errc::key_invalid, rec->key_id);
    }
    if (!scheme.verify(canon.value(), sp.signature, rec->public_key)) {
        return err(Errc::signature_invalid, "profile signature");
    }
    return Status::ok();
}

Json signed_profile_to_json(const SignedAssetProfile& sp) {
    return Json{
        {"profile", profile_to_json(sp.profile)},
        {"profile_hash", sp.profile_hash.hex()},
        {"signature", to_base64(sp.signature)},
    };
}

Outcome<SignedAssetProfile> signed_profile_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("profile") || !doc.contains("signature") ||
        !doc.contains("profile_hash")) {
        return err(Errc::parse_error, "signed profile requires profile/signature/profile_hash");
    }
    auto profile = profile_from_json(doc.at("profile"));
    if (!profile) return profile.error();
    SignedAssetProfile sp;
    sp.profile = std::move(profile).take();
    if (!doc.at("signature").is_string() || !doc.at("profile_hash").is_string()) {
        return err(Errc::parse_error, "signature/profile_hash must be strings");
    }
    auto sig = from_base64(doc.at("signature").get<std::string>());
    if (!sig) return err(Errc::parse_error, "signature is not valid base64");
    sp.signature = std::move(*sig);
    auto hash = Digest::from_hex(doc.at("profile_hash").get<std::string>());
    if (!hash) return err(Errc::parse_error, "profile_hash is not a 32-byte hex digest");
    sp.profile_hash = *hash;
    return sp;
}

const char* holder_kind_name(HolderKind kind) {
    switch (kind) {
        case HolderKind::customer: return "CUSTOMER";
        case HolderKind::csp: return "CSP";
        case HolderKind::profile_authority: return "PROFILE_AUTHORITY";
        case HolderKind::issuer: return "ISSUER";
        case HolderKind::acquirer: return "ACQUIRER";
    }
    return "?";
}

const char* key_status_name(KeyStatus status) {
    switch (status) {
        case KeyStatus::active: return "ACTIVE";
        case KeyStatus::rotated: return "ROTATED";
        case KeyStatus::revoked: return "REVOKED";
    }
    return "?";
}

std::optional<HolderKind> holder_kind_from_name(std::string_view name) {
    if (name == "CUSTOMER") return HolderKind::customer;
    if (name == "CSP") return HolderKind::csp;
    if (name == "PROFILE_AUTHORITY") return HolderKind::profile_authority;
    if (name == "ISSUER") return HolderKind::issuer;
    if (name == "ACQUIRER") return HolderKind::acquirer;
    return std::nullopt;
}

std::optional<KeyStatus> key_status_from_name(std::string_view name) {
    if (name == "ACTIVE") return KeyStatus::active;
    if (name == "ROTATED") return KeyStatus::rotated;
    if (name == "REVOKED") return KeyStatus::revoked;
    return std::nullopt;
}

const char* asset_state_name(AssetState state) {
    switch (state) {
        case AssetState::live: return "LIVE";
        case AssetState::escrowed: return "ESCROWED";
        case AssetState::egressed: return "EGRESSED";
    }
    return "?";
}

std::optional<AssetState> asset_state_from_name(std::string_view name) {
    if (name == "LIVE") return AssetState::live;
    if (name == "ESCROWED") return AssetState::escrowed;
    if (name == "EGRESSED") return AssetState::egressed;
    return std::nullopt;
}

} // namespace cspsim

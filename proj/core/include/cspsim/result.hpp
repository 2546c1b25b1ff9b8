#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace cspsim {

/// Error codes surfaced by validation and protocol logic. Names mirror the
/// operation contracts so tests can assert on the exact failure.
enum class Errc {
    ok = 0,
    // profiles, keys, signatures
    field_invalid,
    key_invalid,
    signature_invalid,
    hash_mismatch,
    key_unknown,
    key_revoked,
    // ledger
    height_gap,
    prev_hash_mismatch,
    quorum_insufficient,
    tx_invalid,
    customer_unknown,
    // primitive validation
    not_owner,
    asset_not_live,
    recipient_unknown,
    recipient_not_customer,
    expiry_in_past,
    beneficiary_unknown,
    escrow_unknown,
    escrow_expired,
    condition_mismatch,
    not_beneficiary,
    escrow_not_expired,
    not_csp,
    asset_type_not_admitted,
    duplicate_asset_id,
    owner_unknown,
    asset_not_locked,
    session_mismatch,
    unauthorized,
    bad_transition,
    profile_invalid,
    type_in_use,
    type_unknown,
    customer_unassigned,
    // consensus
    empty_roster,
    domain_mismatch,
    // gateway
    no_common_protocol,
    profile_unsupported,
    jurisdiction_denied,
    phase_violation,
    session_unknown,
    log_corrupt,
    tx_missing,
    // issuer / acquirer
    claim_not_reserved,
    issuer_unauthorized,
    proof_invalid,
    already_redeemed,
    issuer_mismatch,
    all_zero_metrics,
    // simnet
    src_crashed,
    plan_invalid,
    // scenario / report
    scenario_invalid,
    report_corrupt,
    parse_error,
    io_error,
};

constexpr const char* errc_name(Errc code) {
    switch (code) {
        case Errc::ok: return "Ok";
        case Errc::field_invalid: return "FieldInvalid";
        case Errc::key_invalid: return "KeyInvalid";
        case Errc::signature_invalid: return "SignatureInvalid";
        case Errc::hash_mismatch: return "HashMismatch";
        case Errc::key_unknown: return "KeyUnknown";
        case Errc::key_revoked: return "KeyRevoked";
        case Errc::height_gap: return "HeightGap";
        case Errc::prev_hash_mismatch: return "PrevHashMismatch";
        case Errc::quorum_insufficient: return "QuorumInsufficient";
        case Errc::tx_invalid: return "TxInvalid";
        case Errc::customer_unknown: return "CustomerUnknown";
        case Errc::not_owner: return "NotOwner";
        case Errc::asset_not_live: return "AssetNotLive";
        case Errc::recipient_unknown: return "RecipientUnknown";
        case Errc::recipient_not_customer: return "RecipientNotCustomer";
        case Errc::expiry_in_past: return "ExpiryInPast";
        case Errc::beneficiary_unknown: return "BeneficiaryUnknown";
        case Errc::escrow_unknown: return "EscrowUnknown";
        case Errc::escrow_expired: return "EscrowExpired";
        case Errc::condition_mismatch: return "ConditionMismatch";
        case Errc::not_beneficiary: return "NotBeneficiary";
        case Errc::escrow_not_expired: return "EscrowNotExpired";
        case Errc::not_csp: return "NotCSP";
        case Errc::asset_type_not_admitted: return "AssetTypeNotAdmitted";
        case Errc::duplicate_asset_id: return "DuplicateAssetId";
        case Errc::owner_unknown: return "OwnerUnknown";
        case Errc::asset_not_locked: return "AssetNotLocked";
        case Errc::session_mismatch: return "SessionMismatch";
        case Errc::unauthorized: return "Unauthorized";
        case Errc::bad_transition: return "BadTransition";
        case Errc::profile_invalid: return "ProfileInvalid";
        case Errc::type_in_use: return "TypeInUse";
        case Errc::type_unknown: return "TypeUnknown";
        case Errc::customer_unassigned: return "CustomerUnassigned";
        case Errc::empty_roster: return "EmptyRoster";
        case Errc::domain_mismatch: return "DomainMismatch";
        case Errc::no_common_protocol: return "NoCommonProtocol";
        case Errc::profile_unsupported: return "ProfileUnsupported";
        case Errc::jurisdiction_denied: return "JurisdictionDenied";
        case Errc::phase_violation: return "PhaseViolation";
        case Errc::session_unknown: return "SessionUnknown";
        case Errc::log_corrupt: return "LogCorrupt";
        case Errc::tx_missing: return "TxMissing";
        case Errc::claim_not_reserved: return "ClaimNotReserved";
        case Errc::issuer_unauthorized: return "IssuerUnauthorized";
        case Errc::proof_invalid: return "ProofInvalid";
        case Errc::already_redeemed: return "AlreadyRedeemed";
        case Errc::issuer_mismatch: return "IssuerMismatch";
        case Errc::all_zero_metrics: return "AllZeroMetrics";
        case Errc::src_crashed: return "SrcCrashed";
        case Errc::plan_invalid: return "PlanInvalid";
        case Errc::scenario_invalid: return "ScenarioInvalid";
        case Errc::report_corrupt: return "ReportCorrupt";
        case Errc::parse_error: return "ParseError";
        case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

struct Error {
    Errc code = Errc::ok;
    std::string detail;

    std::string to_string() const {
        std::string s = errc_name(code);
        if (!detail.empty()) {
            s += ": ";
            s += detail;
        }
        return s;
    }
};

inline Error err(Errc code, std::string detail = {}) {
    return Error{code, std::move(detail)};
}

/// Success-or-error without a value.
class Status {
  public:
    Status() = default;
    Status(Error e) : err_(std::move(e)) {}
    static Status ok() { return Status(); }

    bool is_ok() const { return !err_.has_value(); }
    explicit operator bool() const { return is_ok(); }
    Errc code() const { return err_ ? err_->code : Errc::ok; }
    const Error& error() const { return *err_; }

  private:
    std::optional<Error> err_;
};

/// Value-or-error. Throws std::logic_error on wrong-side access; callers are
/// expected to branch on ok() first.
template <typename T>
class Outcome {
  public:
    Outcome(T value) : v_(std::move(value)) {}
    Outcome(Error e) : v_(std::move(e)) {}

    bool is_ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return is_ok(); }
    Errc code() const { return is_ok() ? Errc::ok : error().code; }

    const T& value() const& {
        if (!is_ok()) throw std::logic_error("Outcome::value on error: " + error().to_string());
        return std::get<T>(v_);
    }
    T& value() & {
        if (!is_ok()) throw std::logic_error("Outcome::value on error: " + error().to_string());
        return std::get<T>(v_);
    }
    T&& take() && {
        if (!is_ok()) throw std::logic_error("Outcome::take on error: " + error().to_string());
        return std::get<T>(std::move(v_));
    }
    const Error& error() const {
        return std::get<Error>(v_);
    }
    Status status() const {
        return is_ok() ? Status::ok() : Status(error());
    }

  private:
    std::variant<T, Error> v_;
};

} // namespace cspsim

#pragma once

#include "cspsim/state.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace cspsim {

enum class TxKind {
    transfer,
    escrow_create,
    escrow_release,
    escrow_revert,
    ingress,
    egress,
    key_op,
    asset_type_op,
};
const char* tx_kind_name(TxKind kind);
std::optional<TxKind> tx_kind_from_name(std::string_view name);

struct TransferPayload {
    std::string asset_id;
    std::string to_key_id;
    bool operator==(const TransferPayload&) const = default;
};
struct EscrowCreatePayload {
    std::string asset_id;
    std::string escrow_id;
    std::string beneficiary_key_id;
    std::int64_t expiry_at = 0;
    std::string condition_tag;
    bool operator==(const EscrowCreatePayload&) const = default;
};
struct EscrowReleasePayload {
    std::string escrow_id;
    std::string condition_tag;
    bool operator==(const EscrowReleasePayload&) const = default;
};
struct EscrowRevertPayload {
    std::string escrow_id;
    bool operator==(const EscrowRevertPayload&) const = default;
};
struct IngressPayload {
    Digest profile_hash{};
    std::string asset_id;
    std::string owner_key_id;
    bool operator==(const IngressPayload&) const = default;
};
struct EgressPayload {
    std::string asset_id;
    std::string dest_domain_id;
    std::string session_id;
    bool operator==(const EgressPayload&) const = default;
};

enum class KeyOpAction { register_key, rotate, revoke };
const char* key_op_action_name(KeyOpAction action);
std::optional<KeyOpAction> key_op_action_from_name(std::string_view name);

struct KeyOpPayload {
    KeyOpAction action = KeyOpAction::register_key;
    HolderKind subject_kind = HolderKind::customer;
    std::string subject_key_id;
    Bytes new_public_key;         // REGISTER: subject's key; ROTATE: successor's key
    std::string successor_key_id; // ROTATE only
    bool operator==(const KeyOpPayload&) const = default;
};

enum class AssetTypeAction { add, remove };

struct AssetTypeOpPayload {
    AssetTypeAction action = AssetTypeAction::add;
    Digest profile_hash{};
    std::optional<SignedAssetProfile> signed_profile; // required for ADD
    bool operator==(const AssetTypeOpPayload&) const = default;
};

using TxPayload = std::variant<TransferPayload, EscrowCreatePayload, EscrowReleasePayload,
                               EscrowRevertPayload, IngressPayload, EgressPayload, KeyOpPayload,
                               AssetTypeOpPayload>;

/// One contract-primitive invocation. The signature covers the canonical form
/// of {kind, payload, submitter, tx_id}. Genesis seed transactions use
/// submitter "genesis" with an empty signature and are only valid at height 0.
struct PrimitiveTx {
    std::string tx_id;
    TxKind kind = TxKind::transfer;
    TxPayload payload;
    std::string submitter_key_id;
    Bytes submitter_signature;

    bool operator==(const PrimitiveTx&) const = default;
};

inline constexpr const char* kGenesisSubmitter = "genesis";

Json tx_to_json(const PrimitiveTx& tx);
Outcome<PrimitiveTx> tx_from_json(const Json& doc);
/// Canonical bytes the submitter signs.
Bytes tx_signing_bytes(const PrimitiveTx& tx);

PrimitiveTx make_signed_tx(std::string tx_id, TxKind kind, TxPayload payload,
                           std::string submitter_key_id, const Bytes& submitter_secret,
                           const SignatureScheme& scheme = ed25519());
PrimitiveTx make_genesis_tx(std::string tx_id, TxKind kind, TxPayload payload);

struct ApplyOptions {
    bool genesis = false; // height-0 seed transactions skip signature checks
    const SignatureScheme* scheme = &ed25519();
};

/// Full validation then in-place application. The state is untouched when the
/// result is an error.
Status apply_tx(StateTable& state, const PrimitiveTx& tx, const ApplyOptions& opts = {});
/// Validation only (used by consensus to pre-validate proposals).
Status validate_tx(const StateTable& state, const PrimitiveTx& tx, const ApplyOptions& opts = {});

// Per-primitive appliers; apply_tx dispatches to these after the shared
// submitter-signature check.
Status apply_transfer(StateTable& state, const TransferPayload& p, const PrimitiveTx& tx);
Status apply_escrow_create(StateTable& state, const EscrowCreatePayload& p, const PrimitiveTx& tx);
Status apply_escrow_release(StateTable& state, const EscrowReleasePayload& p, const PrimitiveTx& tx);
Status apply_escrow_revert(StateTable& state, const EscrowRevertPayload& p, const PrimitiveTx& tx);
Status apply_ingress(StateTable& state, const IngressPayload& p, const PrimitiveTx& tx);
Status apply_egress(StateTable& state, const EgressPayload& p, const PrimitiveTx& tx);
Status apply_key_op(StateTable& state, const KeyOpPayload& p, const PrimitiveTx& tx);
Status apply_asset_type_op(StateTable& state, const AssetTypeOpPayload& p, const PrimitiveTx& tx);

/// Deterministic per-kind operation costs; never input dependent.
struct OpCostTable {
    std::map<TxKind, std::int64_t> cost_units;

    static OpCostTable defaults();
    std::int64_t op_cost(TxKind kind) const;

    Json to_json() const;
    static Outcome<OpCostTable> from_json(const Json& doc);
    bool operator==(const OpCostTable&) const = default;
};

struct FeeTier {
    std::string name;
    std::int64_t monthly_included_invocations = 0;
    std::int64_t per_extra_invocation_fee = 0;
    bool operator==(const FeeTier&) const = default;
};

/// Tiered subscription pricing: the fee for an invocation depends only on the
/// customer's tier and running invocation count, never on asset content.
struct FeeSchedule {
    std::vector<FeeTier> tiers;
    std::map<std::string, std::string> assignment; // customer key_id -> tier name

    const FeeTier* tier_of(const std::string& customer) const;

    Json to_json() const;
    static Outcome<FeeSchedule> from_json(const Json& doc);
    bool operator==(const FeeSchedule&) const = default;
};

/// Fee for the running_count-th invocation (1-based) by the customer.
Outcome<std::int64_t> invoke_fee(const FeeSchedule& schedule, const std::string& customer,
                                 std::int64_t running_count);

} // namespace cspsim

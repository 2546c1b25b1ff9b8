#pragma once

#include "cspsim/bytes.hpp"

#include <memory>
#include <span>
#include <string>

namespace cspsim {

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

struct KeyPair {
    Bytes public_key;
    Bytes secret_key;
};

/// Detached-signature scheme. The reference configuration is Ed25519; the
/// interface exists so a community could swap schemes without touching
/// callers. Key generation is seed-based so simulations are reproducible.
class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;
    virtual std::string name() const = 0;
    virtual KeyPair keypair_from_seed(const Digest& seed) const = 0;
    virtual Bytes sign(std::span<const std::uint8_t> message, const Bytes& secret_key) const = 0;
    virtual bool verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature,
                        std::span<const std::uint8_t> public_key) const = 0;
};

/// Ed25519 backed by libsodium. Verification results are memoized process-wide
/// (same message/signature/key triple re-checked by several simulated nodes).
const SignatureScheme& ed25519();

/// Deterministic key seed for a named identity within a seeded scenario.
Digest identity_key_seed(std::uint64_t scenario_seed, std::string_view kind, std::string_view id);

} // namespace cspsim

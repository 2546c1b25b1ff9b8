#include "cspsim/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace cspsim {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

struct DigestHash {
    size_t operator()(const Digest& d) const {
        size_t h;
        std::memcpy(&h, d.data(), sizeof(h));
        return h;
    }
};

class Ed25519 final : public SignatureScheme {
  public:
    std::string name() const override { return "ed25519"; }

    KeyPair keypair_from_seed(const Digest& seed) const override {
        ensure_sodium();
        KeyPair kp;
        kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
        kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
        crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
        return kp;
    }

    Bytes sign(std::span<const std::uint8_t> message, const Bytes& secret_key) const override {
        ensure_sodium();
        if (secret_key.size() != crypto_sign_SECRETKEYBYTES)
            throw std::invalid_argument("ed25519: bad secret key length");
        Bytes sig(crypto_sign_BYTES);
        crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                             secret_key.data());
        return sig;
    }

    bool verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature,
                std::span<const std::uint8_t> public_key) const override {
        ensure_sodium();
        if (signature.size() != crypto_sign_BYTES ||
            public_key.size() != crypto_sign_PUBLICKEYBYTES) {
            return false;
        }
        // Several simulated nodes verify the same quorum certificates; cache
        // by digest of (message, signature, key).
        crypto_hash_sha256_state st;
        crypto_hash_sha256_init(&st);
        crypto_hash_sha256_update(&st, message.data(), message.size());
        crypto_hash_sha256_update(&st, signature.data(), signature.size());
        crypto_hash_sha256_update(&st, public_key.data(), public_key.size());
        Digest key;
        crypto_hash_sha256_final(&st, key.data());

        {
            std::lock_guard<std::mutex> lock(cache_mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const bool ok = crypto_sign_verify_detached(signature.data(), message.data(),
                                                    message.size(), public_key.data()) == 0;
        {
            std::lock_guard<std::mutex> lock(cache_mu_);
            if (cache_.size() > kCacheCap) cache_.clear();
            cache_.emplace(key, ok);
        }
        return ok;
    }

  private:
    static constexpr size_t kCacheCap = 1 << 20;
    mutable std::mutex cache_mu_;
    mutable std::unordered_map<Digest, bool, DigestHash> cache_;
};

} // namespace

Digest sha256(std::span<const std::uint8_t> data) {
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.data(), data.data(), data.size());
    return d;
}

Digest sha256(std::string_view data) {
    return sha256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

const SignatureScheme& ed25519() {
    static const Ed25519 scheme;
    return scheme;
}

Digest identity_key_seed(std::uint64_t scenario_seed, std::string_view kind, std::string_view id) {
    std::string material = "cspsim-key/";
    for (int i = 0; i < 8; ++i) {
        material.push_back(static_cast<char>((scenario_seed >> (8 * i)) & 0xFF));
    }
    material += '/';
    material += kind;
    material += '/';
    material += id;
    return sha256(material);
}

} // namespace cspsim

#include "cspsim/bytes.hpp"

#include <sodium.h>

#include <algorithm>

namespace cspsim {

bool Digest::is_zero() const {
    return std::all_of(begin(), end(), [](std::uint8_t b) { return b == 0; });
}

std::string Digest::hex() const {
    return to_hex(std::span<const std::uint8_t>(data(), size()));
}

std::optional<Digest> Digest::from_hex(std::string_view hex) {
    auto raw = cspsim::from_hex(hex);
    if (!raw || raw->size() != 32) return std::nullopt;
    Digest d;
    std::copy(raw->begin(), raw->end(), d.begin());
    return d;
}

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out(data.size() * 2 + 1, '\0');
    sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
    out.resize(data.size() * 2);
    return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
    Bytes out(hex.size() / 2 + 1);
    size_t written = 0;
    if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written,
                       nullptr) != 0) {
        return std::nullopt;
    }
    out.resize(written);
    return out;
}

std::string to_base64(std::span<const std::uint8_t> data) {
    const size_t need = sodium_base64_encoded_len(data.size(), sodium_base64_VARIANT_ORIGINAL);
    std::string out(need, '\0');
    sodium_bin2base64(out.data(), out.size(), data.data(), data.size(),
                      sodium_base64_VARIANT_ORIGINAL);
    out.resize(std::char_traits<char>::length(out.c_str()));
    return out;
}

std::optional<Bytes> from_base64(std::string_view b64) {
    Bytes out(b64.size() + 1);
    size_t written = 0;
    if (sodium_base642bin(out.data(), out.size(), b64.data(), b64.size(), nullptr, &written,
                          nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
        return std::nullopt;
    }
    out.resize(written);
    return out;
}

} // namespace cspsim

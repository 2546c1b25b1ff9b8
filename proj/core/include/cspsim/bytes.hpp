#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cspsim {

using Bytes = std::vector<std::uint8_t>;

/// 32-byte digest (SHA-256 output). Lowercase hex on the wire.
struct Digest : std::array<std::uint8_t, 32> {
    static Digest zero() { return Digest{}; }
    bool is_zero() const;
    std::string hex() const;
    static std::optional<Digest> from_hex(std::string_view hex);
};

std::string to_hex(std::span<const std::uint8_t> data);
std::optional<Bytes> from_hex(std::string_view hex);

std::string to_base64(std::span<const std::uint8_t> data);
std::optional<Bytes> from_base64(std::string_view b64);

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}
inline std::string bytes_to_string(std::span<const std::uint8_t> b) {
    return std::string(b.begin(), b.end());
}

} // namespace cspsim

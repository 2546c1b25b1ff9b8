#pragma once

#include "cspsim/bytes.hpp"
#include "cspsim/result.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace cspsim {

/// All persisted documents use nlohmann::json with std::map object storage:
/// object keys are sorted lexicographically by code point, which is what the
/// canonical form requires.
using Json = nlohmann::json;

/// Canonical serialization: sorted keys, no insignificant whitespace, UTF-8
/// strings with minimal escaping, integers in base 10. Floating-point values
/// are rejected: every document format in this project is integer-only so
/// canonical bytes are platform independent.
Outcome<std::string> canonical_dump(const Json& doc);

/// canonical_dump that throws std::invalid_argument instead of returning an
/// error; for documents the caller constructed itself.
std::string canonical_dump_or_throw(const Json& doc);

inline Bytes canonical_bytes(const Json& doc) {
    return to_bytes(canonical_dump_or_throw(doc));
}

Outcome<Json> parse_json(std::string_view text);

/// Digest of the canonical serialization.
Digest canonical_digest(const Json& doc);

} // namespace cspsim

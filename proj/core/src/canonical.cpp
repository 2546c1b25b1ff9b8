#include "cspsim/canonical.hpp"

#include "cspsim/crypto.hpp"

namespace cspsim {

namespace {

bool has_float(const Json& doc) {
    if (doc.is_number_float()) return true;
    if (doc.is_object() || doc.is_array()) {
        for (const auto& item : doc) {
            if (has_float(item)) return true;
        }
    }
    return false;
}

} // namespace

Outcome<std::string> canonical_dump(const Json& doc) {
    if (has_float(doc)) {
        return err(Errc::field_invalid, "canonical form permits integers only");
    }
    return doc.dump();
}

std::string canonical_dump_or_throw(const Json& doc) {
    auto out = canonical_dump(doc);
    if (!out) throw std::invalid_argument(out.error().to_string());
    return std::move(out).take();
}

Outcome<Json> parse_json(std::string_view text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        return err(Errc::parse_error, "malformed JSON");
    }
    return doc;
}

Digest canonical_digest(const Json& doc) {
    return sha256(canonical_dump_or_throw(doc));
}

} // namespace cspsim

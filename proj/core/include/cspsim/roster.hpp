#pragma once

#include "cspsim/canonical.hpp"

#include <string>
#include <vector>

namespace cspsim {

struct RosterNode {
    std::string node_id;
    std::string owning_csp_id;
    Bytes node_public_key;
    std::string stack_tag;

    bool operator==(const RosterNode&) const = default;
};

/// Ordered node list of one contract domain. Order determines the proposer
/// schedule; node_ids must be unique across all domains (audited separately).
struct NodeRoster {
    std::string domain_id;
    std::vector<RosterNode> nodes;

    const RosterNode* find(const std::string& node_id) const {
        for (const auto& n : nodes) {
            if (n.node_id == node_id) return &n;
        }
        return nullptr;
    }

    Json to_json() const;
    static Outcome<NodeRoster> from_json(const Json& doc);
    bool operator==(const NodeRoster&) const = default;
};

/// Smallest vote set accepted as a quorum certificate: floor(2n/3) + 1.
std::int64_t quorum_size(std::int64_t roster_size);

} // namespace cspsim

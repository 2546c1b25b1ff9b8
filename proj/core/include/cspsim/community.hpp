#pragma once

#include "cspsim/primitives.hpp"
#include "cspsim/roster.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cspsim {

using Rational = boost::rational<std::int64_t>;

Json rational_to_json(const Rational& r);
Outcome<Rational> rational_from_json(const Json& doc);

/// Terms of one community's membership agreement that the simulator enforces.
struct CommunityConfig {
    std::string community_id;
    std::string contract_service_id;
    std::vector<std::string> member_csps;
    std::int64_t min_csps = 1;
    std::int64_t max_csps = 64;
    std::int64_t min_nodes_per_csp = 1;
    std::int64_t duration_commitment = 0; // ticks
    Digest operating_rules_hash{};
    FeeSchedule fee_schedule;
    Rational w_tx{1, 2};
    Rational w_customers{1, 2};

    Json to_json() const;
    static Outcome<CommunityConfig> from_json(const Json& doc);
    bool operator==(const CommunityConfig&) const = default;
};

struct CommunityViolation {
    std::string subject; // csp id or community id
    std::string reason;
    bool operator==(const CommunityViolation&) const = default;
};

/// Checks member-count bounds and per-CSP node minimums; returns every
/// violation found (empty means ok).
std::vector<CommunityViolation> validate_community(const CommunityConfig& cfg,
                                                   const NodeRoster& roster);

/// node_id -> domains that node serves. Well-formed assignments map every
/// node to exactly one domain.
using NodeAssignment = std::map<std::string, std::set<std::string>>;

struct IntersectionViolation {
    std::string node_id;
    std::set<std::string> domains;
    bool operator==(const IntersectionViolation&) const = default;
};

/// Every node mapped to two or more domains, in node_id order.
std::vector<IntersectionViolation> check_domain_intersections(const NodeAssignment& assignments);

/// Normalized Shannon entropy of the roster's stack tags, H(p)/log(n).
/// The value is irrational in general, so it is kept exactly as the sorted
/// tag-count multiset; equality and ordering are decided with exact integer
/// power products (a < b iff prod(c^c) comparisons say so), and a double View
/// exists for display. 0 by convention for a single node.
class DiversityIndex {
  public:
    DiversityIndex() = default;
    static DiversityIndex from_counts(std::vector<std::int64_t> counts);

    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::int64_t total() const { return total_; }

    bool operator==(const DiversityIndex& other) const;
    bool operator<(const DiversityIndex& other) const;
    bool equals_rational(const Rational& r) const;
    bool less_than_rational(const Rational& r) const;

    double to_double() const;
    /// floor(value * 1000), computed with exact comparisons only.
    std::int64_t permille() const;

    Json to_json() const;

  private:
    std::vector<std::int64_t> counts_; // sorted descending, zero-free
    std::int64_t total_ = 0;
};

Outcome<DiversityIndex> diversity_index(const NodeRoster& roster);

struct CspMetrics {
    std::int64_t local_tx_count = 0;
    std::int64_t cross_domain_tx_count = 0;
    std::int64_t customer_count = 0;
    bool operator==(const CspMetrics&) const = default;
};

/// share(c) = w_tx * tx(c)/sum_tx + w_customers * cust(c)/sum_cust with
/// tx = local + cross-domain; exact rationals, shares sum to 1.
Outcome<std::map<std::string, Rational>> revenue_share(
    const std::map<std::string, CspMetrics>& metrics, const Rational& w_tx,
    const Rational& w_customers);

} // namespace cspsim

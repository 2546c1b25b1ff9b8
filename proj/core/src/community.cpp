#include "cspsim/community.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspsim {

using BigInt = boost::multiprecision::cpp_int;

Json rational_to_json(const Rational& r) {
    return Json{{"den", r.denominator()}, {"num", r.numerator()}};
}

Outcome<Rational> rational_from_json(const Json& doc) {
    try {
        const auto num = doc.at("num").get<std::int64_t>();
        const auto den = doc.at("den").get<std::int64_t>();
        if (den == 0) return err(Errc::parse_error, "rational with zero denominator");
        return Rational(num, den);
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
}

Json CommunityConfig::to_json() const {
    return Json{
        {"community_id", community_id},
        {"contract_service_id", contract_service_id},
        {"duration_commitment", duration_commitment},
        {"fee_schedule", fee_schedule.to_json()},
        {"max_csps", max_csps},
        {"member_csps", member_csps},
        {"min_csps", min_csps},
        {"min_nodes_per_csp", min_nodes_per_csp},
        {"operating_rules_hash", operating_rules_hash.hex()},
        {"revenue_weights",
         Json{{"w_customers", rational_to_json(w_customers)}, {"w_tx", rational_to_json(w_tx)}}},
    };
}

Outcome<CommunityConfig> CommunityConfig::from_json(const Json& doc) {
    CommunityConfig cfg;
    try {
        cfg.community_id = doc.at("community_id").get<std::string>();
        cfg.contract_service_id = doc.at("contract_service_id").get<std::string>();
        cfg.member_csps = doc.at("member_csps").get<std::vector<std::string>>();
        cfg.min_csps = doc.at("min_csps").get<std::int64_t>();
        cfg.max_csps = doc.at("max_csps").get<std::int64_t>();
        cfg.min_nodes_per_csp = doc.at("min_nodes_per_csp").get<std::int64_t>();
        cfg.duration_commitment = doc.at("duration_commitment").get<std::int64_t>();
        if (doc.contains("operating_rules_hash")) {
            auto hash = Digest::from_hex(doc.at("operating_rules_hash").get<std::string>());
            if (!hash) return err(Errc::parse_error, "bad operating_rules_hash");
            cfg.operating_rules_hash = *hash;
        }
        auto fees = FeeSchedule::from_json(doc.at("fee_schedule"));
        if (!fees) return fees.error();
        cfg.fee_schedule = std::move(fees).take();
        const Json& weights = doc.at("revenue_weights");
        auto wt = rational_from_json(weights.at("w_tx"));
        auto wc = rational_from_json(weights.at("w_customers"));
        if (!wt || !wc) return err(Errc::parse_error, "bad revenue weights");
        cfg.w_tx = wt.value();
        cfg.w_customers = wc.value();
        if (cfg.w_tx + cfg.w_customers != Rational(1)) {
            return err(Errc::parse_error, "revenue weights must sum to 1");
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    return cfg;
}

std::vector<CommunityViolation> validate_community(const CommunityConfig& cfg,
                                                   const NodeRoster& roster) {
    std::vector<CommunityViolation> violations;
    const auto members = static_cast<std::int64_t>(cfg.member_csps.size());
    if (members < cfg.min_csps) {
        violations.push_back({cfg.community_id, "member count " + std::to_string(members) +
                                                    " below min_csps " +
                                                    std::to_string(cfg.min_csps)});
    }
    if (members > cfg.max_csps) {
        violations.push_back({cfg.community_id, "member count " + std::to_string(members) +
                                                    " above max_csps " +
                                                    std::to_string(cfg.max_csps)});
    }
    std::map<std::string, std::int64_t> node_counts;
    for (const auto& node : roster.nodes) {
        node_counts[node.owning_csp_id] += 1;
        if (std::find(cfg.member_csps.begin(), cfg.member_csps.end(), node.owning_csp_id) ==
            cfg.member_csps.end()) {
            violations.push_back({node.owning_csp_id,
                                  "node " + node.node_id + " owned by non-member csp"});
        }
    }
    for (const auto& csp : cfg.member_csps) {
        const std::int64_t have = node_counts.count(csp) ? node_counts[csp] : 0;
        if (have < cfg.min_nodes_per_csp) {
            violations.push_back({csp, "contributes " + std::to_string(have) +
                                           " nodes, minimum is " +
                                           std::to_string(cfg.min_nodes_per_csp)});
        }
    }
    return violations;
}

std::vector<IntersectionViolation> check_domain_intersections(const NodeAssignment& assignments) {
    std::vector<IntersectionViolation> violations;
    for (const auto& [node_id, domains] : assignments) {
        if (domains.size() >= 2) {
            violations.push_back({node_id, domains});
        }
    }
    return violations;
}

namespace {

/// prod(c^c) over the counts; the exact carrier of sum(c * ln c).
BigInt self_power_product(const std::vector<std::int64_t>& counts) {
    BigInt product = 1;
    for (const auto c : counts) {
        BigInt base = c;
        product *= boost::multiprecision::pow(base, static_cast<unsigned>(c));
    }
    return product;
}

BigInt int_pow(std::int64_t base, std::int64_t exp) {
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

} // namespace

DiversityIndex DiversityIndex::from_counts(std::vector<std::int64_t> counts) {
    DiversityIndex idx;
    std::erase_if(counts, [](std::int64_t c) { return c <= 0; });
    std::sort(counts.begin(), counts.end(), std::greater<>());
    idx.total_ = 0;
    for (const auto c : counts) idx.total_ += c;
    idx.counts_ = std::move(counts);
    return idx;
}

bool DiversityIndex::operator==(const DiversityIndex& other) const {
    if (total_ != other.total_) {
        throw std::invalid_argument("diversity comparison requires equal roster sizes");
    }
    // Equal totals: value equality reduces to prod(c^c) equality.
    return self_power_product(counts_) == self_power_product(other.counts_);
}

bool DiversityIndex::operator<(const DiversityIndex& other) const {
    if (total_ != other.total_) {
        throw std::invalid_argument("diversity comparison requires equal roster sizes");
    }
    // Larger sum(c ln c) means lower diversity.
    return self_power_product(counts_) > self_power_product(other.counts_);
}

bool DiversityIndex::equals_rational(const Rational& r) const {
    if (r < Rational(0) || r > Rational(1)) return false;
    const std::int64_t p = r.numerator();
    const std::int64_t q = r.denominator();
    if (total_ <= 1) return p == 0; // convention: single node has zero diversity
    // value == p/q  <=>  n^((q-p)*n) == prod(c^c)^q
    const BigInt lhs = int_pow(total_, (q - p) * total_);
    const BigInt rhs = boost::multiprecision::pow(self_power_product(counts_),
                                                  static_cast<unsigned>(q));
    return lhs == rhs;
}

bool DiversityIndex::less_than_rational(const Rational& r) const {
    if (r <= Rational(0)) return false;
    if (r > Rational(1)) return true;
    const std::int64_t p = r.numerator();
    const std::int64_t q = r.denominator();
    if (total_ <= 1) return p > 0;
    // value < p/q  <=>  n^((q-p)*n) < prod(c^c)^q
    const BigInt lhs = int_pow(total_, (q - p) * total_);
    const BigInt rhs = boost::multiprecision::pow(self_power_product(counts_),
                                                  static_cast<unsigned>(q));
    return lhs < rhs;
}

double DiversityIndex::to_double() const {
    if (total_ <= 1) return 0.0;
    double entropy_sum = 0.0;
    for (const auto c : counts_) {
        entropy_sum += static_cast<double>(c) * std::log(static_cast<double>(c));
    }
    const double n_log_n = static_cast<double>(total_) * std::log(static_cast<double>(total_));
    return (n_log_n - entropy_sum) / n_log_n;
}

std::int64_t DiversityIndex::permille() const {
    // Largest k with k/1000 <= value, found with exact comparisons.
    std::int64_t lo = 0;
    std::int64_t hi = 1000;
    while (lo < hi) {
        const std::int64_t mid = (lo + hi + 1) / 2;
        if (less_than_rational(Rational(mid, 1000))) {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    return lo;
}

Json DiversityIndex::to_json() const {
    return Json{{"counts", counts_}, {"permille", permille()}, {"total", total_}};
}

Outcome<DiversityIndex> diversity_index(const NodeRoster& roster) {
    if (roster.nodes.empty()) return err(Errc::empty_roster, roster.domain_id);
    std::map<std::string, std::int64_t> tally;
    for (const auto& node : roster.nodes) tally[node.stack_tag] += 1;
    std::vector<std::int64_t> counts;
    counts.reserve(tally.size());
    for (const auto& [tag, count] : tally) counts.push_back(count);
    return DiversityIndex::from_counts(std::move(counts));
}

Outcome<std::map<std::string, Rational>> revenue_share(
    const std::map<std::string, CspMetrics>& metrics, const Rational& w_tx,
    const Rational& w_customers) {
    std::int64_t tx_sum = 0;
    std::int64_t cust_sum = 0;
    for (const auto& [csp, m] : metrics) {
        tx_sum += m.local_tx_count + m.cross_domain_tx_count;
        cust_sum += m.customer_count;
    }
    if (metrics.empty() || (tx_sum == 0 && cust_sum == 0)) {
        return err(Errc::all_zero_metrics, "no transactions and no customers");
    }
    const auto k = static_cast<std::int64_t>(metrics.size());
    std::map<std::string, Rational> shares;
    for (const auto& [csp, m] : metrics) {
        // A dimension with a zero total is split equally so shares still sum to 1.
        const Rational tx_part = tx_sum == 0
                                     ? Rational(1, k)
                                     : Rational(m.local_tx_count + m.cross_domain_tx_count, tx_sum);
        const Rational cust_part =
            cust_sum == 0 ? Rational(1, k) : Rational(m.customer_count, cust_sum);
        shares[csp] = w_tx * tx_part + w_customers * cust_part;
    }
    return shares;
}

} // namespace cspsim

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgmh/framing.hpp"
#include "sgmh/rational.hpp"
#include "sgmh/types.hpp"

namespace sgmh {

struct Connection {
    ConnectionId id = 0;
    ClassId class_id = 0;
    BitsPerSec rate = 0;
    std::vector<LinkId> path;
};

/// Admitted load on one link. per_class[i] is the summed rate of class i+1.
struct LinkLoad {
    LinkId link = 0;
    BitsPerSec capacity = 0;
    std::vector<BitsPerSec> per_class;
    Bits max_packet_size = 0;
};

/// R_k <= C_l on every link of the path. Throws ConfigError on an unknown link.
bool check_rate(const Connection& conn, const std::map<LinkId, BitsPerSec>& capacities);

/// Sum over classes of the link load <= capacity.
bool check_aggregate(const LinkLoad& load);

/// Per-class capacity constraint for one value of j (1-based). Values are
/// in bits/s.
struct ConstraintTerm {
    ClassId j = 0;
    Rational lhs;
    Rational rhs;
    Rational slack; // rhs - lhs
    bool satisfied = false;
};

/// For each j = 1..N:
///   lhs_j = sum_{i=j..N} D_i * (1 + ceil(f_j / f_i)) * f_i / f_j - D_j
///   rhs_j = C            for j = 1
///   rhs_j = C - S / f_j  for j = 2..N
/// with classes ordered by increasing frame. Evaluated exactly.
/// Throws ConfigError if `classes` is empty or does not match the load.
std::vector<ConstraintTerm> check_capacity_constraint(const LinkLoad& load,
                                                      std::span<const TrafficClass> classes);

inline bool all_satisfied(std::span<const ConstraintTerm> terms)
{
    for (const auto& t : terms)
        if (!t.satisfied)
            return false;
    return true;
}

enum class AdmissionCheck { none, rate, aggregate, capacity };

std::string to_string(AdmissionCheck check);

struct AdmissionDecision {
    bool admitted = false;
    AdmissionCheck failed = AdmissionCheck::none;
    std::optional<LinkId> link;
    std::optional<ClassId> j; // set for capacity failures

    std::string describe() const;
};

struct LinkSpec {
    LinkId id = 0;
    BitsPerSec capacity = 0;
};

/// Running admission state for one network: the admitted load on every
/// link. Connections are admitted one at a time; a rejected connection
/// leaves the state untouched.
class AdmissionController {
public:
    AdmissionController(std::vector<TrafficClass> classes, std::span<const LinkSpec> links, Bits max_packet_size);

    AdmissionDecision admit(const Connection& conn);

    /// Adds the connection's rate without running any check.
    void force(const Connection& conn);

    const LinkLoad& load(LinkId link) const;
    const std::map<LinkId, LinkLoad>& loads() const noexcept { return loads_; }
    const std::vector<TrafficClass>& classes() const noexcept { return classes_; }
    const std::map<LinkId, BitsPerSec>& capacities() const noexcept { return capacities_; }

private:
    void apply(const Connection& conn, BitsPerSec sign);
    void check_known(const Connection& conn) const;

    std::vector<TrafficClass> classes_;
    std::map<LinkId, BitsPerSec> capacities_;
    std::map<LinkId, LinkLoad> loads_;
    Bits max_packet_size_ = 0;
};

/// Loads recomputed from scratch for a set of connections.
std::map<LinkId, LinkLoad> compute_loads(std::span<const Connection> connections,
                                         std::span<const LinkSpec> links,
                                         std::size_t class_count,
                                         Bits max_packet_size);

} // namespace sgmh

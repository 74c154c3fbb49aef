#include "sgmh/admission.hpp"

#include <set>
#include <string>

namespace sgmh {

bool check_rate(const Connection& conn, const std::map<LinkId, BitsPerSec>& capacities)
{
    bool ok = true;
    for (auto l : conn.path) {
        auto it = capacities.find(l);
        if (it == capacities.end())
            throw ConfigError("connection " + std::to_string(conn.id) + ": unknown link " + std::to_string(l));
        if (conn.rate > it->second)
            ok = false;
    }
    return ok;
}

bool check_aggregate(const LinkLoad& load)
{
    int128 total = 0;
    for (auto d : load.per_class)
        total += d;
    return total <= load.capacity;
}

std::vector<ConstraintTerm> check_capacity_constraint(const LinkLoad& load, std::span<const TrafficClass> classes)
{
    if (classes.empty())
        throw ConfigError("capacity constraint needs at least one traffic class");
    if (load.per_class.size() != classes.size())
        throw ConfigError("link " + std::to_string(load.link) + ": load vector does not match class count");

    using Int = Rational::Int;
    const std::size_t n = classes.size();
    std::vector<ConstraintTerm> terms;
    terms.reserve(n);

    // Both sides are scaled by f_j (ns) so everything stays integral, then
    // divided back out as an exact fraction in bits/s.
    for (std::size_t j = 0; j < n; ++j) {
        const Int fj = classes[j].frame;
        Int lhs = 0;
        for (std::size_t i = j; i < n; ++i) {
            const Int fi = classes[i].frame;
            const Int windows = 1 + (fj + fi - 1) / fi;
            lhs += static_cast<Int>(load.per_class[i]) * windows * fi;
        }
        lhs -= static_cast<Int>(load.per_class[j]) * fj;

        Int rhs = static_cast<Int>(load.capacity) * fj;
        if (j > 0)
            rhs -= static_cast<Int>(load.max_packet_size) * kNanosPerSecond;

        ConstraintTerm t;
        t.j = static_cast<ClassId>(j + 1);
        t.lhs = Rational(lhs, fj);
        t.rhs = Rational(rhs, fj);
        t.slack = Rational(rhs - lhs, fj);
        t.satisfied = lhs <= rhs;
        terms.push_back(t);
    }
    return terms;
}

std::string to_string(AdmissionCheck check)
{
    switch (check) {
    case AdmissionCheck::none:
        return "none";
    case AdmissionCheck::rate:
        return "rate";
    case AdmissionCheck::aggregate:
        return "aggregate";
    case AdmissionCheck::capacity:
        return "capacity";
    }
    return "?";
}

std::string AdmissionDecision::describe() const
{
    if (admitted)
        return "admitted";
    std::string s = "rejected(" + to_string(failed);
    if (link)
        s += ", link " + std::to_string(*link);
    if (j)
        s += ", j=" + std::to_string(*j);
    return s + ")";
}

AdmissionController::AdmissionController(std::vector<TrafficClass> classes,
                                         std::span<const LinkSpec> links,
                                         Bits max_packet_size)
  : classes_(std::move(classes))
  , max_packet_size_(max_packet_size)
{
    validate_classes(classes_);
    if (classes_.empty())
        throw ConfigError("admission needs at least one traffic class");
    for (const auto& l : links) {
        if (!capacities_.emplace(l.id, l.capacity).second)
            throw ConfigError("duplicate link id " + std::to_string(l.id));
        loads_[l.id] = LinkLoad{l.id, l.capacity, std::vector<BitsPerSec>(classes_.size(), 0), max_packet_size_};
    }
}

void AdmissionController::check_known(const Connection& conn) const
{
    if (conn.class_id < 1 || static_cast<std::size_t>(conn.class_id) > classes_.size())
        throw ConfigError("connection " + std::to_string(conn.id) + ": unknown class " + std::to_string(conn.class_id));
    if (conn.rate < 0)
        throw ConfigError("connection " + std::to_string(conn.id) + ": negative rate");
    std::set<LinkId> seen;
    for (auto l : conn.path) {
        if (!capacities_.contains(l))
            throw ConfigError("connection " + std::to_string(conn.id) + ": unknown link " + std::to_string(l));
        if (!seen.insert(l).second)
            throw ConfigError("connection " + std::to_string(conn.id) + ": link " + std::to_string(l)
                              + " repeated in path");
    }
}

void AdmissionController::apply(const Connection& conn, BitsPerSec sign)
{
    for (auto l : conn.path)
        loads_.at(l).per_class[static_cast<std::size_t>(conn.class_id - 1)] += sign * conn.rate;
}

AdmissionDecision AdmissionController::admit(const Connection& conn)
{
    check_known(conn);

    if (!check_rate(conn, capacities_)) {
        for (auto l : conn.path)
            if (conn.rate > capacities_.at(l))
                return {false, AdmissionCheck::rate, l, std::nullopt};
    }

    apply(conn, +1);
    for (auto l : conn.path) {
        if (!check_aggregate(loads_.at(l))) {
            apply(conn, -1);
            return {false, AdmissionCheck::aggregate, l, std::nullopt};
        }
    }
    for (auto l : conn.path) {
        for (const auto& term : check_capacity_constraint(loads_.at(l), classes_)) {
            if (!term.satisfied) {
                apply(conn, -1);
                return {false, AdmissionCheck::capacity, l, term.j};
            }
        }
    }
    return {true, AdmissionCheck::none, std::nullopt, std::nullopt};
}

void AdmissionController::force(const Connection& conn)
{
    check_known(conn);
    apply(conn, +1);
}

const LinkLoad& AdmissionController::load(LinkId link) const
{
    auto it = loads_.find(link);
    if (it == loads_.end())
        throw ConfigError("unknown link " + std::to_string(link));
    return it->second;
}

std::map<LinkId, LinkLoad> compute_loads(std::span<const Connection> connections,
                                         std::span<const LinkSpec> links,
                                         std::size_t class_count,
                                         Bits max_packet_size)
{
    std::map<LinkId, LinkLoad> out;
    for (const auto& l : links)
        out[l.id] = LinkLoad{l.id, l.capacity, std::vector<BitsPerSec>(class_count, 0), max_packet_size};
    for (const auto& c : connections) {
        for (auto l : c.path) {
            auto it = out.find(l);
            if (it == out.end())
                throw ConfigError("connection " + std::to_string(c.id) + ": unknown link " + std::to_string(l));
            it->second.per_class.at(static_cast<std::size_t>(c.class_id - 1)) += c.rate;
        }
    }
    return out;
}

} // namespace sgmh

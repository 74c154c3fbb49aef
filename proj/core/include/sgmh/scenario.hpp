#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgmh/admission.hpp"
#include "sgmh/buffering.hpp"
#include "sgmh/framing.hpp"
#include "sgmh/types.hpp"

namespace sgmh {

inline constexpr int kScenarioSchemaVersion = 1;

struct Link {
    LinkId id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    BitsPerSec capacity = 0;
    TimeNs latency = 0;

    friend bool operator==(const Link&, const Link&) = default;
};

struct Topology {
    std::vector<NodeId> nodes;
    std::vector<Link> links;

    const Link* find_link(LinkId id) const;

    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Constant-rate source for one connection.
struct GeneratorSpec {
    Bits packet_size = 0;
    TimeNs start = 0;
    /// Exclusive; nullopt runs to the horizon.
    std::optional<TimeNs> stop;
    /// Added to start before the first emission.
    TimeNs offset = 0;
    /// Draw the offset uniformly in [0, packet_size / rate) from the run seed.
    bool random_offset = false;
    std::optional<std::int64_t> max_packets;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct ConnectionSpec {
    ConnectionId id = 0;
    ClassId class_id = 0;
    BitsPerSec rate = 0;
    std::vector<LinkId> path;
    /// nullopt defaults to 2 * hops * frame of the class.
    std::optional<TimeNs> deadline;
    GeneratorSpec generator;

    Connection connection() const { return {id, class_id, rate, path}; }

    friend bool operator==(const ConnectionSpec&, const ConnectionSpec&) = default;
};

struct PhaseSpec {
    LinkId link = 0;
    ClassId class_id = 0;
    TimeNs phase = 0;

    friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

struct BufferOverride {
    LinkId link = 0;
    ClassId class_id = 0;
    std::int64_t y = kDefaultBufferMultiplier;

    friend bool operator==(const BufferOverride&, const BufferOverride&) = default;
};

struct ScenarioOptions {
    bool drop_late = false;
    bool bypass_admission = false;

    friend bool operator==(const ScenarioOptions&, const ScenarioOptions&) = default;
};

struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    std::uint64_t seed = 1;
    std::vector<TrafficClass> classes;
    Bits max_packet_size = 0;
    Topology topology;
    /// Explicit phases; anything not listed is 0, or random when
    /// random_phases is set.
    std::vector<PhaseSpec> phases;
    bool random_phases = false;
    std::vector<ConnectionSpec> connections;
    TimeNs horizon = 0;
    TimeNs warm_up = 0;
    std::int64_t buffer_y = kDefaultBufferMultiplier;
    std::vector<BufferOverride> buffer_overrides;
    ScenarioOptions options;

    const TrafficClass& traffic_class(ClassId id) const;
    std::vector<LinkSpec> link_specs() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ValidationError listing every violated invariant with its field path.
void validate(const Scenario& scenario);

/// Parses the YAML scenario schema and validates it. Throws ParseError for
/// syntax/type/schema-version problems (with line:column) and
/// ValidationError for invariant violations.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<memory>");
Scenario load_scenario(const std::filesystem::path& path);

/// Writes the canonical YAML form; parse_scenario(to_yaml(s)) == s.
std::string to_yaml(const Scenario& scenario);

/// Departing clock of every (link, class) for a run with the given seed.
std::map<std::pair<LinkId, ClassId>, FrameClock> resolve_clocks(const Scenario& scenario, std::uint64_t seed);

/// Offered load D_l^i: summed rate of every scenario connection of class i
/// crossing link l, independent of admission.
std::map<std::pair<LinkId, ClassId>, BitsPerSec> offered_loads(const Scenario& scenario);

/// Buffer budget of every (link, class) with non-zero offered load.
BudgetTable buffer_budgets(const Scenario& scenario);

/// Runs every connection through admission in file order.
struct AdmissionReport {
    std::vector<std::pair<ConnectionId, AdmissionDecision>> decisions;
    std::map<LinkId, LinkLoad> loads; // admitted loads after all decisions
    bool all_admitted = true;
};
AdmissionReport run_admission(const Scenario& scenario);

} // namespace sgmh

#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "sgmh/metrics.hpp"
#include "sgmh/scenario.hpp"

namespace sgmh {

/// Event categories in processing order for equal timestamps.
enum class EventKind : std::uint8_t {
    transmit_complete = 0,
    frame_boundary = 1,
    transmit_start_check = 2,
    arrival = 3,
    generate = 4,
};

enum class TraceKind : std::uint8_t {
    generated,
    arrival,
    dropped,
    transmit_start,
    transmit_end,
    delivered,
};

const char* to_string(TraceKind kind);

/// One observable step of a packet. link is -1 for generated/delivered.
struct TraceRecord {
    TimeNs time = 0;
    TraceKind kind = TraceKind::generated;
    PacketId packet = 0;
    ClassId class_id = 0;
    NodeId node = 0;
    LinkId link = -1;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunOptions {
    /// Overrides the scenario seed.
    std::optional<std::uint64_t> seed;
    /// Called for every trace record, in processing order.
    std::function<void(const TraceRecord&)> on_trace;
};

/// Simulates the scenario from t = 0 to its horizon (exclusive). Without
/// bypass_admission only connections that pass admission carry traffic.
/// Throws ValidationError before any event runs if the scenario is invalid.
Metrics run(const Scenario& scenario, const RunOptions& options = {});

} // namespace sgmh

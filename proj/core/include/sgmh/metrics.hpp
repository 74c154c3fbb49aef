#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sgmh/framing.hpp"
#include "sgmh/types.hpp"

namespace sgmh {

/// Times at one node; kNever where the step did not happen.
struct HopSample {
    int hop = 0;
    TimeNs arrival = kNever;
    TimeNs eligible = kNever;
    TimeNs departure = kNever;

    TimeNs queuing() const noexcept { return departure - arrival; }
    bool completed() const noexcept { return departure != kNever; }

    friend bool operator==(const HopSample&, const HopSample&) = default;
};

/// Everything the CSV output carries about one packet.
struct PacketRecord {
    PacketId packet_id = 0;
    ClassId class_id = 0;
    std::vector<HopSample> hops;
    /// Delivery minus creation; kNever unless delivered.
    TimeNs e2e = kNever;
    bool late = false;
    bool dropped = false;

    bool delivered() const noexcept { return e2e != kNever; }

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct BufferStats {
    LinkId link = 0;
    ClassId class_id = 0;
    std::int64_t y = 0;
    BitsPerSec load = 0;
    TimeNs frame = 0;
    Bits budget = 0;
    Bits peak = 0;
    std::int64_t overflows = 0;
};

struct PortStats {
    LinkId link = 0;
    std::int64_t frame_overruns = 0;
    TimeNs busy = 0;
    double utilization = 0.0;
};

struct Metrics {
    std::uint64_t seed = 0;
    TimeNs horizon = 0;
    TimeNs warm_up = 0;
    std::vector<TrafficClass> classes;
    /// Packets created at or after warm_up, by id.
    std::vector<PacketRecord> packets;
    std::vector<BufferStats> buffers;
    std::vector<PortStats> ports;
    bool admitted = true;
    bool admission_bypassed = false;
    std::vector<ConnectionId> rejected;
};

struct PacketCounts {
    std::int64_t generated = 0;
    std::int64_t delivered = 0;
    std::int64_t dropped = 0;
    std::int64_t in_flight = 0;
    std::int64_t late = 0;
};

PacketCounts count_packets(std::span<const PacketRecord> packets);

/// Analytic queuing-delay envelope over `hops` nodes, link latency excluded.
struct DelayEnvelope {
    TimeNs min = 0;
    TimeNs max = 0;

    friend bool operator==(const DelayEnvelope&, const DelayEnvelope&) = default;
};

/// (hops * f, 2 * hops * f). Throws std::invalid_argument for hops < 0.
DelayEnvelope delay_bounds(const TrafficClass& cls, int hops);

struct BoundViolation {
    PacketId packet_id = 0;
    ClassId class_id = 0;
    /// Hop index, or -1 for the summed queuing delay of a delivered packet.
    int hop = 0;
    TimeNs observed = 0;
    TimeNs bound = 0;
};

struct ClassDelayStats {
    ClassId class_id = 0;
    TimeNs frame = 0;
    std::int64_t delivered = 0;
    std::int64_t hop_samples = 0;
    TimeNs hop_min = 0;
    TimeNs hop_max = 0;
    double hop_mean = 0.0;
    TimeNs path_min = 0;
    TimeNs path_max = 0;
    double path_mean = 0.0;
    int max_hops = 0;
    /// Eligibility waits outside (0, f].
    std::int64_t wait_violations = 0;
};

struct BoundsReport {
    std::vector<BoundViolation> violations;
    std::vector<ClassDelayStats> per_class;
    std::int64_t frame_overruns = 0;
    std::int64_t overflow_drops = 0;
    std::int64_t wait_violations = 0;

    bool clean() const noexcept
    {
        return violations.empty() && frame_overruns == 0 && overflow_drops == 0 && wait_violations == 0;
    }
};

/// Checks every completed hop against 2f and every delivered packet's
/// summed queuing delay against 2 * hops * f.
BoundsReport verify_bounds(const Metrics& metrics, std::span<const TrafficClass> classes);

inline constexpr const char* kCsvHeader =
    "packet_id,class,hop,arrival_ns,eligible_ns,departure_ns,e2e_ns,late,dropped";

/// One row per (packet, hop); missing times are written as -1.
void write_csv(const Metrics& metrics, std::ostream& out);
void write_csv(const Metrics& metrics, const std::filesystem::path& path);

/// Inverse of write_csv. Throws ParseError with the line number.
std::vector<PacketRecord> read_csv(std::istream& in);

/// Plain-text report: per-class delays against the analytic envelope,
/// buffer table, drop/late/overrun counts.
void write_summary(const Metrics& metrics, std::ostream& out);
void write_summary(const Metrics& metrics, const std::filesystem::path& path);

/// Milliseconds with three decimals, e.g. 1500000 -> "1.500".
std::string format_ms(TimeNs t);

} // namespace sgmh

#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "sgmh/buffering.hpp"
#include "sgmh/framing.hpp"
#include "sgmh/types.hpp"

namespace sgmh {

/// One node visited by a packet. eligible/departure stay kNever until they
/// happen; departure is the instant the last bit leaves the node.
struct HopRecord {
    NodeId node = 0;
    LinkId link = 0;
    TimeNs arrival = kNever;
    TimeNs eligible = kNever;
    TimeNs departure = kNever;

    friend bool operator==(const HopRecord&, const HopRecord&) = default;
};

struct Packet {
    PacketId id = 0;
    ClassId class_id = 0;
    Bits size = 0;
    ConnectionId connection = 0;
    TimeNs creation = 0;
    /// Relative end-to-end deadline.
    TimeNs deadline = 0;
    bool late = false;
    bool dropped = false;
    TimeNs delivered = kNever;
    std::vector<HopRecord> hops;
};

/// Sets packet.late when more than `deadline` has elapsed since creation.
/// The flag is sticky. Returns the new value.
bool mark_late(Packet& packet, TimeNs now);

/// Static description of one output port (the transmitting end of a link).
struct PortConfig {
    LinkId link = 0;
    NodeId node = 0;
    BitsPerSec capacity = 0;
    TimeNs latency = 0;
    /// Departing clock per class, indexed by class id - 1.
    std::vector<FrameClock> clocks;
    /// Buffer budget per class, indexed by class id - 1. A class with no
    /// budget rejects traffic with ConfigError.
    std::vector<std::optional<Bits>> budgets;
};

/// Budgets that never overflow, for ports used without buffer accounting.
std::vector<std::optional<Bits>> unlimited_budgets(std::size_t classes);

struct QueueEntry {
    PacketId id = 0;
    ClassId class_id = 0;
    Bits size = 0;
    TimeNs eligible = 0;
};

/// Outcome of handing a packet to a port.
struct EnqueueResult {
    bool accepted = false;
    TimeNs eligible = kNever;
};

/// Stop-and-go output port. Arriving packets are held until the next
/// departing frame boundary of their class, then served in non-preemptive
/// class-priority order, FIFO within a class.
///
/// The port queues packet ids; the Packet objects themselves are owned by
/// the caller and updated in place (hop records).
class OutputPort {
public:
    explicit OutputPort(PortConfig config);

    /// Holds the packet until next_frame_start(clock, now) and appends a hop
    /// record. On buffer overflow the packet is marked dropped, a hop record
    /// with only the arrival time is appended and accepted = false.
    EnqueueResult enqueue(Packet& packet, TimeNs now);

    /// Moves every held packet with eligibility <= now to its class's
    /// eligible queue. Returns the number moved.
    std::size_t promote(TimeNs now);

    /// Removes and returns the head of the highest-priority non-empty
    /// eligible queue. Requires now >= busy_until().
    std::optional<QueueEntry> select_next(TimeNs now);

    /// Starts sending `packet` at now. Returns the completion time and records
    /// it as the hop's departure. Counts a frame overrun if the packet cannot
    /// finish inside the frame instance that made it eligible.
    TimeNs transmit(Packet& packet, TimeNs now);

    /// Earliest pending eligibility time over all classes, if any.
    std::optional<TimeNs> next_eligibility() const;

    bool has_eligible() const;
    bool idle(TimeNs now) const noexcept { return now >= busy_until_; }

    const PortConfig& config() const noexcept { return config_; }
    TimeNs busy_until() const noexcept { return busy_until_; }
    TimeNs busy_time() const noexcept { return busy_time_; }
    std::int64_t frame_overruns() const noexcept { return frame_overruns_; }
    std::size_t class_count() const noexcept { return classes_.size(); }
    const BufferAccount& buffer(ClassId class_id) const;
    std::size_t held_count(ClassId class_id) const;
    std::size_t eligible_count(ClassId class_id) const;

private:
    struct ClassQueues {
        std::deque<QueueEntry> holding; // sorted by eligibility, FIFO on ties
        std::deque<QueueEntry> eligible;
        BufferAccount account;
        bool has_budget = false;
    };

    ClassQueues& queues_for(ClassId class_id);
    const ClassQueues& queues_for(ClassId class_id) const;

    PortConfig config_;
    std::vector<ClassQueues> classes_;
    std::vector<std::size_t> priority_order_; // class indices, highest first
    TimeNs busy_until_ = 0;
    TimeNs busy_time_ = 0;
    std::int64_t frame_overruns_ = 0;
};

} // namespace sgmh

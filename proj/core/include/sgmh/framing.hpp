#pragma once

#include <cstdint>
#include <span>

#include "sgmh/types.hpp"

namespace sgmh {

/// A frame type. Classes are numbered 1..N in order of strictly increasing
/// frame duration; class 1 has the smallest frame and the highest priority.
struct TrafficClass {
    ClassId id = 0;
    TimeNs frame = 0;
    /// Share of link capacity allocated to this class, in [0, 1].
    double bandwidth_fraction = 0.0;

    friend bool operator==(const TrafficClass&, const TrafficClass&) = default;
};

/// Throws ConfigError unless ids are 1..N in order, frames are positive and
/// strictly increasing, and the bandwidth fractions sum to at most 1.
void validate_classes(std::span<const TrafficClass> classes);

/// Smaller frame wins. Returns true if `a` is served before `b`.
inline bool higher_priority(const TrafficClass& a, const TrafficClass& b)
{
    return a.frame < b.frame;
}

/// Periodic frame boundaries at phase + k * frame for k = 0, 1, ...
/// Instance k is the half-open interval [phase + k*frame, phase + (k+1)*frame).
class FrameClock {
public:
    FrameClock() = default;
    FrameClock(TimeNs frame, TimeNs phase);

    TimeNs frame() const noexcept { return frame_; }
    TimeNs phase() const noexcept { return phase_; }

    /// Start of instance k.
    TimeNs instance_start(std::int64_t k) const noexcept { return phase_ + k * frame_; }

    friend bool operator==(const FrameClock&, const FrameClock&) = default;

private:
    TimeNs frame_ = 1;
    TimeNs phase_ = 0;
};

/// Index of the instance containing t. A boundary instant belongs to the
/// instance it starts. Throws std::out_of_range if t < phase.
std::int64_t frame_index(const FrameClock& clock, TimeNs t);

/// Smallest boundary strictly greater than t.
TimeNs next_frame_start(const FrameClock& clock, TimeNs t);

/// Like next_frame_start, but also defined before the epoch: times in
/// [phase - frame, phase) belong to instance -1, whose successor starts at
/// phase. Requires t >= 0.
TimeNs next_boundary_after(const FrameClock& clock, TimeNs t);

/// The receiving-end view of a link's departing clock: same frame, phase
/// shifted by the link latency (mod frame).
FrameClock arriving_clock(const FrameClock& departing, TimeNs link_latency);

} // namespace sgmh

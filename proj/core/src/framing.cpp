#include "sgmh/framing.hpp"

#include <stdexcept>

namespace sgmh {

void validate_classes(std::span<const TrafficClass> classes)
{
    double fraction_sum = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& c = classes[k];
        if (c.id != static_cast<ClassId>(k + 1))
            throw ConfigError("class ids must be contiguous 1..N; position " + std::to_string(k) + " has id "
                              + std::to_string(c.id));
        if (c.frame <= 0)
            throw ConfigError("class " + std::to_string(c.id) + ": frame duration must be positive");
        if (k > 0 && c.frame <= classes[k - 1].frame)
            throw ConfigError("class " + std::to_string(c.id) + ": frame durations must strictly increase with id");
        if (!(c.bandwidth_fraction >= 0.0 && c.bandwidth_fraction <= 1.0))
            throw ConfigError("class " + std::to_string(c.id) + ": bandwidth_fraction must be in [0, 1]");
        fraction_sum += c.bandwidth_fraction;
    }
    // Fractions are decimal inputs like 0.7 + 0.2 + 0.1.
    if (fraction_sum > 1.0 + 1e-9)
        throw ConfigError("bandwidth fractions sum to more than 1");
}

FrameClock::FrameClock(TimeNs frame, TimeNs phase)
  : frame_(frame)
  , phase_(phase)
{
    if (frame <= 0)
        throw std::invalid_argument("frame duration must be positive");
    if (phase < 0 || phase >= frame)
        throw std::invalid_argument("phase must lie in [0, frame)");
}

std::int64_t frame_index(const FrameClock& clock, TimeNs t)
{
    if (t < clock.phase())
        throw std::out_of_range("before clock epoch");
    return (t - clock.phase()) / clock.frame();
}

TimeNs next_frame_start(const FrameClock& clock, TimeNs t)
{
    return clock.instance_start(frame_index(clock, t) + 1);
}

TimeNs next_boundary_after(const FrameClock& clock, TimeNs t)
{
    if (t < 0)
        throw std::out_of_range("negative time");
    if (t < clock.phase())
        return clock.phase();
    return next_frame_start(clock, t);
}

FrameClock arriving_clock(const FrameClock& departing, TimeNs link_latency)
{
    if (link_latency < 0)
        throw std::invalid_argument("link latency must be non-negative");
    return FrameClock(departing.frame(), (departing.phase() + link_latency % departing.frame()) % departing.frame());
}

} // namespace sgmh

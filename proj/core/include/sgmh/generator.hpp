#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgmh/framing.hpp"
#include "sgmh/types.hpp"

namespace sgmh {

struct GeneratorConfig {
    BitsPerSec rate = 0;
    Bits packet_size = 0;
    Bits max_packet_size = 0;
    TimeNs start = 0;
    TimeNs offset = 0;
    /// Exclusive end of emission.
    std::optional<TimeNs> stop;
    std::optional<std::int64_t> max_packets;
    /// Departing clock of the connection's class on its first link. Each of
    /// its frame instances receives at most rate * frame bits.
    FrameClock budget_clock;
};

/// Constant-rate source: packet n is due at start + offset + n * size / rate
/// (rounded up to a nanosecond). A packet that would push the current
/// frame past its rate * frame budget is deferred to the next boundary.
class Generator {
public:
    /// Throws ConfigError if packet_size is not in (0, max_packet_size] or a
    /// single packet exceeds the per-frame budget.
    explicit Generator(GeneratorConfig config);

    /// Next emission time, or nullopt once exhausted.
    std::optional<TimeNs> next();

    const GeneratorConfig& config() const noexcept { return config_; }
    std::int64_t emitted() const noexcept { return emitted_; }

private:
    bool fits_budget(Bits frame_bits) const;

    GeneratorConfig config_;
    std::int64_t emitted_ = 0;
    TimeNs last_ = kNever;
    std::int64_t frame_ = 0;
    Bits frame_bits_ = 0;
    bool done_ = false;
};

struct Emission {
    TimeNs time = 0;
    Bits size = 0;
};

/// Drains the generator for emissions strictly before `until`.
std::vector<Emission> generate(Generator& gen, TimeNs until);

} // namespace sgmh

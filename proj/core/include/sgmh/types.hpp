#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgmh {

// All simulated time is integer nanoseconds; rates are bits per second.
using TimeNs = std::int64_t;
using Bits = std::int64_t;
using BitsPerSec = std::int64_t;

using NodeId = std::int64_t;
using LinkId = std::int64_t;
using ConnectionId = std::int64_t;
using PacketId = std::int64_t;
using ClassId = int;

__extension__ typedef __int128 int128;

inline constexpr TimeNs kNanosPerSecond = 1'000'000'000;
inline constexpr TimeNs kNanosPerMilli = 1'000'000;
inline constexpr TimeNs kNever = -1;

/// Time needed to serialize `size` bits onto a link of `capacity` bits/s,
/// rounded up to the next whole nanosecond.
inline TimeNs transmission_time(Bits size, BitsPerSec capacity)
{
    const int128 num = static_cast<int128>(size) * kNanosPerSecond;
    return static_cast<TimeNs>((num + capacity - 1) / capacity);
}

/// A scenario or API argument that names something inconsistent
/// (unknown class, unknown link, missing budget, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario text. The message carries line/column when known.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One or more scenario invariants failed. Every issue is prefixed with
/// the field path it refers to, e.g. "links[2].capacity_bps: must be > 0".
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

} // namespace sgmh

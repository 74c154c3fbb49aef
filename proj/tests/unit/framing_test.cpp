#include <gtest/gtest.h>

#include <random>

#include "sgmh/framing.hpp"

namespace sgmh {
namespace {

constexpr TimeNs ms = kNanosPerMilli;

TEST(FrameIndex, CountsWholeFramesFromPhase)
{
    EXPECT_EQ(frame_index(FrameClock(5 * ms, 2 * ms), 7 * ms), 1);
    EXPECT_EQ(frame_index(FrameClock(5 * ms, 0), 0), 0);
    EXPECT_EQ(frame_index(FrameClock(5 * ms, 0), 5 * ms - 1), 0);
}

TEST(FrameIndex, BoundaryBelongsToNewInstance)
{
    const FrameClock c(5 * ms, 2 * ms);
    EXPECT_EQ(frame_index(c, 2 * ms), 0);
    EXPECT_EQ(frame_index(c, 12 * ms), 2);
    EXPECT_EQ(frame_index(c, 12 * ms - 1), 1);
}

TEST(FrameIndex, RejectsTimesBeforeEpoch)
{
    EXPECT_THROW(frame_index(FrameClock(5 * ms, 2 * ms), 1 * ms), std::out_of_range);
}

TEST(NextFrameStart, IsStrictlyLater)
{
    EXPECT_EQ(next_frame_start(FrameClock(10 * ms, 4 * ms), 13'900'000), 14 * ms);
    EXPECT_EQ(next_frame_start(FrameClock(10 * ms, 4 * ms), 14 * ms), 24 * ms);
    EXPECT_EQ(next_frame_start(FrameClock(10 * ms, 4 * ms), 4 * ms), 14 * ms);
    EXPECT_THROW(next_frame_start(FrameClock(10 * ms, 4 * ms), 3 * ms), std::out_of_range);
}

TEST(NextBoundaryAfter, CoversTimesBeforePhase)
{
    const FrameClock c(10 * ms, 4 * ms);
    EXPECT_EQ(next_boundary_after(c, 0), 4 * ms);
    EXPECT_EQ(next_boundary_after(c, 4 * ms - 1), 4 * ms);
    EXPECT_EQ(next_boundary_after(c, 4 * ms), 14 * ms);
}

TEST(FrameClock, RejectsBadParameters)
{
    EXPECT_THROW(FrameClock(0, 0), std::invalid_argument);
    EXPECT_THROW(FrameClock(-1, 0), std::invalid_argument);
    EXPECT_THROW(FrameClock(5, 5), std::invalid_argument);
    EXPECT_THROW(FrameClock(5, -1), std::invalid_argument);
}

TEST(ArrivingClock, ShiftsPhaseByLatency)
{
    EXPECT_EQ(arriving_clock(FrameClock(5 * ms, 3 * ms), 7 * ms).phase(), 0);
    EXPECT_EQ(arriving_clock(FrameClock(1 * ms, 0), 250'000).phase(), 250'000);
    EXPECT_EQ(arriving_clock(FrameClock(1 * ms, 0), 250'000).frame(), 1 * ms);
    EXPECT_THROW(arriving_clock(FrameClock(1 * ms, 0), -1), std::invalid_argument);
}

TEST(ArrivingClock, WholeFrameLatencyKeepsPhase)
{
    const FrameClock c(3 * ms, 1 * ms);
    for (int k = 0; k < 5; ++k)
        EXPECT_EQ(arriving_clock(c, k * 3 * ms), c);
}

TEST(TrafficClasses, Validation)
{
    std::vector<TrafficClass> ok{{1, 1 * ms, 0.5}, {2, 5 * ms, 0.3}, {3, 10 * ms, 0.2}};
    EXPECT_NO_THROW(validate_classes(ok));
    EXPECT_TRUE(higher_priority(ok[0], ok[2]));
    EXPECT_FALSE(higher_priority(ok[2], ok[0]));

    auto bad = ok;
    bad[1].frame = 10 * ms;
    EXPECT_THROW(validate_classes(bad), ConfigError);
    bad = ok;
    bad[2].id = 4;
    EXPECT_THROW(validate_classes(bad), ConfigError);
    bad = ok;
    bad[0].bandwidth_fraction = 0.9;
    EXPECT_THROW(validate_classes(bad), ConfigError);
}

// Every t >= phase lies in exactly one instance and the boundary after it
// is one frame past that instance's start.
TEST(FrameClockProperty, InstancesTileTime)
{
    std::mt19937_64 rng(42);
    for (int n = 0; n < 20000; ++n) {
        const TimeNs f = 1 + static_cast<TimeNs>(rng() % 50'000'000);
        const TimeNs phase = static_cast<TimeNs>(rng() % static_cast<std::uint64_t>(f));
        const FrameClock c(f, phase);
        const TimeNs t = phase + static_cast<TimeNs>(rng() % 1'000'000'000'000ULL);
        const auto k = frame_index(c, t);
        ASSERT_LE(c.instance_start(k), t);
        ASSERT_LT(t, c.instance_start(k + 1));
        ASSERT_EQ(next_frame_start(c, t), c.instance_start(k + 1));
        const auto wait = next_frame_start(c, t) - t;
        ASSERT_GT(wait, 0);
        ASSERT_LE(wait, f);
    }
}

TEST(FrameClockProperty, ArrivingShiftsCompose)
{
    std::mt19937_64 rng(7);
    for (int n = 0; n < 20000; ++n) {
        const TimeNs f = 1 + static_cast<TimeNs>(rng() % 10'000'000);
        const FrameClock c(f, static_cast<TimeNs>(rng() % static_cast<std::uint64_t>(f)));
        const TimeNs a = static_cast<TimeNs>(rng() % 100'000'000);
        const TimeNs b = static_cast<TimeNs>(rng() % 100'000'000);
        ASSERT_EQ(arriving_clock(arriving_clock(c, a), b), arriving_clock(c, a + b));
    }
}

} // namespace
} // namespace sgmh

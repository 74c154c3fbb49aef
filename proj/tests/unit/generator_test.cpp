#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sgmh/generator.hpp"

namespace sgmh {
namespace {

constexpr TimeNs ms = kNanosPerMilli;
constexpr BitsPerSec Mbps = 1'000'000;

GeneratorConfig config(BitsPerSec rate, Bits size, FrameClock clock)
{
    GeneratorConfig g;
    g.rate = rate;
    g.packet_size = size;
    g.max_packet_size = 14000;
    g.budget_clock = clock;
    return g;
}

TEST(Generator, TenPacketsPerFrameAtTableTwoRate)
{
    Generator gen(config(140 * Mbps, 14000, FrameClock(1 * ms, 0)));
    const auto out = generate(gen, 10 * ms);
    ASSERT_EQ(out.size(), 100u);
    for (std::int64_t k = 0; k < 10; ++k) {
        const auto in_frame = std::count_if(out.begin(), out.end(), [&](const Emission& e) {
            return e.time >= k * ms && e.time < (k + 1) * ms;
        });
        EXPECT_EQ(in_frame, 10) << "frame " << k;
    }
    EXPECT_EQ(out[1].time, 100'000);
}

TEST(Generator, SpacingRoundsUp)
{
    GeneratorConfig g = config(3, 1, FrameClock(1 * kNanosPerSecond, 0));
    g.max_packet_size = 1;
    Generator gen(g);
    EXPECT_EQ(gen.next(), 0);
    EXPECT_EQ(gen.next(), 333'333'334);
    EXPECT_EQ(gen.next(), 666'666'667);
}

TEST(Generator, StartOffsetStopAndCount)
{
    auto g = config(14 * Mbps, 14000, FrameClock(1 * ms, 0));
    g.start = 2 * ms;
    g.offset = 300'000;
    g.stop = 6 * ms;
    Generator gen(g);
    const auto out = generate(gen, 100 * ms);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out.front().time, 2'300'000);
    EXPECT_EQ(out.back().time, 5'300'000);

    g.stop.reset();
    g.max_packets = 2;
    Generator capped(g);
    EXPECT_EQ(generate(capped, 100 * ms).size(), 2u);
    EXPECT_EQ(capped.emitted(), 2);
}

TEST(Generator, FullFrameDefersToNextBoundary)
{
    // 10 Mb/s over a 1 ms frame is 10000 bits, so one 6000-bit packet per
    // instance. Instance -1 ends at 0.25 ms; later packets slip to boundaries.
    Generator gen(config(10 * Mbps, 6000, FrameClock(1 * ms, 250'000)));
    EXPECT_EQ(gen.next(), 0);
    EXPECT_EQ(gen.next(), 600'000);
    EXPECT_EQ(gen.next(), 1'250'000);
    EXPECT_EQ(gen.next(), 2'250'000);
    EXPECT_EQ(gen.next(), 3'250'000);
    EXPECT_EQ(gen.next(), 4'250'000);
}

TEST(Generator, RejectsOversizePackets)
{
    EXPECT_THROW(Generator(config(1 * Mbps, 14000, FrameClock(1 * ms, 0))), ConfigError);
    EXPECT_THROW(Generator(config(100 * Mbps, 14001, FrameClock(1 * ms, 0))), ConfigError);
    EXPECT_THROW(Generator(config(100 * Mbps, 0, FrameClock(1 * ms, 0))), ConfigError);
}

TEST(Generator, ZeroRateEmitsNothing)
{
    Generator gen(config(0, 1000, FrameClock(1 * ms, 0)));
    EXPECT_FALSE(gen.next().has_value());
}

// No frame instance of the budget clock ever receives more than R*f bits,
// and emissions never go backwards.
TEST(GeneratorProperty, PerFrameBudgetHolds)
{
    std::mt19937_64 rng(9);
    for (int n = 0; n < 300; ++n) {
        const TimeNs f = 100'000 + static_cast<TimeNs>(rng() % 5'000'000);
        const FrameClock clock(f, static_cast<TimeNs>(rng() % static_cast<std::uint64_t>(f)));
        const Bits size = 100 + static_cast<Bits>(rng() % 13'900);
        const auto min_rate = static_cast<BitsPerSec>((static_cast<int128>(size) * kNanosPerSecond + f - 1) / f);
        const BitsPerSec rate = min_rate + static_cast<BitsPerSec>(rng() % (200 * Mbps));
        auto g = config(rate, size, clock);
        g.offset = static_cast<TimeNs>(rng() % 1'000'000);
        Generator gen(g);
        const auto out = generate(gen, 50 * f);
        std::map<std::int64_t, Bits> per_frame;
        TimeNs prev = 0;
        for (const auto& e : out) {
            ASSERT_GE(e.time, prev);
            prev = e.time;
            const auto k = e.time < clock.phase() ? -1 : frame_index(clock, e.time);
            per_frame[k] += e.size;
        }
        for (const auto& [k, bits] : per_frame)
            ASSERT_LE(static_cast<int128>(bits) * kNanosPerSecond, static_cast<int128>(rate) * f) << "frame " << k;
    }
}

} // namespace
} // namespace sgmh

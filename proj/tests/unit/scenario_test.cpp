#include <gtest/gtest.h>

#include <algorithm>

#include "random_scenarios.hpp"
#include "sgmh/scenario.hpp"

namespace sgmh {
namespace {

constexpr const char* kChain = R"(schema_version: 1
name: chain
seed: 5
max_packet_size_bits: 14000
horizon_ns: 50000000
classes:
  - {id: 1, frame_ms: 1, bandwidth_fraction: 0.7}
  - {id: 2, frame_ms: 5, bandwidth_fraction: 0.2}
  - {id: 3, frame_ms: 10, bandwidth_fraction: 0.1}
nodes: [1, 2, 3]
links:
  - {id: 1, src: 1, dst: 2, capacity_bps: 200000000, latency_ns: 50000}
  - {id: 2, src: 2, dst: 3, capacity_bps: 200000000, latency_ns: 0}
connections:
  - {id: 1, class: 1, rate_bps: 10000000, path: [1, 2], packet_size_bits: 10000}
  - {id: 2, class: 3, path: [2], packet_size_bits: 14000, offset_ns: random}
)";

std::string with(std::string text, const std::string& from, const std::string& to)
{
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

std::vector<std::string> issues_of(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.issues();
    }
    return {};
}

bool has_issue(const std::vector<std::string>& issues, const std::string& prefix)
{
    return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

TEST(ParseScenario, ReadsEveryField)
{
    const auto s = parse_scenario(kChain);
    EXPECT_EQ(s.name, "chain");
    EXPECT_EQ(s.seed, 5u);
    ASSERT_EQ(s.classes.size(), 3u);
    EXPECT_EQ(s.classes[1].frame, 5'000'000);
    EXPECT_EQ(s.topology.links[0].latency, 50'000);
    ASSERT_EQ(s.connections.size(), 2u);
    EXPECT_EQ(s.connections[0].rate, 10'000'000);
    EXPECT_EQ(s.connections[0].path, (std::vector<LinkId>{1, 2}));
    EXPECT_TRUE(s.connections[1].generator.random_offset);
    EXPECT_EQ(s.buffer_y, kDefaultBufferMultiplier);
    EXPECT_EQ(s.warm_up, 0);
}

TEST(ParseScenario, RateDefaultsToFractionOfNarrowestLink)
{
    auto text = with(kChain, "capacity_bps: 200000000, latency_ns: 0", "capacity_bps: 100000000, latency_ns: 0");
    const auto s = parse_scenario(text);
    EXPECT_EQ(s.connections[1].rate, 10'000'000);
}

TEST(ParseScenario, FrameNsAndFrameMsAgree)
{
    const auto a = parse_scenario(kChain);
    const auto b = parse_scenario(with(kChain, "frame_ms: 5,", "frame_ns: 5000000,"));
    EXPECT_EQ(a.classes, b.classes);
}

TEST(ParseScenario, EmptyDocument)
{
    EXPECT_THROW(parse_scenario(""), ParseError);
    EXPECT_THROW(parse_scenario("# nothing\n"), ParseError);
}

TEST(ParseScenario, SchemaVersionMismatch)
{
    try {
        parse_scenario(with(kChain, "schema_version: 1", "schema_version: 2"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("schema"), std::string::npos);
    }
}

TEST(ParseScenario, UnknownKeyReportsPosition)
{
    try {
        parse_scenario(with(kChain, "seed: 5", "seed: 5\nsede: 6"));
        FAIL();
    } catch (const ParseError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("sede"), std::string::npos) << what;
        EXPECT_NE(what.find("line 4"), std::string::npos) << what;
    }
}

TEST(ParseScenario, TypeErrorsAreParseErrors)
{
    EXPECT_THROW(parse_scenario(with(kChain, "seed: 5", "seed: five")), ParseError);
    EXPECT_THROW(parse_scenario(with(kChain, "nodes: [1, 2, 3]", "nodes: 3")), ParseError);
    EXPECT_THROW(parse_scenario("[1, 2"), ParseError);
}

TEST(Validate, DuplicateLinkId)
{
    const auto issues = issues_of(with(kChain, "{id: 2, src: 2", "{id: 1, src: 2"));
    EXPECT_TRUE(has_issue(issues, "links[1].id: duplicate link id 1"));
}

TEST(Validate, CollectsEveryIssueWithFieldPath)
{
    auto text = with(kChain, "capacity_bps: 200000000, latency_ns: 50000", "capacity_bps: 0, latency_ns: -1");
    text = with(text, "path: [1, 2]", "path: [2, 1]");
    text = with(text, "dst: 3", "dst: 9");
    const auto issues = issues_of(text);
    EXPECT_TRUE(has_issue(issues, "links[0].capacity_bps")) << issues.size();
    EXPECT_TRUE(has_issue(issues, "links[0].latency_ns"));
    EXPECT_TRUE(has_issue(issues, "links[1].dst: unknown node 9"));
    EXPECT_TRUE(has_issue(issues, "connections[0].path[1]"));
}

TEST(Validate, PacketSizeLimits)
{
    EXPECT_TRUE(has_issue(issues_of(with(kChain, "packet_size_bits: 10000", "packet_size_bits: 14001")),
                          "connections[0].packet_size_bits"));
    // 1 Mb/s over a 1 ms frame is 1000 bits per frame.
    EXPECT_TRUE(has_issue(issues_of(with(kChain, "rate_bps: 10000000", "rate_bps: 1000000")),
                          "connections[0].packet_size_bits"));
}

TEST(Validate, ClassOrdering)
{
    EXPECT_TRUE(has_issue(issues_of(with(kChain, "frame_ms: 5,", "frame_ms: 10,")), "classes[2].frame"));
    EXPECT_TRUE(has_issue(issues_of(with(kChain, "bandwidth_fraction: 0.7", "bandwidth_fraction: 0.8")), "classes"));
}

TEST(Validate, PathRevisitingANode)
{
    auto text = with(kChain, "  - {id: 2, src: 2, dst: 3, capacity_bps: 200000000, latency_ns: 0}",
                     "  - {id: 2, src: 2, dst: 1, capacity_bps: 200000000, latency_ns: 0}");
    text = with(text, "path: [1, 2]", "path: [1, 2, 1]");
    EXPECT_FALSE(issues_of(text).empty());
}

TEST(ToYaml, RoundTrips)
{
    const auto s = parse_scenario(kChain);
    EXPECT_EQ(parse_scenario(to_yaml(s)), s);
}

TEST(ToYaml, RoundTripsRandomScenarios)
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto s = testing::random_admitted_scenario(seed);
        ASSERT_EQ(parse_scenario(to_yaml(s)), s) << seed;
        const auto m = testing::random_micro_scenario(seed);
        ASSERT_EQ(parse_scenario(to_yaml(m)), m) << seed;
    }
}

TEST(ResolveClocks, ExplicitPhasesAndDeterministicRandomOnes)
{
    auto s = parse_scenario(kChain);
    s.phases.push_back({2, 1, 400'000});
    auto clocks = resolve_clocks(s, 1);
    EXPECT_EQ(clocks.at({2, 1}).phase(), 400'000);
    EXPECT_EQ(clocks.at({1, 3}).phase(), 0);
    EXPECT_EQ(clocks.size(), 6u);

    s.random_phases = true;
    const auto a = resolve_clocks(s, 9);
    EXPECT_EQ(a, resolve_clocks(s, 9));
    EXPECT_EQ(a.at({2, 1}).phase(), 400'000);
    bool any_differs = false;
    for (std::uint64_t seed = 10; seed < 20; ++seed)
        any_differs |= resolve_clocks(s, seed) != a;
    EXPECT_TRUE(any_differs);
    for (const auto& [key, clock] : a) {
        EXPECT_GE(clock.phase(), 0);
        EXPECT_LT(clock.phase(), clock.frame());
    }
}

TEST(BufferBudgets, UseOfferedLoadAndOverrides)
{
    auto s = parse_scenario(kChain);
    s.buffer_overrides.push_back({2, 3, 3});
    const auto table = buffer_budgets(s);
    // Link 2 carries connection 1 (class 1, 10 Mb/s) and 2 (class 3, 20 Mb/s).
    EXPECT_EQ(table.at(2, 1).budget_bits, 2 * 10'000'000 / 1000);
    EXPECT_EQ(table.at(2, 3).budget_bits, 3 * 20'000'000 / 100);
    EXPECT_EQ(table.find(1, 3), nullptr);
}

TEST(RunAdmission, FileOrderDecisions)
{
    // 20 Mb/s of class 3 adds 20 * (1 + 1) * 10 = 400 Mb/s to the j=1 term
    // of link 2, on top of connection 1's 10 Mb/s.
    const auto report = run_admission(parse_scenario(kChain));
    ASSERT_EQ(report.decisions.size(), 2u);
    EXPECT_TRUE(report.decisions[0].second.admitted);
    EXPECT_EQ(report.decisions[1].second.describe(), "rejected(capacity, link 2, j=1)");
    EXPECT_FALSE(report.all_admitted);
    EXPECT_EQ(report.loads.at(2).per_class, (std::vector<BitsPerSec>{10'000'000, 0, 0}));

    const auto lighter = run_admission(parse_scenario(with(kChain, "bandwidth_fraction: 0.1}", "bandwidth_fraction: 0.01}")));
    EXPECT_TRUE(lighter.all_admitted);
}

TEST(RandomAdmittedScenario, EveryConnectionPassesAdmission)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = testing::random_admitted_scenario(seed);
        EXPECT_TRUE(run_admission(s).all_admitted) << seed;
        EXPECT_GE(testing::expected_packets(s), 10'000) << seed;
    }
}

} // namespace
} // namespace sgmh

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "brute_force.hpp"
#include "capacity_oracle.hpp"
#include "random_scenarios.hpp"
#include "sgmh/sgmh.hpp"

namespace fs = std::filesystem;
using namespace sgmh;

namespace {

const fs::path kCli = SGMH_CLI_PATH;
const fs::path kScenarios = SGMH_SCENARIO_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Shell {
    int code = -1;
    std::string out;
};

Shell shell(const std::string& args, const fs::path& work)
{
    const auto out_file = work / "stdout.txt";
    const std::string cmd = "\"" + kCli.string() + "\" " + args + " > \"" + out_file.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Shell r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::ostringstream s;
    s << in.rdbuf();
    r.out = s.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome table1_envelope(const fs::path& work)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = shell("bounds \"" + (kScenarios / "table1.scenario").string() + "\" --hops 5", work);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.code != 0)
        return {false, "exit " + std::to_string(r.code)};

    const std::regex row(R"(TYPE-(\d)\s+([\d.]+)\s+([\d.]+)\s+([\d.]+))");
    const std::map<int, std::pair<std::string, std::string>> want{
        {1, {"5.000", "10.000"}}, {2, {"25.000", "50.000"}}, {3, {"50.000", "100.000"}}};
    std::map<int, std::pair<std::string, std::string>> got;
    for (std::sregex_iterator it(r.out.begin(), r.out.end(), row), end; it != end; ++it)
        got[std::stoi((*it)[1])] = {(*it)[3], (*it)[4]};
    std::ostringstream d;
    for (const auto& [k, v] : got)
        d << "TYPE-" << k << " (" << v.first << ", " << v.second << ") ";
    d << "in " << std::fixed << std::setprecision(3) << secs << " s";
    return {got == want && secs < 1.0, d.str()};
}

Outcome table2_buffers(const fs::path& work)
{
    const auto r = shell("buffers \"" + (kScenarios / "table2.scenario").string() + "\"", work);
    if (r.code != 0)
        return {false, "exit " + std::to_string(r.code)};
    const std::regex row(R"(\n1\s+TYPE-(\d)\s+[\d.]+\s+\d+\s+\d+\s+(\d+))");
    std::map<int, std::string> got;
    for (std::sregex_iterator it(r.out.begin(), r.out.end(), row), end; it != end; ++it)
        got[std::stoi((*it)[1])] = (*it)[2];
    const std::map<int, std::string> want{{1, "280000"}, {2, "400000"}, {3, "400000"}};
    std::ostringstream d;
    for (const auto& [k, v] : got)
        d << "TYPE-" << k << " " << v << " bits  ";
    return {got == want, d.str()};
}

struct SweepResult {
    int scenarios = 0;
    std::int64_t min_packets = std::numeric_limits<std::int64_t>::max();
    std::int64_t hop_samples = 0;
    std::int64_t violations = 0;
    std::int64_t overruns = 0;
    std::int64_t wait_samples = 0;
    std::int64_t wait_violations = 0;
    std::int64_t overflow_drops = 0;
    std::vector<std::uint64_t> bound_failures;
    std::vector<std::uint64_t> overflow_failures;
};

SweepResult admitted_sweep()
{
    SweepResult s;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto scenario = testing::random_admitted_scenario(seed);
        const auto m = run(scenario);
        const auto report = verify_bounds(m, m.classes);
        ++s.scenarios;
        s.min_packets = std::min(s.min_packets, count_packets(m.packets).generated);
        for (const auto& p : m.packets) {
            for (const auto& h : p.hops) {
                if (h.eligible != kNever)
                    ++s.wait_samples;
                if (h.completed())
                    ++s.hop_samples;
            }
        }
        s.violations += static_cast<std::int64_t>(std::count_if(report.violations.begin(), report.violations.end(),
                                                                 [](const BoundViolation& v) { return v.hop >= 0; }));
        s.overruns += report.frame_overruns;
        s.wait_violations += report.wait_violations;
        s.overflow_drops += report.overflow_drops;
        if (report.frame_overruns > 0 || !report.violations.empty())
            s.bound_failures.push_back(seed);
        if (report.overflow_drops > 0)
            s.overflow_failures.push_back(seed);
    }
    return s;
}

std::string seeds(const std::vector<std::uint64_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out.empty() ? "none" : out;
}

Outcome delay_soundness(const SweepResult& s)
{
    std::ostringstream d;
    d << s.scenarios << " scenarios, >= " << s.min_packets << " packets each, " << s.hop_samples << " hop samples, "
      << s.violations << " hops over 2f, " << s.overruns << " frame overruns; failing seeds: " << seeds(s.bound_failures);
    return {s.scenarios >= 100 && s.min_packets >= 10'000 && s.violations == 0 && s.overruns == 0, d.str()};
}

Outcome eligibility_wait(const SweepResult& s)
{
    std::ostringstream d;
    d << s.wait_samples << " waits, " << s.wait_violations << " outside (0, f]";
    return {s.scenarios >= 100 && s.wait_violations == 0, d.str()};
}

Outcome buffer_sufficiency(const SweepResult& s)
{
    std::ostringstream d;
    d << s.overflow_drops << " overflow drops with y = 2; failing seeds: " << seeds(s.overflow_failures);
    return {s.scenarios >= 100 && s.overflow_drops == 0, d.str()};
}

Outcome admission_oracle()
{
    std::mt19937_64 rng(2024);
    int instances = 0;
    int terms = 0;
    int mismatches = 0;
    int satisfied = 0;
    for (; instances < 5000; ++instances) {
        const std::size_t n = 1 + rng() % 5;
        std::vector<TrafficClass> classes;
        std::vector<std::int64_t> frames;
        TimeNs f = 1 + static_cast<TimeNs>(rng() % 20'000'000);
        for (std::size_t i = 0; i < n; ++i) {
            classes.push_back({static_cast<ClassId>(i + 1), f, 0.0});
            frames.push_back(f);
            f += 1 + static_cast<TimeNs>(rng() % 50'000'000);
        }
        LinkLoad load;
        load.link = 1;
        load.capacity = 1 + static_cast<BitsPerSec>(rng() % 10'000'000'000ULL);
        load.max_packet_size = 1 + static_cast<Bits>(rng() % 200'000);
        // Mix of light loads (near the boundary) and heavy ones.
        const auto scale = rng() % 2 ? load.capacity / static_cast<BitsPerSec>(4 * n) + 1 : load.capacity;
        for (std::size_t i = 0; i < n; ++i)
            load.per_class.push_back(static_cast<BitsPerSec>(rng() % static_cast<std::uint64_t>(scale)));

        const auto got = check_capacity_constraint(load, classes);
        const auto want = testing::capacity_oracle(load.per_class, frames, load.capacity, load.max_packet_size);
        for (std::size_t j = 0; j < n; ++j) {
            ++terms;
            satisfied += want[j].satisfied;
            const bool same = testing::to_exact(got[j].lhs) == want[j].lhs && testing::to_exact(got[j].rhs) == want[j].rhs
                              && testing::to_exact(got[j].slack) == want[j].rhs - want[j].lhs
                              && got[j].satisfied == want[j].satisfied;
            mismatches += !same;
        }
    }
    std::ostringstream d;
    d << instances << " loads, " << terms << " terms (" << satisfied << " satisfied), " << mismatches << " mismatches";
    return {instances >= 1000 && mismatches == 0 && satisfied > 0 && satisfied < terms, d.str()};
}

Outcome scheduler_oracle()
{
    int instances = 0;
    int mismatches = 0;
    std::size_t records = 0;
    std::uint64_t first_bad = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed, ++instances) {
        const auto s = testing::random_micro_scenario(seed);
        std::vector<TraceRecord> trace;
        RunOptions o;
        o.on_trace = [&](const TraceRecord& r) { trace.push_back(r); };
        const auto m = run(s, o);
        auto ref = testing::brute_force_run(s);
        testing::canonical_order(trace);
        testing::canonical_order(ref.trace);
        std::int64_t overruns = 0;
        for (const auto& p : m.ports)
            overruns += p.frame_overruns;
        records += trace.size();
        if (trace != ref.trace || overruns != ref.frame_overruns) {
            if (!mismatches)
                first_bad = seed;
            ++mismatches;
        }
    }
    std::ostringstream d;
    d << instances << " instances, " << records << " trace records, " << mismatches << " mismatches";
    if (mismatches)
        d << " (first seed " << first_bad << ")";
    return {mismatches == 0, d.str()};
}

Outcome determinism(const fs::path& work)
{
    const auto scenario = (kScenarios / "table1.scenario").string();
    const auto a = shell("run \"" + scenario + "\" --seed 77 --csv --out \"" + (work / "a").string() + "\"", work);
    const auto b = shell("run \"" + scenario + "\" --seed 77 --csv --out \"" + (work / "b").string() + "\"", work);
    const auto c = shell("run \"" + scenario + "\" --seed 78 --csv --out \"" + (work / "c").string() + "\"", work);
    const auto csv_a = slurp(work / "a" / "packets.csv");
    const auto csv_b = slurp(work / "b" / "packets.csv");
    const auto csv_c = slurp(work / "c" / "packets.csv");
    std::ostringstream d;
    d << "exit " << a.code << "/" << b.code << ", " << csv_a.size() << " bytes, identical: " << (csv_a == csv_b ? "yes" : "no")
      << ", other seed differs: " << (csv_a != csv_c ? "yes" : "no");
    return {a.code == 0 && b.code == 0 && !csv_a.empty() && csv_a == csv_b && csv_a != csv_c, d.str()};
}

Outcome negative_control(const fs::path& work)
{
    const auto path = kScenarios / "overload.scenario";
    const auto r = shell("run \"" + path.string() + "\" --bypass-admission --summary", work);
    auto s = load_scenario(path);
    s.options.bypass_admission = true;
    const auto m = run(s);
    const auto report = verify_bounds(m, m.classes);
    std::ostringstream d;
    d << "exit " << r.code << ", " << report.frame_overruns << " frame overruns, " << report.violations.size()
      << " bound violations";
    return {r.code == 2 && (report.frame_overruns > 0 || !report.violations.empty()), d.str()};
}

} // namespace

int main()
{
    const auto work = fs::temp_directory_path() / ("sgmh-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);

    std::cout << "running randomized admitted sweep...\n" << std::flush;
    const auto sweep = admitted_sweep();

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 analytic delay envelope (hops=5)", [&] { return table1_envelope(work); }},
        {"AC2 buffer budgets (200 Mb/s, 70/20/10, y=2)", [&] { return table2_buffers(work); }},
        {"AC3 delay-bound soundness over admitted sweep", [&] { return delay_soundness(sweep); }},
        {"AC4 eligibility wait in (0, f]", [&] { return eligibility_wait(sweep); }},
        {"AC5 buffer sufficiency", [&] { return buffer_sufficiency(sweep); }},
        {"AC6 capacity constraint vs exact oracle", [] { return admission_oracle(); }},
        {"AC7 engine trace vs brute-force simulator", [] { return scheduler_oracle(); }},
        {"AC8 byte-identical CSV for equal seeds", [&] { return determinism(work); }},
        {"AC9 over-admitted control exits 2", [&] { return negative_control(work); }},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
    }
    fs::remove_all(work);
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

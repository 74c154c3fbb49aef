#include "commands.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "sgmh/sgmh.hpp"

namespace sgmh::cli {
namespace {

std::string fixed3(double v)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

std::string path_string(const std::vector<LinkId>& path)
{
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i)
        s += (i ? "," : "") + std::to_string(path[i]);
    return s;
}

struct RunOutcome {
    bool clean = false;
    std::string error;
};

RunOutcome run_one(const Scenario& scenario, const RunArgs& args, std::optional<std::uint64_t> seed,
                   const std::optional<std::filesystem::path>& dir, std::ostream* out)
{
    RunOptions options;
    options.seed = seed;
    const auto metrics = run(scenario, options);
    const auto report = verify_bounds(metrics, metrics.classes);

    const bool want_csv = args.csv || (!args.csv && !args.summary && dir);
    const bool want_summary = args.summary || !args.csv;
    if (dir) {
        std::filesystem::create_directories(*dir);
        if (want_csv)
            write_csv(metrics, *dir / "packets.csv");
        if (want_summary)
            write_summary(metrics, *dir / "summary.txt");
    } else if (out) {
        if (want_csv)
            write_csv(metrics, *out);
        if (want_summary)
            write_summary(metrics, *out);
    }
    return {report.clean(), {}};
}

} // namespace

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err)
{
    try {
        auto scenario = load_scenario(args.scenario);
        if (args.bypass_admission)
            scenario.options.bypass_admission = true;

        if (args.sweep == 0) {
            const auto outcome = run_one(scenario, args, args.seed, args.out_dir, &out);
            return outcome.clean ? kExitOk : kExitBoundsFailed;
        }

        if (!args.out_dir) {
            err << "error: --sweep requires --out\n";
            return kExitError;
        }
        const std::uint64_t base = args.seed.value_or(scenario.seed);
        std::vector<RunOutcome> outcomes(args.sweep);
        std::atomic<unsigned> next{0};
        const unsigned workers = std::max(1u, std::min(args.sweep, std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (unsigned i = next++; i < args.sweep; i = next++) {
                    const auto seed = base + i;
                    try {
                        outcomes[i] = run_one(scenario, args, seed, *args.out_dir / ("seed-" + std::to_string(seed)),
                                              nullptr);
                    } catch (const std::exception& e) {
                        outcomes[i] = {false, e.what()};
                    }
                }
            });
        }
        for (auto& t : pool)
            t.join();

        int code = kExitOk;
        for (unsigned i = 0; i < args.sweep; ++i) {
            const auto& o = outcomes[i];
            out << "seed " << base + i << ": " << (o.error.empty() ? (o.clean ? "OK" : "FAILED") : "ERROR") << '\n';
            if (!o.error.empty()) {
                err << "seed " << base + i << ": " << o.error << '\n';
                code = kExitError;
            } else if (!o.clean && code == kExitOk) {
                code = kExitBoundsFailed;
            }
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int admit_command(const std::filesystem::path& path, std::ostream& out, std::ostream& err)
{
    try {
        const auto scenario = load_scenario(path);
        const auto report = run_admission(scenario);
        std::map<LinkId, BitsPerSec> capacities;
        for (const auto& l : scenario.topology.links)
            capacities[l.id] = l.capacity;

        out << "connections (admitted in file order)\n";
        for (std::size_t i = 0; i < scenario.connections.size(); ++i) {
            const auto& c = scenario.connections[i];
            const auto& d = report.decisions[i].second;
            out << "  " << c.id << "  TYPE-" << c.class_id << "  rate_bps " << c.rate << "  path [" << path_string(c.path)
                << "]  rate_check " << (check_rate(c.connection(), capacities) ? "ok" : "FAIL") << "  -> "
                << d.describe() << '\n';
        }
        out << '\n';

        // Per-link view of the full offered load, so a rejected set shows
        // which term fails.
        std::vector<Connection> all;
        for (const auto& c : scenario.connections)
            all.push_back(c.connection());
        const auto links = scenario.link_specs();
        const auto offered = compute_loads(all, links, scenario.classes.size(), scenario.max_packet_size);
        out << "per-link checks on the offered load (bits/s)\n";
        for (const auto& [id, load] : offered) {
            BitsPerSec total = 0;
            for (auto d : load.per_class)
                total += d;
            out << "link " << id << "  capacity " << load.capacity << "  aggregate " << total << "  "
                << (check_aggregate(load) ? "ok" : "FAIL") << '\n';
            out << "  " << std::left << std::setw(4) << "j" << std::right << std::setw(20) << "lhs" << std::setw(20)
                << "rhs" << std::setw(20) << "slack" << std::setw(9) << "verdict" << '\n';
            for (const auto& t : check_capacity_constraint(load, scenario.classes)) {
                out << "  " << std::left << std::setw(4) << t.j << std::right << std::setw(20)
                    << fixed3(t.lhs.to_double()) << std::setw(20) << fixed3(t.rhs.to_double()) << std::setw(20)
                    << fixed3(t.slack.to_double()) << std::setw(9) << (t.satisfied ? "ok" : "FAIL") << '\n';
            }
        }
        out << '\n' << "verdict: " << (report.all_admitted ? "admitted" : "rejected") << '\n';
        return report.all_admitted ? kExitOk : kExitRejected;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int bounds_command(const std::filesystem::path& path, int hops, std::ostream& out, std::ostream& err)
{
    try {
        if (hops < 0) {
            err << "error: --hops must be non-negative\n";
            return kExitError;
        }
        const auto scenario = load_scenario(path);
        out << "queuing delay envelope over " << hops << " hops\n";
        out << std::left << std::setw(8) << "class" << std::right << std::setw(10) << "frame_ms" << std::setw(14)
            << "min_delay_ms" << std::setw(14) << "max_delay_ms" << '\n';
        for (const auto& c : scenario.classes) {
            const auto env = delay_bounds(c, hops);
            out << std::left << std::setw(8) << ("TYPE-" + std::to_string(c.id)) << std::right << std::setw(10)
                << format_ms(c.frame) << std::setw(14) << format_ms(env.min) << std::setw(14) << format_ms(env.max)
                << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int buffers_command(const std::filesystem::path& path, std::ostream& out, std::ostream& err)
{
    try {
        const auto scenario = load_scenario(path);
        const auto table = buffer_budgets(scenario);
        out << "buffer budgets b = y * D * T\n";
        out << std::left << std::setw(6) << "link" << std::setw(8) << "class" << std::right << std::setw(10)
            << "frame_ms" << std::setw(14) << "load_bps" << std::setw(4) << "y" << std::setw(14) << "budget_bits"
            << std::setw(13) << "budget_kbit" << '\n';
        for (const auto& [key, b] : table.entries()) {
            std::ostringstream kbit;
            kbit << b.budget_bits / 1000;
            if (b.budget_bits % 1000 != 0)
                kbit << '.' << std::setw(3) << std::setfill('0') << b.budget_bits % 1000;
            out << std::left << std::setw(6) << b.link << std::setw(8) << ("TYPE-" + std::to_string(b.class_id))
                << std::right << std::setw(10) << format_ms(b.frame) << std::setw(14) << b.load << std::setw(4) << b.y
                << std::setw(14) << b.budget_bits << std::setw(13) << kbit.str() << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Stop-and-go multihop scheduling simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* run_cmd = app.add_subcommand("run", "Check admission, simulate, emit metrics");
    run_cmd->add_option("scenario", run_args.scenario, "Scenario file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
    auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_flag("--csv", run_args.csv, "Emit per-hop packet CSV");
    run_cmd->add_flag("--summary", run_args.summary, "Emit the plain-text summary");
    run_cmd->add_flag("--bypass-admission,--bypass_admission", run_args.bypass_admission,
                      "Simulate every connection, admitted or not");
    run_cmd->add_option("--sweep", run_args.sweep, "Run N consecutive seeds in parallel (needs --out)");

    std::filesystem::path scenario_path;
    auto* admit_cmd = app.add_subcommand("admit", "Print admission checks");
    admit_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

    int hops = 5;
    auto* bounds_cmd = app.add_subcommand("bounds", "Print the analytic queuing-delay envelope per class");
    bounds_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    bounds_cmd->add_option("--hops", hops, "Hop count")->capture_default_str();

    auto* buffers_cmd = app.add_subcommand("buffers", "Print per-link, per-class buffer budgets");
    buffers_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    if (*run_cmd) {
        if (*seed_opt)
            run_args.seed = seed;
        if (*out_opt)
            run_args.out_dir = out_dir;
        return run_command(run_args, std::cout, std::cerr);
    }
    if (*admit_cmd)
        return admit_command(scenario_path, std::cout, std::cerr);
    if (*bounds_cmd)
        return bounds_command(scenario_path, hops, std::cout, std::cerr);
    if (*buffers_cmd)
        return buffers_command(scenario_path, std::cout, std::cerr);
    return kExitError;
}

} // namespace sgmh::cli

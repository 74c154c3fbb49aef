#include "sgmh/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sgmh {

PacketCounts count_packets(std::span<const PacketRecord> packets)
{
    PacketCounts c;
    for (const auto& p : packets) {
        ++c.generated;
        if (p.delivered())
            ++c.delivered;
        else if (p.dropped)
            ++c.dropped;
        else
            ++c.in_flight;
        if (p.late)
            ++c.late;
    }
    return c;
}

DelayEnvelope delay_bounds(const TrafficClass& cls, int hops)
{
    if (hops < 0)
        throw std::invalid_argument("hop count must be non-negative");
    return {hops * cls.frame, 2 * hops * cls.frame};
}

BoundsReport verify_bounds(const Metrics& metrics, std::span<const TrafficClass> classes)
{
    BoundsReport report;
    struct Acc {
        ClassDelayStats stats;
        long double hop_sum = 0;
        long double path_sum = 0;
    };
    std::vector<Acc> acc(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        acc[i].stats.class_id = classes[i].id;
        acc[i].stats.frame = classes[i].frame;
    }

    for (const auto& p : metrics.packets) {
        if (p.class_id < 1 || static_cast<std::size_t>(p.class_id) > classes.size())
            throw ConfigError("packet " + std::to_string(p.packet_id) + ": unknown class " + std::to_string(p.class_id));
        auto& a = acc[static_cast<std::size_t>(p.class_id - 1)];
        const TimeNs f = classes[static_cast<std::size_t>(p.class_id - 1)].frame;

        TimeNs path_queuing = 0;
        for (const auto& h : p.hops) {
            if (h.eligible != kNever) {
                const auto wait = h.eligible - h.arrival;
                if (wait <= 0 || wait > f)
                    ++a.stats.wait_violations;
            }
            if (!h.completed())
                continue;
            const auto q = h.queuing();
            if (q > 2 * f)
                report.violations.push_back({p.packet_id, p.class_id, h.hop, q, 2 * f});
            if (a.stats.hop_samples == 0 || q < a.stats.hop_min)
                a.stats.hop_min = q;
            a.stats.hop_max = std::max(a.stats.hop_max, q);
            a.hop_sum += q;
            ++a.stats.hop_samples;
            path_queuing += q;
        }
        if (!p.delivered())
            continue;

        const auto hops = static_cast<int>(p.hops.size());
        const auto bound = delay_bounds(classes[static_cast<std::size_t>(p.class_id - 1)], hops).max;
        if (path_queuing > bound)
            report.violations.push_back({p.packet_id, p.class_id, -1, path_queuing, bound});
        if (a.stats.delivered == 0 || path_queuing < a.stats.path_min)
            a.stats.path_min = path_queuing;
        a.stats.path_max = std::max(a.stats.path_max, path_queuing);
        a.stats.max_hops = std::max(a.stats.max_hops, hops);
        a.path_sum += path_queuing;
        ++a.stats.delivered;
    }

    for (auto& a : acc) {
        if (a.stats.hop_samples > 0)
            a.stats.hop_mean = static_cast<double>(a.hop_sum / a.stats.hop_samples);
        if (a.stats.delivered > 0)
            a.stats.path_mean = static_cast<double>(a.path_sum / a.stats.delivered);
        report.wait_violations += a.stats.wait_violations;
        report.per_class.push_back(a.stats);
    }
    for (const auto& port : metrics.ports)
        report.frame_overruns += port.frame_overruns;
    for (const auto& b : metrics.buffers)
        report.overflow_drops += b.overflows;
    return report;
}

void write_csv(const Metrics& metrics, std::ostream& out)
{
    out << kCsvHeader << '\n';
    for (const auto& p : metrics.packets) {
        for (const auto& h : p.hops) {
            out << p.packet_id << ',' << p.class_id << ',' << h.hop << ',' << h.arrival << ',' << h.eligible << ','
                << h.departure << ',' << p.e2e << ',' << (p.late ? 1 : 0) << ',' << (p.dropped ? 1 : 0) << '\n';
        }
    }
}

void write_csv(const Metrics& metrics, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot open for writing");
    write_csv(metrics, out);
    out.flush();
    if (!out)
        throw std::runtime_error(path.string() + ": write failed");
}

namespace {

std::vector<std::int64_t> split_ints(const std::string& line, std::size_t line_no)
{
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos)
            comma = line.size();
        const auto field = line.substr(pos, comma - pos);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(field, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (field.empty() || used != field.size())
            throw ParseError("csv line " + std::to_string(line_no) + ": bad field '" + field + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

} // namespace

std::vector<PacketRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ParseError("csv line 1: expected header '" + std::string(kCsvHeader) + "'");

    std::vector<PacketRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split_ints(line, line_no);
        if (f.size() != 9)
            throw ParseError("csv line " + std::to_string(line_no) + ": expected 9 fields");
        const HopSample hop{static_cast<int>(f[2]), f[3], f[4], f[5]};
        if (out.empty() || out.back().packet_id != f[0]) {
            PacketRecord r;
            r.packet_id = f[0];
            r.class_id = static_cast<ClassId>(f[1]);
            r.e2e = f[6];
            r.late = f[7] != 0;
            r.dropped = f[8] != 0;
            out.push_back(std::move(r));
        } else {
            const auto& r = out.back();
            if (r.class_id != f[1] || r.e2e != f[6] || r.late != (f[7] != 0) || r.dropped != (f[8] != 0))
                throw ParseError("csv line " + std::to_string(line_no) + ": per-packet fields differ between hops");
        }
        if (hop.hop != static_cast<int>(out.back().hops.size()))
            throw ParseError("csv line " + std::to_string(line_no) + ": hops out of order");
        out.back().hops.push_back(hop);
    }
    return out;
}

std::string format_ms(TimeNs t)
{
    if (t == kNever)
        return "-";
    const bool neg = t < 0;
    const auto abs_ns = neg ? -t : t;
    const auto micros = (abs_ns + 500) / 1000;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%03lld", neg ? "-" : "", static_cast<long long>(micros / 1000),
                  static_cast<long long>(micros % 1000));
    return buf;
}

namespace {

std::string format_mean_ms(double ns)
{
    return format_ms(static_cast<TimeNs>(ns + 0.5));
}

} // namespace

void write_summary(const Metrics& m, std::ostream& out)
{
    const auto report = verify_bounds(m, m.classes);
    const auto counts = count_packets(m.packets);

    out << "seed: " << m.seed << "  horizon_ms: " << format_ms(m.horizon) << "  warm_up_ms: " << format_ms(m.warm_up)
        << '\n';
    out << "admission: " << (m.admitted ? "admitted" : "rejected");
    if (!m.rejected.empty()) {
        out << " (connections:";
        for (auto id : m.rejected)
            out << ' ' << id;
        out << ')';
    }
    if (m.admission_bypassed)
        out << " [bypassed]";
    out << '\n';
    out << "packets: generated " << counts.generated << "  delivered " << counts.delivered << "  dropped "
        << counts.dropped << "  in_flight " << counts.in_flight << "  late " << counts.late << "\n\n";

    out << "per-hop queuing delay (ms)\n";
    out << std::left << std::setw(8) << "class" << std::right << std::setw(10) << "frame" << std::setw(10)
        << "samples" << std::setw(10) << "min" << std::setw(10) << "mean" << std::setw(10) << "max" << std::setw(10)
        << "bound" << '\n';
    for (const auto& c : report.per_class) {
        out << std::left << std::setw(8) << ("TYPE-" + std::to_string(c.class_id)) << std::right << std::setw(10)
            << format_ms(c.frame) << std::setw(10) << c.hop_samples << std::setw(10)
            << (c.hop_samples ? format_ms(c.hop_min) : "-") << std::setw(10)
            << (c.hop_samples ? format_mean_ms(c.hop_mean) : "-") << std::setw(10)
            << (c.hop_samples ? format_ms(c.hop_max) : "-") << std::setw(10) << format_ms(2 * c.frame) << '\n';
    }
    out << '\n';

    out << "end-to-end queuing delay (ms), envelope at the longest path\n";
    out << std::left << std::setw(8) << "class" << std::right << std::setw(10) << "delivered" << std::setw(6)
        << "hops" << std::setw(10) << "min" << std::setw(10) << "mean" << std::setw(10) << "max" << std::setw(12)
        << "env_min" << std::setw(12) << "env_max" << '\n';
    for (std::size_t i = 0; i < report.per_class.size(); ++i) {
        const auto& c = report.per_class[i];
        const auto env = delay_bounds(m.classes[i], c.max_hops);
        out << std::left << std::setw(8) << ("TYPE-" + std::to_string(c.class_id)) << std::right << std::setw(10)
            << c.delivered << std::setw(6) << c.max_hops << std::setw(10)
            << (c.delivered ? format_ms(c.path_min) : "-") << std::setw(10)
            << (c.delivered ? format_mean_ms(c.path_mean) : "-") << std::setw(10)
            << (c.delivered ? format_ms(c.path_max) : "-") << std::setw(12) << format_ms(env.min) << std::setw(12)
            << format_ms(env.max) << '\n';
    }
    out << '\n';

    out << "buffers (bits; kbit column in the y*Mb/s*ms unit)\n";
    out << std::left << std::setw(6) << "link" << std::setw(8) << "class" << std::right << std::setw(4) << "y"
        << std::setw(14) << "load_bps" << std::setw(10) << "frame_ms" << std::setw(14) << "budget_bits"
        << std::setw(12) << "budget_kbit" << std::setw(12) << "peak_bits" << std::setw(11) << "overflows" << '\n';
    for (const auto& b : m.buffers) {
        std::ostringstream kbit;
        kbit << b.budget / 1000;
        if (b.budget % 1000 != 0)
            kbit << '.' << std::setw(3) << std::setfill('0') << b.budget % 1000;
        out << std::left << std::setw(6) << b.link << std::setw(8) << ("TYPE-" + std::to_string(b.class_id))
            << std::right << std::setw(4) << b.y << std::setw(14) << b.load << std::setw(10) << format_ms(b.frame)
            << std::setw(14) << b.budget << std::setw(12) << kbit.str() << std::setw(12) << b.peak << std::setw(11)
            << b.overflows << '\n';
    }
    out << '\n';

    out << "ports\n";
    out << std::left << std::setw(6) << "link" << std::right << std::setw(16) << "frame_overruns" << std::setw(13)
        << "utilization" << '\n';
    for (const auto& p : m.ports) {
        std::ostringstream util;
        util << std::fixed << std::setprecision(4) << p.utilization;
        out << std::left << std::setw(6) << p.link << std::right << std::setw(16) << p.frame_overruns << std::setw(13)
            << util.str() << '\n';
    }
    out << '\n';

    out << "bound check: " << (report.clean() ? "OK" : "FAILED") << "  violations " << report.violations.size()
        << "  frame_overruns " << report.frame_overruns << "  overflow_drops " << report.overflow_drops
        << "  wait_violations " << report.wait_violations << '\n';
    const std::size_t shown = std::min<std::size_t>(report.violations.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& v = report.violations[i];
        out << "  packet " << v.packet_id << " TYPE-" << v.class_id << ' '
            << (v.hop < 0 ? std::string("path") : "hop " + std::to_string(v.hop)) << ": " << format_ms(v.observed)
            << " ms > " << format_ms(v.bound) << " ms\n";
    }
    if (report.violations.size() > shown)
        out << "  ... " << report.violations.size() - shown << " more\n";
}

void write_summary(const Metrics& metrics, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot open for writing");
    write_summary(metrics, out);
    out.flush();
    if (!out)
        throw std::runtime_error(path.string() + ": write failed");
}

} // namespace sgmh

#include "sgmh/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace sgmh {
namespace {

// Bounds that keep all admission and buffer arithmetic inside 128 bits.
constexpr BitsPerSec kMaxRate = 1'000'000'000'000'000;   // 1 Pb/s
constexpr TimeNs kMaxFrame = 10'000'000'000'000;         // ~2.8 h
constexpr Bits kMaxPacketSize = 1'000'000'000'000;

std::string where(const YAML::Node& node)
{
    const auto mark = node.Mark();
    if (mark.is_null())
        return "";
    return " (line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ")";
}

/// Field-path aware accessors over one YAML document.
class Reader {
public:
    explicit Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& what) const
    {
        throw ParseError(origin_ + ": " + path + ": " + what + where(node));
    }

    template <class T>
    T as(const YAML::Node& node, const std::string& path, const char* type) const
    {
        if (!node.IsScalar())
            fail(node, path, std::string("expected ") + type);
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, path, std::string("expected ") + type + ", got '" + node.Scalar() + "'");
        }
    }

    std::int64_t integer(const YAML::Node& node, const std::string& path) const
    {
        return as<std::int64_t>(node, path, "an integer");
    }

    double number(const YAML::Node& node, const std::string& path) const
    {
        return as<double>(node, path, "a number");
    }

    bool boolean(const YAML::Node& node, const std::string& path) const { return as<bool>(node, path, "a boolean"); }

    std::string string(const YAML::Node& node, const std::string& path) const
    {
        return as<std::string>(node, path, "a string");
    }

    YAML::Node required(const YAML::Node& map, const std::string& key, const std::string& path) const
    {
        auto child = map[key];
        if (!child || child.IsNull())
            fail(map, join(path, key), "missing required field");
        return child;
    }

    void sequence(const YAML::Node& node, const std::string& path) const
    {
        if (!node.IsSequence())
            fail(node, path, "expected a list");
    }

    void mapping(const YAML::Node& node, const std::string& path) const
    {
        if (!node.IsMap())
            fail(node, path, "expected a mapping");
    }

    void only_keys(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> keys) const
    {
        for (const auto& kv : map) {
            const auto key = kv.first.Scalar();
            bool known = false;
            for (const char* k : keys)
                known = known || key == k;
            if (!known)
                fail(kv.first, join(path, key), "unknown field");
        }
    }

    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

    static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

private:
    std::string origin_;
};

TimeNs ms_to_ns(const Reader& r, const YAML::Node& node, const std::string& path)
{
    const double ms = r.number(node, path);
    const double ns = ms * 1e6;
    if (!std::isfinite(ns) || std::fabs(ns) > 9e18)
        r.fail(node, path, "out of range");
    const double rounded = std::round(ns);
    if (std::fabs(ns - rounded) > 1e-3)
        r.fail(node, path, "must be a whole number of nanoseconds");
    return static_cast<TimeNs>(rounded);
}

TrafficClass parse_class(const Reader& r, const YAML::Node& n, const std::string& path)
{
    r.mapping(n, path);
    r.only_keys(n, path, {"id", "frame_ms", "frame_ns", "bandwidth_fraction"});
    TrafficClass c;
    c.id = static_cast<ClassId>(r.integer(r.required(n, "id", path), Reader::join(path, "id")));
    if (n["frame_ns"])
        c.frame = r.integer(n["frame_ns"], Reader::join(path, "frame_ns"));
    else
        c.frame = ms_to_ns(r, r.required(n, "frame_ms", path), Reader::join(path, "frame_ms"));
    if (n["bandwidth_fraction"])
        c.bandwidth_fraction = r.number(n["bandwidth_fraction"], Reader::join(path, "bandwidth_fraction"));
    return c;
}

Link parse_link(const Reader& r, const YAML::Node& n, const std::string& path)
{
    r.mapping(n, path);
    r.only_keys(n, path, {"id", "src", "dst", "capacity_bps", "latency_ns"});
    Link l;
    l.id = r.integer(r.required(n, "id", path), Reader::join(path, "id"));
    l.src = r.integer(r.required(n, "src", path), Reader::join(path, "src"));
    l.dst = r.integer(r.required(n, "dst", path), Reader::join(path, "dst"));
    l.capacity = r.integer(r.required(n, "capacity_bps", path), Reader::join(path, "capacity_bps"));
    if (n["latency_ns"])
        l.latency = r.integer(n["latency_ns"], Reader::join(path, "latency_ns"));
    return l;
}

struct RawConnection {
    ConnectionSpec spec;
    bool rate_given = false;
};

RawConnection parse_connection(const Reader& r, const YAML::Node& n, const std::string& path)
{
    r.mapping(n, path);
    r.only_keys(n, path,
                {"id", "class", "rate_bps", "path", "packet_size_bits", "deadline_ns", "start_ns", "stop_ns",
                 "offset_ns", "max_packets"});
    RawConnection raw;
    auto& c = raw.spec;
    c.id = r.integer(r.required(n, "id", path), Reader::join(path, "id"));
    c.class_id = static_cast<ClassId>(r.integer(r.required(n, "class", path), Reader::join(path, "class")));
    if (n["rate_bps"]) {
        c.rate = r.integer(n["rate_bps"], Reader::join(path, "rate_bps"));
        raw.rate_given = true;
    }
    auto p = r.required(n, "path", path);
    r.sequence(p, Reader::join(path, "path"));
    for (std::size_t i = 0; i < p.size(); ++i)
        c.path.push_back(r.integer(p[i], Reader::index(Reader::join(path, "path"), i)));
    c.generator.packet_size =
        r.integer(r.required(n, "packet_size_bits", path), Reader::join(path, "packet_size_bits"));
    if (n["deadline_ns"])
        c.deadline = r.integer(n["deadline_ns"], Reader::join(path, "deadline_ns"));
    if (n["start_ns"])
        c.generator.start = r.integer(n["start_ns"], Reader::join(path, "start_ns"));
    if (n["stop_ns"])
        c.generator.stop = r.integer(n["stop_ns"], Reader::join(path, "stop_ns"));
    if (auto off = n["offset_ns"]) {
        if (off.IsScalar() && off.Scalar() == "random")
            c.generator.random_offset = true;
        else
            c.generator.offset = r.integer(off, Reader::join(path, "offset_ns"));
    }
    if (n["max_packets"])
        c.generator.max_packets = r.integer(n["max_packets"], Reader::join(path, "max_packets"));
    return raw;
}

Scenario parse_document(const Reader& r, const YAML::Node& root, std::vector<std::string>& issues)
{
    if (!root || root.IsNull())
        r.fail(root, "<root>", "empty scenario");
    r.mapping(root, "<root>");
    r.only_keys(root, "",
                {"schema_version", "name", "seed", "max_packet_size_bits", "horizon_ns", "warm_up_ns", "buffer_y",
                 "buffer_overrides", "classes", "nodes", "links", "phases", "random_phases", "connections",
                 "options"});

    Scenario s;
    s.schema_version = static_cast<int>(r.integer(r.required(root, "schema_version", ""), "schema_version"));
    if (s.schema_version != kScenarioSchemaVersion)
        r.fail(root["schema_version"], "schema_version",
               "unsupported schema version " + std::to_string(s.schema_version) + " (expected "
                   + std::to_string(kScenarioSchemaVersion) + ")");
    if (root["name"])
        s.name = r.string(root["name"], "name");
    if (root["seed"])
        s.seed = r.as<std::uint64_t>(root["seed"], "seed", "an unsigned integer");
    s.max_packet_size = r.integer(r.required(root, "max_packet_size_bits", ""), "max_packet_size_bits");
    s.horizon = r.integer(r.required(root, "horizon_ns", ""), "horizon_ns");
    if (root["warm_up_ns"])
        s.warm_up = r.integer(root["warm_up_ns"], "warm_up_ns");
    if (root["buffer_y"])
        s.buffer_y = r.integer(root["buffer_y"], "buffer_y");
    if (root["random_phases"])
        s.random_phases = r.boolean(root["random_phases"], "random_phases");

    auto classes = r.required(root, "classes", "");
    r.sequence(classes, "classes");
    for (std::size_t i = 0; i < classes.size(); ++i)
        s.classes.push_back(parse_class(r, classes[i], Reader::index("classes", i)));

    auto nodes = r.required(root, "nodes", "");
    r.sequence(nodes, "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        s.topology.nodes.push_back(r.integer(nodes[i], Reader::index("nodes", i)));

    auto links = r.required(root, "links", "");
    r.sequence(links, "links");
    for (std::size_t i = 0; i < links.size(); ++i)
        s.topology.links.push_back(parse_link(r, links[i], Reader::index("links", i)));

    if (auto phases = root["phases"]) {
        r.sequence(phases, "phases");
        for (std::size_t i = 0; i < phases.size(); ++i) {
            const auto path = Reader::index("phases", i);
            const auto& n = phases[i];
            r.mapping(n, path);
            r.only_keys(n, path, {"link", "class", "phase_ns"});
            PhaseSpec p;
            p.link = r.integer(r.required(n, "link", path), Reader::join(path, "link"));
            p.class_id = static_cast<ClassId>(r.integer(r.required(n, "class", path), Reader::join(path, "class")));
            p.phase = r.integer(r.required(n, "phase_ns", path), Reader::join(path, "phase_ns"));
            s.phases.push_back(p);
        }
    }

    if (auto overrides = root["buffer_overrides"]) {
        r.sequence(overrides, "buffer_overrides");
        for (std::size_t i = 0; i < overrides.size(); ++i) {
            const auto path = Reader::index("buffer_overrides", i);
            const auto& n = overrides[i];
            r.mapping(n, path);
            r.only_keys(n, path, {"link", "class", "y"});
            BufferOverride o;
            o.link = r.integer(r.required(n, "link", path), Reader::join(path, "link"));
            o.class_id = static_cast<ClassId>(r.integer(r.required(n, "class", path), Reader::join(path, "class")));
            o.y = r.integer(r.required(n, "y", path), Reader::join(path, "y"));
            s.buffer_overrides.push_back(o);
        }
    }

    std::vector<bool> rate_given;
    if (auto conns = root["connections"]) {
        r.sequence(conns, "connections");
        for (std::size_t i = 0; i < conns.size(); ++i) {
            auto raw = parse_connection(r, conns[i], Reader::index("connections", i));
            s.connections.push_back(std::move(raw.spec));
            rate_given.push_back(raw.rate_given);
        }
    }

    if (auto opts = root["options"]) {
        r.mapping(opts, "options");
        r.only_keys(opts, "options", {"drop_late", "bypass_admission"});
        if (opts["drop_late"])
            s.options.drop_late = r.boolean(opts["drop_late"], "options.drop_late");
        if (opts["bypass_admission"])
            s.options.bypass_admission = r.boolean(opts["bypass_admission"], "options.bypass_admission");
    }

    // A connection without rate_bps takes its class's share of the
    // narrowest link on its path.
    for (std::size_t i = 0; i < s.connections.size(); ++i) {
        auto& c = s.connections[i];
        if (rate_given[i])
            continue;
        const auto path = Reader::index("connections", i) + ".rate_bps";
        const TrafficClass* cls = nullptr;
        for (const auto& k : s.classes)
            if (k.id == c.class_id)
                cls = &k;
        if (!cls || cls->bandwidth_fraction <= 0.0) {
            issues.push_back(path + ": required when the class has no bandwidth_fraction");
            continue;
        }
        std::optional<BitsPerSec> narrowest;
        for (auto l : c.path)
            if (const auto* link = s.topology.find_link(l))
                narrowest = narrowest ? std::min(*narrowest, link->capacity) : link->capacity;
        if (!narrowest) {
            issues.push_back(path + ": cannot derive a rate without a valid path");
            continue;
        }
        c.rate = static_cast<BitsPerSec>(std::llround(cls->bandwidth_fraction * static_cast<double>(*narrowest)));
    }
    return s;
}

} // namespace

const Link* Topology::find_link(LinkId id) const
{
    for (const auto& l : links)
        if (l.id == id)
            return &l;
    return nullptr;
}

const TrafficClass& Scenario::traffic_class(ClassId id) const
{
    if (id < 1 || static_cast<std::size_t>(id) > classes.size())
        throw ConfigError("unknown class " + std::to_string(id));
    return classes[static_cast<std::size_t>(id - 1)];
}

std::vector<LinkSpec> Scenario::link_specs() const
{
    std::vector<LinkSpec> out;
    out.reserve(topology.links.size());
    for (const auto& l : topology.links)
        out.push_back({l.id, l.capacity});
    return out;
}

void validate(const Scenario& s)
{
    std::vector<std::string> issues;
    auto issue = [&](const std::string& path, const std::string& what) { issues.push_back(path + ": " + what); };

    if (s.schema_version != kScenarioSchemaVersion)
        issue("schema_version", "unsupported schema version " + std::to_string(s.schema_version));

    // classes
    if (s.classes.empty())
        issue("classes", "at least one class is required");
    double fraction_sum = 0.0;
    for (std::size_t k = 0; k < s.classes.size(); ++k) {
        const auto& c = s.classes[k];
        const auto path = "classes[" + std::to_string(k) + "]";
        if (c.id != static_cast<ClassId>(k + 1))
            issue(path + ".id", "class ids must be 1..N in order; expected " + std::to_string(k + 1) + ", got "
                                    + std::to_string(c.id));
        if (c.frame <= 0 || c.frame > kMaxFrame)
            issue(path + ".frame", "frame duration must be in (0, " + std::to_string(kMaxFrame) + "] ns");
        else if (k > 0 && c.frame <= s.classes[k - 1].frame)
            issue(path + ".frame", "frame durations must strictly increase with class id");
        if (!(c.bandwidth_fraction >= 0.0 && c.bandwidth_fraction <= 1.0))
            issue(path + ".bandwidth_fraction", "must be in [0, 1]");
        else
            fraction_sum += c.bandwidth_fraction;
    }
    if (fraction_sum > 1.0 + 1e-9)
        issue("classes", "bandwidth fractions sum to more than 1");
    auto class_ok = [&](ClassId id) { return id >= 1 && static_cast<std::size_t>(id) <= s.classes.size(); };

    if (s.max_packet_size <= 0 || s.max_packet_size > kMaxPacketSize)
        issue("max_packet_size_bits", "must be in (0, " + std::to_string(kMaxPacketSize) + "]");
    if (s.horizon <= 0)
        issue("horizon_ns", "must be positive");
    if (s.warm_up < 0 || (s.horizon > 0 && s.warm_up >= s.horizon))
        issue("warm_up_ns", "must be in [0, horizon_ns)");
    if (s.buffer_y < 1)
        issue("buffer_y", "must be >= 1");

    // topology
    std::set<NodeId> nodes;
    for (std::size_t i = 0; i < s.topology.nodes.size(); ++i)
        if (!nodes.insert(s.topology.nodes[i]).second)
            issue("nodes[" + std::to_string(i) + "]", "duplicate node id " + std::to_string(s.topology.nodes[i]));
    std::set<LinkId> link_ids;
    for (std::size_t i = 0; i < s.topology.links.size(); ++i) {
        const auto& l = s.topology.links[i];
        const auto path = "links[" + std::to_string(i) + "]";
        if (!link_ids.insert(l.id).second)
            issue(path + ".id", "duplicate link id " + std::to_string(l.id));
        if (!nodes.contains(l.src))
            issue(path + ".src", "unknown node " + std::to_string(l.src));
        if (!nodes.contains(l.dst))
            issue(path + ".dst", "unknown node " + std::to_string(l.dst));
        if (l.src == l.dst)
            issue(path, "self-loop on node " + std::to_string(l.src));
        if (l.capacity <= 0 || l.capacity > kMaxRate)
            issue(path + ".capacity_bps", "must be in (0, " + std::to_string(kMaxRate) + "]");
        if (l.latency < 0)
            issue(path + ".latency_ns", "must be non-negative");
    }

    std::set<std::pair<LinkId, ClassId>> phase_keys;
    for (std::size_t i = 0; i < s.phases.size(); ++i) {
        const auto& p = s.phases[i];
        const auto path = "phases[" + std::to_string(i) + "]";
        if (!link_ids.contains(p.link))
            issue(path + ".link", "unknown link " + std::to_string(p.link));
        if (!class_ok(p.class_id))
            issue(path + ".class", "unknown class " + std::to_string(p.class_id));
        else if (p.phase < 0 || p.phase >= s.traffic_class(p.class_id).frame)
            issue(path + ".phase_ns", "must be in [0, frame)");
        if (!phase_keys.insert({p.link, p.class_id}).second)
            issue(path, "duplicate phase for link " + std::to_string(p.link) + ", class " + std::to_string(p.class_id));
    }

    for (std::size_t i = 0; i < s.buffer_overrides.size(); ++i) {
        const auto& o = s.buffer_overrides[i];
        const auto path = "buffer_overrides[" + std::to_string(i) + "]";
        if (!link_ids.contains(o.link))
            issue(path + ".link", "unknown link " + std::to_string(o.link));
        if (!class_ok(o.class_id))
            issue(path + ".class", "unknown class " + std::to_string(o.class_id));
        if (o.y < 1)
            issue(path + ".y", "must be >= 1");
    }

    std::set<ConnectionId> conn_ids;
    for (std::size_t i = 0; i < s.connections.size(); ++i) {
        const auto& c = s.connections[i];
        const auto& g = c.generator;
        const auto path = "connections[" + std::to_string(i) + "]";
        if (!conn_ids.insert(c.id).second)
            issue(path + ".id", "duplicate connection id " + std::to_string(c.id));
        if (!class_ok(c.class_id))
            issue(path + ".class", "unknown class " + std::to_string(c.class_id));
        if (c.rate < 0 || c.rate > kMaxRate)
            issue(path + ".rate_bps", "must be in [0, " + std::to_string(kMaxRate) + "]");

        if (c.path.empty())
            issue(path + ".path", "must contain at least one link");
        std::set<NodeId> visited;
        const Link* prev = nullptr;
        for (std::size_t h = 0; h < c.path.size(); ++h) {
            const auto hpath = path + ".path[" + std::to_string(h) + "]";
            const Link* link = s.topology.find_link(c.path[h]);
            if (!link) {
                issue(hpath, "unknown link " + std::to_string(c.path[h]));
                prev = nullptr;
                continue;
            }
            if (h == 0)
                visited.insert(link->src);
            if (prev && prev->dst != link->src)
                issue(hpath, "link " + std::to_string(link->id) + " does not start where link "
                                 + std::to_string(prev->id) + " ends");
            if (!visited.insert(link->dst).second)
                issue(hpath, "path revisits node " + std::to_string(link->dst));
            prev = link;
        }

        if (g.packet_size <= 0)
            issue(path + ".packet_size_bits", "must be positive");
        else if (g.packet_size > s.max_packet_size)
            issue(path + ".packet_size_bits",
                  "exceeds max_packet_size_bits (" + std::to_string(s.max_packet_size) + ")");
        else if (class_ok(c.class_id) && c.rate > 0) {
            const int128 budget = static_cast<int128>(c.rate) * s.traffic_class(c.class_id).frame;
            if (static_cast<int128>(g.packet_size) * kNanosPerSecond > budget)
                issue(path + ".packet_size_bits", "larger than the per-frame budget rate_bps * frame");
        }
        if (c.deadline && *c.deadline <= 0)
            issue(path + ".deadline_ns", "must be positive");
        if (g.start < 0)
            issue(path + ".start_ns", "must be non-negative");
        if (g.stop && *g.stop <= g.start)
            issue(path + ".stop_ns", "must be greater than start_ns");
        if (g.offset < 0)
            issue(path + ".offset_ns", "must be non-negative");
        if (g.max_packets && *g.max_packets < 0)
            issue(path + ".max_packets", "must be non-negative");
    }

    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

Scenario parse_scenario(std::string_view text, std::string_view origin)
{
    Reader reader{std::string(origin)};
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string(origin) + ": " + e.what());
    }
    // Rate derivation problems are reported together with everything
    // validate() finds.
    std::vector<std::string> issues;
    Scenario s = parse_document(reader, root, issues);
    try {
        validate(s);
    } catch (const ValidationError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string to_yaml(const Scenario& s)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "schema_version" << YAML::Value << s.schema_version;
    if (!s.name.empty())
        out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::Key << "max_packet_size_bits" << YAML::Value << s.max_packet_size;
    out << YAML::Key << "horizon_ns" << YAML::Value << s.horizon;
    out << YAML::Key << "warm_up_ns" << YAML::Value << s.warm_up;
    out << YAML::Key << "buffer_y" << YAML::Value << s.buffer_y;
    out << YAML::Key << "random_phases" << YAML::Value << s.random_phases;

    out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : s.classes) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << c.id << YAML::Key << "frame_ns"
            << YAML::Value << c.frame << YAML::Key << "bandwidth_fraction" << YAML::Value
            << YAML::Precision(17) << c.bandwidth_fraction << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "nodes" << YAML::Value << YAML::Flow << s.topology.nodes;

    out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
    for (const auto& l : s.topology.links) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << l.id << YAML::Key << "src"
            << YAML::Value << l.src << YAML::Key << "dst" << YAML::Value << l.dst << YAML::Key << "capacity_bps"
            << YAML::Value << l.capacity << YAML::Key << "latency_ns" << YAML::Value << l.latency << YAML::EndMap;
    }
    out << YAML::EndSeq;

    if (!s.phases.empty()) {
        out << YAML::Key << "phases" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.phases)
            out << YAML::Flow << YAML::BeginMap << YAML::Key << "link" << YAML::Value << p.link << YAML::Key
                << "class" << YAML::Value << p.class_id << YAML::Key << "phase_ns" << YAML::Value << p.phase
                << YAML::EndMap;
        out << YAML::EndSeq;
    }

    if (!s.buffer_overrides.empty()) {
        out << YAML::Key << "buffer_overrides" << YAML::Value << YAML::BeginSeq;
        for (const auto& o : s.buffer_overrides)
            out << YAML::Flow << YAML::BeginMap << YAML::Key << "link" << YAML::Value << o.link << YAML::Key
                << "class" << YAML::Value << o.class_id << YAML::Key << "y" << YAML::Value << o.y << YAML::EndMap;
        out << YAML::EndSeq;
    }

    out << YAML::Key << "connections" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : s.connections) {
        const auto& g = c.generator;
        out << YAML::BeginMap;
        out << YAML::Key << "id" << YAML::Value << c.id;
        out << YAML::Key << "class" << YAML::Value << c.class_id;
        out << YAML::Key << "rate_bps" << YAML::Value << c.rate;
        out << YAML::Key << "path" << YAML::Value << YAML::Flow << c.path;
        out << YAML::Key << "packet_size_bits" << YAML::Value << g.packet_size;
        if (c.deadline)
            out << YAML::Key << "deadline_ns" << YAML::Value << *c.deadline;
        out << YAML::Key << "start_ns" << YAML::Value << g.start;
        if (g.stop)
            out << YAML::Key << "stop_ns" << YAML::Value << *g.stop;
        if (g.random_offset)
            out << YAML::Key << "offset_ns" << YAML::Value << "random";
        else
            out << YAML::Key << "offset_ns" << YAML::Value << g.offset;
        if (g.max_packets)
            out << YAML::Key << "max_packets" << YAML::Value << *g.max_packets;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "drop_late" << YAML::Value << s.options.drop_late;
    out << YAML::Key << "bypass_admission" << YAML::Value << s.options.bypass_admission;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::map<std::pair<LinkId, ClassId>, FrameClock> resolve_clocks(const Scenario& s, std::uint64_t seed)
{
    std::map<std::pair<LinkId, ClassId>, TimeNs> explicit_phases;
    for (const auto& p : s.phases)
        explicit_phases[{p.link, p.class_id}] = p.phase;

    // One draw per (link, class) in file order, used or not, so adding an
    // explicit phase does not shift the others.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::map<std::pair<LinkId, ClassId>, FrameClock> clocks;
    for (const auto& l : s.topology.links) {
        for (const auto& c : s.classes) {
            const auto draw = static_cast<TimeNs>(rng() % static_cast<std::uint64_t>(c.frame));
            TimeNs phase = s.random_phases ? draw : 0;
            if (auto it = explicit_phases.find({l.id, c.id}); it != explicit_phases.end())
                phase = it->second;
            clocks.emplace(std::pair{l.id, c.id}, FrameClock(c.frame, phase));
        }
    }
    return clocks;
}

std::map<std::pair<LinkId, ClassId>, BitsPerSec> offered_loads(const Scenario& s)
{
    std::map<std::pair<LinkId, ClassId>, BitsPerSec> loads;
    for (const auto& c : s.connections)
        for (auto l : c.path)
            loads[{l, c.class_id}] += c.rate;
    return loads;
}

BudgetTable buffer_budgets(const Scenario& s)
{
    std::map<std::pair<LinkId, ClassId>, std::int64_t> ys;
    for (const auto& o : s.buffer_overrides)
        ys[{o.link, o.class_id}] = o.y;

    BudgetTable table;
    for (const auto& [key, load] : offered_loads(s)) {
        if (load <= 0)
            continue;
        auto it = ys.find(key);
        const auto y = it == ys.end() ? s.buffer_y : it->second;
        table.set(make_budget(key.first, key.second, y, load, s.traffic_class(key.second).frame));
    }
    return table;
}

AdmissionReport run_admission(const Scenario& s)
{
    const auto links = s.link_specs();
    AdmissionController ctl(s.classes, links, s.max_packet_size);
    AdmissionReport report;
    for (const auto& c : s.connections) {
        auto d = ctl.admit(c.connection());
        report.all_admitted = report.all_admitted && d.admitted;
        report.decisions.emplace_back(c.id, d);
    }
    report.loads = ctl.loads();
    return report;
}

} // namespace sgmh

#include "sgmh/engine.hpp"

#include <algorithm>
#include <queue>
#include <random>

#include "sgmh/generator.hpp"
#include "sgmh/scheduling.hpp"

namespace sgmh {

const char* to_string(TraceKind kind)
{
    switch (kind) {
    case TraceKind::generated:
        return "generated";
    case TraceKind::arrival:
        return "arrival";
    case TraceKind::dropped:
        return "dropped";
    case TraceKind::transmit_start:
        return "transmit_start";
    case TraceKind::transmit_end:
        return "transmit_end";
    case TraceKind::delivered:
        return "delivered";
    }
    return "?";
}

namespace {

struct Event {
    TimeNs time = 0;
    EventKind kind = EventKind::arrival;
    /// Packet id for arrival/completion, connection index for generate,
    /// port index for boundary/start-check.
    std::int64_t key = 0;
    std::uint64_t seq = 0;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.time != b.time)
            return a.time > b.time;
        if (a.kind != b.kind)
            return a.kind > b.kind;
        if (a.key != b.key)
            return a.key > b.key;
        return a.seq > b.seq;
    }
};

struct ActiveConnection {
    const ConnectionSpec* spec = nullptr;
    std::vector<std::size_t> ports; // port index per hop
    NodeId source = 0;
    NodeId sink = 0;
    TimeNs deadline = 0;
    Generator generator;
};

class Engine {
public:
    Engine(const Scenario& scenario, const RunOptions& options)
      : s_(scenario)
      , options_(options)
      , seed_(options.seed.value_or(scenario.seed))
    {
    }

    Metrics run();

private:
    void build();
    void push(TimeNs t, EventKind kind, std::int64_t key) { queue_.push({t, kind, key, seq_++}); }
    void trace(TimeNs t, TraceKind kind, const Packet& p, NodeId node, LinkId link)
    {
        if (options_.on_trace)
            options_.on_trace({t, kind, p.id, p.class_id, node, link});
    }
    void request_start_check(std::size_t port, TimeNs now);

    void on_generate(const Event& e);
    void on_arrival(const Event& e);
    void on_boundary(const Event& e);
    void on_start_check(const Event& e);
    void on_complete(const Event& e);
    void arrive(Packet& p, TimeNs now);

    Metrics collect(const AdmissionReport& admission) const;

    const Scenario& s_;
    const RunOptions& options_;
    std::uint64_t seed_;

    std::vector<OutputPort> ports_;
    std::map<LinkId, std::size_t> port_index_;
    std::vector<std::optional<PacketId>> in_flight_;
    std::vector<bool> check_pending_;
    std::vector<std::vector<TimeNs>> scheduled_boundary_; // [port][class-1]

    std::vector<ActiveConnection> conns_;
    std::vector<Packet> packets_;
    std::vector<std::size_t> packet_conn_;
    BudgetTable budgets_;

    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    AdmissionReport admission_;
};

void Engine::build()
{
    validate(s_);
    const auto clocks = resolve_clocks(s_, seed_);
    budgets_ = buffer_budgets(s_);
    const auto n_classes = s_.classes.size();

    for (const auto& link : s_.topology.links) {
        PortConfig cfg;
        cfg.link = link.id;
        cfg.node = link.src;
        cfg.capacity = link.capacity;
        cfg.latency = link.latency;
        for (const auto& c : s_.classes) {
            cfg.clocks.push_back(clocks.at({link.id, c.id}));
            if (const auto* b = budgets_.find(link.id, c.id))
                cfg.budgets.emplace_back(b->budget_bits);
            else
                cfg.budgets.emplace_back(std::nullopt);
        }
        port_index_[link.id] = ports_.size();
        ports_.emplace_back(std::move(cfg));
    }
    in_flight_.assign(ports_.size(), std::nullopt);
    check_pending_.assign(ports_.size(), false);
    scheduled_boundary_.assign(ports_.size(), std::vector<TimeNs>(n_classes, kNever));

    admission_ = run_admission(s_);

    std::mt19937_64 rng(seed_ ^ 0xc2b2ae3d27d4eb4fULL);
    for (std::size_t i = 0; i < s_.connections.size(); ++i) {
        const auto& spec = s_.connections[i];
        const auto draw = rng();
        if (!s_.options.bypass_admission && !admission_.decisions[i].second.admitted)
            continue;
        if (spec.rate == 0)
            continue;

        const auto& cls = s_.traffic_class(spec.class_id);
        const auto first = spec.path.front();
        GeneratorConfig g;
        g.rate = spec.rate;
        g.packet_size = spec.generator.packet_size;
        g.max_packet_size = s_.max_packet_size;
        g.start = spec.generator.start;
        g.offset = spec.generator.offset;
        if (spec.generator.random_offset) {
            const auto interval = transmission_time(g.packet_size, g.rate);
            g.offset = static_cast<TimeNs>(draw % static_cast<std::uint64_t>(std::max<TimeNs>(interval, 1)));
        }
        g.stop = spec.generator.stop;
        g.max_packets = spec.generator.max_packets;
        g.budget_clock = clocks.at({first, cls.id});

        ActiveConnection ac{&spec, {}, s_.topology.find_link(first)->src,
                            s_.topology.find_link(spec.path.back())->dst,
                            spec.deadline.value_or(2 * static_cast<TimeNs>(spec.path.size()) * cls.frame),
                            Generator(g)};
        for (auto l : spec.path)
            ac.ports.push_back(port_index_.at(l));
        conns_.push_back(std::move(ac));
    }

    for (std::size_t i = 0; i < conns_.size(); ++i)
        if (auto t = conns_[i].generator.next(); t && *t < s_.horizon)
            push(*t, EventKind::generate, static_cast<std::int64_t>(i));
}

void Engine::request_start_check(std::size_t port, TimeNs now)
{
    if (check_pending_[port])
        return;
    check_pending_[port] = true;
    push(now, EventKind::transmit_start_check, static_cast<std::int64_t>(port));
}

void Engine::on_generate(const Event& e)
{
    const auto ci = static_cast<std::size_t>(e.key);
    auto& conn = conns_[ci];

    Packet p;
    p.id = static_cast<PacketId>(packets_.size());
    p.class_id = conn.spec->class_id;
    p.size = conn.spec->generator.packet_size;
    p.connection = conn.spec->id;
    p.creation = e.time;
    p.deadline = conn.deadline;
    p.hops.reserve(conn.ports.size());
    packets_.push_back(std::move(p));
    packet_conn_.push_back(ci);

    auto& packet = packets_.back();
    trace(e.time, TraceKind::generated, packet, conn.source, -1);
    arrive(packet, e.time);

    if (auto t = conn.generator.next(); t && *t < s_.horizon)
        push(*t, EventKind::generate, e.key);
}

void Engine::arrive(Packet& p, TimeNs now)
{
    const auto& conn = conns_[packet_conn_[static_cast<std::size_t>(p.id)]];
    const auto hop = p.hops.size();
    mark_late(p, now);

    if (hop == conn.ports.size()) {
        p.delivered = now;
        trace(now, TraceKind::delivered, p, conn.sink, -1);
        return;
    }

    const auto port_idx = conn.ports[hop];
    auto& port = ports_[port_idx];
    const auto node = port.config().node;

    if (s_.options.drop_late && p.late) {
        p.dropped = true;
        p.hops.push_back({node, port.config().link, now, kNever, kNever});
        trace(now, TraceKind::dropped, p, node, port.config().link);
        return;
    }

    const auto res = port.enqueue(p, now);
    if (!res.accepted) {
        trace(now, TraceKind::dropped, p, node, port.config().link);
        return;
    }
    trace(now, TraceKind::arrival, p, node, port.config().link);

    auto& scheduled = scheduled_boundary_[port_idx][static_cast<std::size_t>(p.class_id - 1)];
    if (res.eligible > scheduled) {
        scheduled = res.eligible;
        push(res.eligible, EventKind::frame_boundary, static_cast<std::int64_t>(port_idx));
    }
}

void Engine::on_arrival(const Event& e) { arrive(packets_[static_cast<std::size_t>(e.key)], e.time); }

void Engine::on_boundary(const Event& e)
{
    const auto port = static_cast<std::size_t>(e.key);
    if (ports_[port].promote(e.time) > 0)
        request_start_check(port, e.time);
}

void Engine::on_start_check(const Event& e)
{
    const auto idx = static_cast<std::size_t>(e.key);
    check_pending_[idx] = false;
    auto& port = ports_[idx];
    if (in_flight_[idx] || !port.idle(e.time))
        return;
    auto next = port.select_next(e.time);
    if (!next)
        return;
    auto& p = packets_[static_cast<std::size_t>(next->id)];
    trace(e.time, TraceKind::transmit_start, p, port.config().node, port.config().link);
    const auto done = port.transmit(p, e.time);
    in_flight_[idx] = p.id;
    push(done, EventKind::transmit_complete, p.id);
}

void Engine::on_complete(const Event& e)
{
    auto& p = packets_[static_cast<std::size_t>(e.key)];
    const auto& conn = conns_[packet_conn_[static_cast<std::size_t>(p.id)]];
    const auto idx = conn.ports[p.hops.size() - 1];
    auto& port = ports_[idx];
    in_flight_[idx].reset();
    trace(e.time, TraceKind::transmit_end, p, port.config().node, port.config().link);

    const auto at = e.time + port.config().latency;
    if (at < s_.horizon)
        push(at, EventKind::arrival, p.id);
    request_start_check(idx, e.time);
}

Metrics Engine::run()
{
    build();
    while (!queue_.empty()) {
        const Event e = queue_.top();
        if (e.time >= s_.horizon)
            break;
        queue_.pop();
        switch (e.kind) {
        case EventKind::transmit_complete:
            on_complete(e);
            break;
        case EventKind::frame_boundary:
            on_boundary(e);
            break;
        case EventKind::transmit_start_check:
            on_start_check(e);
            break;
        case EventKind::arrival:
            on_arrival(e);
            break;
        case EventKind::generate:
            on_generate(e);
            break;
        }
    }
    return collect(admission_);
}

Metrics Engine::collect(const AdmissionReport& admission) const
{
    Metrics m;
    m.seed = seed_;
    m.horizon = s_.horizon;
    m.warm_up = s_.warm_up;
    m.classes = s_.classes;
    m.admitted = admission.all_admitted;
    m.admission_bypassed = s_.options.bypass_admission;
    for (const auto& [id, d] : admission.decisions)
        if (!d.admitted)
            m.rejected.push_back(id);

    for (const auto& p : packets_) {
        if (p.creation < s_.warm_up)
            continue;
        PacketRecord r;
        r.packet_id = p.id;
        r.class_id = p.class_id;
        r.late = p.late;
        r.dropped = p.dropped;
        r.e2e = p.delivered == kNever ? kNever : p.delivered - p.creation;
        for (std::size_t h = 0; h < p.hops.size(); ++h) {
            const auto& hop = p.hops[h];
            // A transmission still on the wire at the horizon has not departed.
            const auto departure = hop.departure != kNever && hop.departure < s_.horizon ? hop.departure : kNever;
            r.hops.push_back({static_cast<int>(h), hop.arrival, hop.eligible, departure});
        }
        m.packets.push_back(std::move(r));
    }

    for (const auto& port : ports_) {
        const auto& cfg = port.config();
        const auto overshoot = std::max<TimeNs>(0, port.busy_until() - s_.horizon);
        const auto busy = port.busy_time() - overshoot;
        m.ports.push_back({cfg.link, port.frame_overruns(), busy,
                           static_cast<double>(busy) / static_cast<double>(s_.horizon)});
        for (const auto& c : s_.classes) {
            const auto* b = budgets_.find(cfg.link, c.id);
            if (!b)
                continue;
            const auto& acct = port.buffer(c.id);
            m.buffers.push_back({cfg.link, c.id, b->y, b->load, b->frame, b->budget_bits, acct.peak(), acct.overflows()});
        }
    }
    return m;
}

} // namespace

Metrics run(const Scenario& scenario, const RunOptions& options)
{
    Engine engine(scenario, options);
    return engine.run();
}

} // namespace sgmh

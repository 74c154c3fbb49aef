#include "sgmh/scheduling.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sgmh {

bool mark_late(Packet& packet, TimeNs now)
{
    if (now - packet.creation > packet.deadline)
        packet.late = true;
    return packet.late;
}

std::vector<std::optional<Bits>> unlimited_budgets(std::size_t classes)
{
    return std::vector<std::optional<Bits>>(classes, std::numeric_limits<Bits>::max() / 2);
}

OutputPort::OutputPort(PortConfig config)
  : config_(std::move(config))
  , classes_(config_.clocks.size())
{
    if (config_.capacity <= 0)
        throw ConfigError("link " + std::to_string(config_.link) + ": capacity must be positive");
    if (config_.latency < 0)
        throw ConfigError("link " + std::to_string(config_.link) + ": latency must be non-negative");
    if (config_.budgets.size() != config_.clocks.size())
        throw ConfigError("link " + std::to_string(config_.link) + ": one budget slot per class required");

    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (config_.budgets[i]) {
            classes_[i].account = BufferAccount(*config_.budgets[i]);
            classes_[i].has_budget = true;
        }
    }

    priority_order_.resize(classes_.size());
    std::iota(priority_order_.begin(), priority_order_.end(), std::size_t{0});
    std::stable_sort(priority_order_.begin(), priority_order_.end(), [this](std::size_t a, std::size_t b) {
        return config_.clocks[a].frame() < config_.clocks[b].frame();
    });
}

OutputPort::ClassQueues& OutputPort::queues_for(ClassId class_id)
{
    if (class_id < 1 || static_cast<std::size_t>(class_id) > classes_.size())
        throw ConfigError("link " + std::to_string(config_.link) + ": unknown class " + std::to_string(class_id));
    return classes_[static_cast<std::size_t>(class_id - 1)];
}

const OutputPort::ClassQueues& OutputPort::queues_for(ClassId class_id) const
{
    return const_cast<OutputPort*>(this)->queues_for(class_id);
}

EnqueueResult OutputPort::enqueue(Packet& packet, TimeNs now)
{
    if (packet.size <= 0)
        throw std::invalid_argument("packet size must be positive");
    auto& q = queues_for(packet.class_id);
    if (!q.has_budget)
        throw ConfigError("no buffer budget for link " + std::to_string(config_.link) + ", class "
                          + std::to_string(packet.class_id));

    const auto& clock = config_.clocks[static_cast<std::size_t>(packet.class_id - 1)];
    HopRecord hop{config_.node, config_.link, now, kNever, kNever};

    if (!q.account.try_add(packet.size)) {
        packet.dropped = true;
        packet.hops.push_back(hop);
        return {false, kNever};
    }

    hop.eligible = next_boundary_after(clock, now);
    packet.hops.push_back(hop);

    QueueEntry entry{packet.id, packet.class_id, packet.size, hop.eligible};
    // Keep holding sorted by eligibility; equal times stay in arrival order.
    auto pos = std::upper_bound(q.holding.begin(), q.holding.end(), entry.eligible,
                                [](TimeNs t, const QueueEntry& e) { return t < e.eligible; });
    q.holding.insert(pos, entry);
    return {true, hop.eligible};
}

std::size_t OutputPort::promote(TimeNs now)
{
    std::size_t moved = 0;
    for (auto& q : classes_) {
        while (!q.holding.empty() && q.holding.front().eligible <= now) {
            q.eligible.push_back(q.holding.front());
            q.holding.pop_front();
            ++moved;
        }
    }
    return moved;
}

std::optional<QueueEntry> OutputPort::select_next(TimeNs now)
{
    if (now < busy_until_)
        throw std::logic_error("select_next on a busy port");
    for (auto idx : priority_order_) {
        auto& q = classes_[idx];
        if (!q.eligible.empty()) {
            QueueEntry head = q.eligible.front();
            q.eligible.pop_front();
            q.account.remove(head.size);
            return head;
        }
    }
    return std::nullopt;
}

TimeNs OutputPort::transmit(Packet& packet, TimeNs now)
{
    if (packet.size <= 0)
        throw std::invalid_argument("packet size must be positive");
    if (now < busy_until_)
        throw std::logic_error("transmit while the link is busy");
    if (packet.hops.empty() || packet.hops.back().link != config_.link)
        throw std::logic_error("packet was not enqueued on this port");

    auto& hop = packet.hops.back();
    const TimeNs completion = now + transmission_time(packet.size, config_.capacity);
    const auto& clock = config_.clocks[static_cast<std::size_t>(packet.class_id - 1)];
    if (completion > hop.eligible + clock.frame())
        ++frame_overruns_;

    hop.departure = completion;
    busy_time_ += completion - now;
    busy_until_ = completion;
    return completion;
}

std::optional<TimeNs> OutputPort::next_eligibility() const
{
    std::optional<TimeNs> best;
    for (const auto& q : classes_)
        if (!q.holding.empty() && (!best || q.holding.front().eligible < *best))
            best = q.holding.front().eligible;
    return best;
}

bool OutputPort::has_eligible() const
{
    return std::any_of(classes_.begin(), classes_.end(), [](const ClassQueues& q) { return !q.eligible.empty(); });
}

const BufferAccount& OutputPort::buffer(ClassId class_id) const { return queues_for(class_id).account; }

std::size_t OutputPort::held_count(ClassId class_id) const { return queues_for(class_id).holding.size(); }

std::size_t OutputPort::eligible_count(ClassId class_id) const { return queues_for(class_id).eligible.size(); }

} // namespace sgmh

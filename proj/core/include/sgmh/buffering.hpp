#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "sgmh/types.hpp"

namespace sgmh {

inline constexpr std::int64_t kDefaultBufferMultiplier = 2;

/// b = y * D * T for one (link, class).
struct BufferBudget {
    LinkId link = 0;
    ClassId class_id = 0;
    std::int64_t y = kDefaultBufferMultiplier;
    BitsPerSec load = 0;
    TimeNs frame = 0;
    Bits budget_bits = 0;
};

/// y * load * frame in bits, rounded down to a whole bit. Throws
/// std::invalid_argument on negative arguments.
Bits buffer_size(std::int64_t y, BitsPerSec load, TimeNs frame);

/// Builds a BufferBudget, enforcing y >= 1.
BufferBudget make_budget(LinkId link, ClassId class_id, std::int64_t y, BitsPerSec load, TimeNs frame);

enum class Admittance { ok, overflow };

/// Drop-tail test: the arriving packet overflows when queued + size > budget.
inline Admittance occupancy_check(Bits queued, Bits size, Bits budget)
{
    return queued + size > budget ? Admittance::overflow : Admittance::ok;
}

/// Per-(link, class) budgets.
class BudgetTable {
public:
    void set(const BufferBudget& b) { budgets_[{b.link, b.class_id}] = b; }

    /// Throws ConfigError when (link, class) has no budget.
    const BufferBudget& at(LinkId link, ClassId class_id) const;
    const BufferBudget* find(LinkId link, ClassId class_id) const;

    const std::map<std::pair<LinkId, ClassId>, BufferBudget>& entries() const noexcept { return budgets_; }

private:
    std::map<std::pair<LinkId, ClassId>, BufferBudget> budgets_;
};

/// Occupancy of one class queue on one port: bits in holding + eligible
/// queues. The packet on the wire is not counted.
class BufferAccount {
public:
    BufferAccount() = default;
    explicit BufferAccount(Bits budget) : budget_(budget) {}

    /// Admits the packet and returns true, or records an overflow and
    /// returns false.
    bool try_add(Bits size);
    void remove(Bits size);

    Bits budget() const noexcept { return budget_; }
    Bits occupancy() const noexcept { return occupancy_; }
    Bits peak() const noexcept { return peak_; }
    std::int64_t overflows() const noexcept { return overflows_; }

private:
    Bits budget_ = 0;
    Bits occupancy_ = 0;
    Bits peak_ = 0;
    std::int64_t overflows_ = 0;
};

} // namespace sgmh

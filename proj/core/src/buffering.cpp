#include "sgmh/buffering.hpp"

#include <stdexcept>
#include <string>

namespace sgmh {

Bits buffer_size(std::int64_t y, BitsPerSec load, TimeNs frame)
{
    if (y < 0 || load < 0 || frame < 0)
        throw std::invalid_argument("buffer_size arguments must be non-negative");
    const int128 scaled = static_cast<int128>(y) * load * frame;
    return static_cast<Bits>(scaled / kNanosPerSecond);
}

BufferBudget make_budget(LinkId link, ClassId class_id, std::int64_t y, BitsPerSec load, TimeNs frame)
{
    if (y < 1)
        throw ConfigError("buffer multiplier y must be >= 1 (link " + std::to_string(link) + ", class "
                          + std::to_string(class_id) + ")");
    return {link, class_id, y, load, frame, buffer_size(y, load, frame)};
}

const BufferBudget& BudgetTable::at(LinkId link, ClassId class_id) const
{
    if (const auto* b = find(link, class_id))
        return *b;
    throw ConfigError("no buffer budget for link " + std::to_string(link) + ", class " + std::to_string(class_id));
}

const BufferBudget* BudgetTable::find(LinkId link, ClassId class_id) const
{
    auto it = budgets_.find({link, class_id});
    return it == budgets_.end() ? nullptr : &it->second;
}

bool BufferAccount::try_add(Bits size)
{
    if (occupancy_check(occupancy_, size, budget_) == Admittance::overflow) {
        ++overflows_;
        return false;
    }
    occupancy_ += size;
    if (occupancy_ > peak_)
        peak_ = occupancy_;
    return true;
}

void BufferAccount::remove(Bits size)
{
    if (size > occupancy_)
        throw std::logic_error("buffer occupancy underflow");
    occupancy_ -= size;
}

} // namespace sgmh

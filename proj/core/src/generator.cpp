#include "sgmh/generator.hpp"

#include <limits>
#include <string>

namespace sgmh {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

Generator::Generator(GeneratorConfig config)
  : config_(config)
  , frame_(std::numeric_limits<std::int64_t>::min())
{
    if (config_.packet_size <= 0)
        throw ConfigError("packet size must be positive");
    if (config_.packet_size > config_.max_packet_size)
        throw ConfigError("packet size " + std::to_string(config_.packet_size) + " exceeds the maximum packet size "
                          + std::to_string(config_.max_packet_size));
    if (config_.rate < 0)
        throw ConfigError("rate must be non-negative");
    if (config_.rate > 0 && !fits_budget(0))
        throw ConfigError("packet size " + std::to_string(config_.packet_size)
                          + " exceeds the per-frame budget rate * frame");
    done_ = config_.rate == 0;
}

bool Generator::fits_budget(Bits frame_bits) const
{
    const int128 needed = static_cast<int128>(frame_bits + config_.packet_size) * kNanosPerSecond;
    return needed <= static_cast<int128>(config_.rate) * config_.budget_clock.frame();
}

std::optional<TimeNs> Generator::next()
{
    if (done_)
        return std::nullopt;
    if (config_.max_packets && emitted_ >= *config_.max_packets) {
        done_ = true;
        return std::nullopt;
    }

    const int128 spacing = static_cast<int128>(emitted_) * config_.packet_size * kNanosPerSecond;
    const auto nominal = config_.start + config_.offset
                         + static_cast<TimeNs>((spacing + config_.rate - 1) / config_.rate);
    TimeNs t = std::max(nominal, last_);

    const auto& clock = config_.budget_clock;
    std::int64_t k = floor_div(t - clock.phase(), clock.frame());
    Bits bits = k == frame_ ? frame_bits_ : 0;
    if (!fits_budget(bits)) {
        // Frame is full: hold the packet until the next instance begins.
        ++k;
        t = clock.instance_start(k);
        bits = 0;
    }

    if (config_.stop && t >= *config_.stop) {
        done_ = true;
        return std::nullopt;
    }
    frame_ = k;
    frame_bits_ = bits + config_.packet_size;
    last_ = t;
    ++emitted_;
    return t;
}

std::vector<Emission> generate(Generator& gen, TimeNs until)
{
    std::vector<Emission> out;
    while (true) {
        auto t = gen.next();
        if (!t)
            break;
        if (*t >= until)
            break;
        out.push_back({*t, gen.config().packet_size});
    }
    return out;
}

} // namespace sgmh

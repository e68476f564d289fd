#include "evlink/framing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "evlink/errors.hpp"

namespace evlink {

std::uint64_t EventFrame::total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
}

std::vector<EventFrame> periodic_frames(const EventStream& stream, std::int64_t accumulation_us,
                                        double fps, std::int64_t duration_us,
                                        const SensorGeometry& geometry, PolaritySelect select) {
    if (accumulation_us <= 0) throw std::invalid_argument("accumulation_us must be positive");
    if (fps <= 0.0) throw std::invalid_argument("fps must be positive");
    if (duration_us < 0) throw std::invalid_argument("duration_us must be non-negative");

    const auto frame_count = static_cast<std::int64_t>(
        std::floor(static_cast<double>(duration_us) * 1e-6 * fps + 1e-9));

    std::vector<EventFrame> frames;
    frames.reserve(static_cast<std::size_t>(std::max<std::int64_t>(frame_count, 0)));

    auto t_less = [](const Event& e, std::int64_t t) { return e.t_us < t; };

    for (std::int64_t k = 1; k <= frame_count; ++k) {
        EventFrame f;
        f.width = geometry.width;
        f.height = geometry.height;
        f.t_frame_us = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * 1e6 / fps));
        f.counts.assign(static_cast<std::size_t>(geometry.width) *
                            static_cast<std::size_t>(geometry.height),
                        0);

        const std::int64_t lo = f.t_frame_us - accumulation_us;
        auto it = std::lower_bound(stream.begin(), stream.end(), lo, t_less);
        for (; it != stream.end() && it->t_us < f.t_frame_us; ++it) {
            if (select == PolaritySelect::on_only && it->polarity != 1) continue;
            if (select == PolaritySelect::off_only && it->polarity != 0) continue;
            ++f.at(it->x, it->y);
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

EventFrame accumulate_window(const EventStream& stream, std::int64_t t_lo, std::int64_t t_hi,
                             const SensorGeometry& geometry, PolaritySelect select) {
    EventFrame f;
    f.width = geometry.width;
    f.height = geometry.height;
    f.t_frame_us = t_hi;
    f.counts.assign(
        static_cast<std::size_t>(geometry.width) * static_cast<std::size_t>(geometry.height), 0);
    auto t_less = [](const Event& e, std::int64_t t) { return e.t_us < t; };
    auto it = std::lower_bound(stream.begin(), stream.end(), t_lo, t_less);
    for (; it != stream.end() && it->t_us < t_hi; ++it) {
        if (select == PolaritySelect::on_only && it->polarity != 1) continue;
        if (select == PolaritySelect::off_only && it->polarity != 0) continue;
        ++f.at(it->x, it->y);
    }
    return f;
}

std::pair<int, int> hot_pixel(const EventStream& stream, const std::optional<BoundingBox>& roi) {
    std::map<std::pair<int, int>, std::uint64_t> counts;  // keyed (y, x)
    for (const auto& ev : stream) {
        if (roi && !roi->contains(ev.x, ev.y)) continue;
        ++counts[{ev.y, ev.x}];
    }
    if (counts.empty()) throw NoSignalError("no events inside the region of interest");

    std::pair<int, int> best_yx{0, 0};
    std::uint64_t best = 0;
    for (const auto& [yx, c] : counts) {
        if (c > best) {  // map order already favors the smallest (y, x) on ties
            best = c;
            best_yx = yx;
        }
    }
    return {best_yx.second, best_yx.first};
}

std::vector<PixelEvent> pixel_events(const EventStream& stream, int x, int y) {
    std::vector<PixelEvent> out;
    for (const auto& ev : stream)
        if (ev.x == x && ev.y == y) out.push_back({ev.t_us, ev.polarity});
    return out;
}

}  // namespace evlink

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "evlink/types.hpp"

namespace evlink {

// Per-pixel event counts accumulated over one frame window.
struct EventFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> counts;
    std::int64_t t_frame_us = 0;

    std::uint32_t at(int x, int y) const {
        return counts[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    std::uint32_t& at(int x, int y) {
        return counts[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    std::uint64_t total() const;
};

enum class PolaritySelect { both, on_only, off_only };

// Frame k is emitted at t_k = k/fps for k = 1..floor(duration*fps) and
// counts events inside the half-open window [t_k - accumulation_us, t_k).
// Windows overlap when 1/fps < accumulation_us; events outside every
// window contribute to no frame. Counts are polarity-agnostic by default.
std::vector<EventFrame> periodic_frames(const EventStream& stream, std::int64_t accumulation_us,
                                        double fps, std::int64_t duration_us,
                                        const SensorGeometry& geometry,
                                        PolaritySelect select = PolaritySelect::both);

// Single frame over an explicit half-open window [t_lo, t_hi).
EventFrame accumulate_window(const EventStream& stream, std::int64_t t_lo, std::int64_t t_hi,
                             const SensorGeometry& geometry,
                             PolaritySelect select = PolaritySelect::both);

// Pixel with the maximum event count inside roi (whole stream when absent);
// ties break toward the smallest (y, x). Throws NoSignalError when the
// restriction holds no events.
std::pair<int, int> hot_pixel(const EventStream& stream, const std::optional<BoundingBox>& roi);

// The hot pixel's events in time order, ready for the sliding demodulator.
std::vector<PixelEvent> pixel_events(const EventStream& stream, int x, int y);

}  // namespace evlink

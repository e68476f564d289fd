#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

namespace evlink {

// One sensor output sample: timestamp, pixel coordinates, polarity.
// Polarity 1 marks an increase (on-event), 0 a decrease (off-event).
struct Event {
    std::int64_t t_us = 0;
    int x = 0;
    int y = 0;
    int polarity = 0;
};

inline bool operator==(const Event& a, const Event& b) {
    return a.t_us == b.t_us && a.x == b.x && a.y == b.y && a.polarity == b.polarity;
}

// Canonical stream order: (t, y, x, polarity).
inline bool stream_less(const Event& a, const Event& b) {
    return std::tie(a.t_us, a.y, a.x, a.polarity) < std::tie(b.t_us, b.y, b.x, b.polarity);
}

using EventStream = std::vector<Event>;

// Single-pixel event: timestamp and polarity.
struct PixelEvent {
    std::int64_t t_us = 0;
    int polarity = 0;
};

inline bool operator==(const PixelEvent& a, const PixelEvent& b) {
    return a.t_us == b.t_us && a.polarity == b.polarity;
}

inline void sort_stream(EventStream& s) {
    std::sort(s.begin(), s.end(), stream_less);
}

struct SensorGeometry {
    int width = 1280;
    int height = 720;

    bool contains(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height;
    }
};

// Axis-aligned box, top-left anchored, half-open in neither axis:
// covers pixels [x, x+w) x [y, y+h).
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
    bool contains(int px, int py) const {
        return px >= x && py >= y && px < x + w && py < y + h;
    }
    bool inside(const SensorGeometry& g) const {
        return w > 0 && h > 0 && x >= 0 && y >= 0 && x + w <= g.width && y + h <= g.height;
    }
};

inline bool operator==(const BoundingBox& a, const BoundingBox& b) {
    return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
}

// Piecewise-constant intensity trace. Sample i covers
// [t0_us + i*slot_us, t0_us + (i+1)*slot_us). Intensity is a linear
// arbitrary scale; slot_us may be fractional (sub-100us transmitter rates).
struct IntensitySignal {
    std::vector<double> samples;
    double slot_us = 100.0;
    std::int64_t t0_us = 0;

    double duration_us() const { return static_cast<double>(samples.size()) * slot_us; }
    std::int64_t sample_time_us(std::size_t i) const {
        return t0_us + static_cast<std::int64_t>(static_cast<double>(i) * slot_us + 0.5);
    }
};

// Sparse set of pixels, kept sorted by (y, x).
class PixelMask {
public:
    PixelMask() = default;
    explicit PixelMask(std::vector<std::pair<int, int>> xy_pixels) : pixels_(std::move(xy_pixels)) {
        std::sort(pixels_.begin(), pixels_.end(), yx_less);
        pixels_.erase(std::unique(pixels_.begin(), pixels_.end()), pixels_.end());
    }

    static PixelMask from_rect(const BoundingBox& r) {
        std::vector<std::pair<int, int>> px;
        px.reserve(static_cast<std::size_t>(r.area()));
        for (int y = r.y; y < r.y + r.h; ++y)
            for (int x = r.x; x < r.x + r.w; ++x) px.emplace_back(x, y);
        return PixelMask(std::move(px));
    }

    static PixelMask from_disc(int cx, int cy, int radius) {
        std::vector<std::pair<int, int>> px;
        for (int y = cy - radius; y <= cy + radius; ++y)
            for (int x = cx - radius; x <= cx + radius; ++x) {
                const std::int64_t dx = x - cx, dy = y - cy;
                if (dx * dx + dy * dy <= static_cast<std::int64_t>(radius) * radius)
                    px.emplace_back(x, y);
            }
        return PixelMask(std::move(px));
    }

    bool contains(int x, int y) const {
        return std::binary_search(pixels_.begin(), pixels_.end(), std::make_pair(x, y), yx_less);
    }
    bool empty() const { return pixels_.empty(); }
    std::size_t size() const { return pixels_.size(); }
    const std::vector<std::pair<int, int>>& pixels() const { return pixels_; }

    bool inside(const SensorGeometry& g) const {
        for (const auto& [x, y] : pixels_)
            if (!g.contains(x, y)) return false;
        return true;
    }

    // Tight box around the mask; zero box if empty.
    BoundingBox tight_bbox() const {
        if (pixels_.empty()) return {};
        int minx = pixels_[0].first, maxx = pixels_[0].first;
        int miny = pixels_[0].second, maxy = pixels_[0].second;
        for (const auto& [x, y] : pixels_) {
            minx = std::min(minx, x);
            maxx = std::max(maxx, x);
            miny = std::min(miny, y);
            maxy = std::max(maxy, y);
        }
        return {minx, miny, maxx - minx + 1, maxy - miny + 1};
    }

private:
    static bool yx_less(const std::pair<int, int>& a, const std::pair<int, int>& b) {
        return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    }
    std::vector<std::pair<int, int>> pixels_;
};

}  // namespace evlink

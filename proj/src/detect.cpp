#include "evlink/detect.hpp"

#include <algorithm>
#include <stdexcept>

namespace evlink {

BinaryImage binarize(const EventFrame& frame, int threshold, int cap) {
    if (threshold < 0) throw std::invalid_argument("threshold must be non-negative");
    if (cap <= 0) throw std::invalid_argument("cap must be positive");

    BinaryImage img;
    img.width = frame.width;
    img.height = frame.height;
    img.pixels.resize(frame.counts.size());
    for (std::size_t i = 0; i < frame.counts.size(); ++i) {
        const auto clamped = static_cast<std::int64_t>(
            std::min<std::uint32_t>(frame.counts[i], static_cast<std::uint32_t>(cap)));
        // min(count, cap) * (255/cap) >= threshold, kept in integers.
        img.pixels[i] = clamped * 255 >= static_cast<std::int64_t>(threshold) * cap ? 1 : 0;
    }
    return img;
}

std::optional<BoundingBox> largest_contour_bbox(const BinaryImage& image) {
    const int w = image.width, h = image.height;
    std::vector<std::uint8_t> visited(image.pixels.size(), 0);
    std::vector<std::pair<int, int>> stack;

    std::optional<BoundingBox> best;
    std::int64_t best_area = 0;

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const std::size_t si = static_cast<std::size_t>(sy) * w + sx;
            if (!image.pixels[si] || visited[si]) continue;

            std::int64_t area = 0;
            int minx = sx, maxx = sx, miny = sy, maxy = sy;
            visited[si] = 1;
            stack.assign(1, {sx, sy});
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                ++area;
                minx = std::min(minx, x);
                maxx = std::max(maxx, x);
                miny = std::min(miny, y);
                maxy = std::max(maxy, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (!image.pixels[ni] || visited[ni]) continue;
                        visited[ni] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            if (area > best_area) {
                best_area = area;
                best = BoundingBox{minx, miny, maxx - minx + 1, maxy - miny + 1};
            }
        }
    }
    return best;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0)
        throw std::invalid_argument("iou needs valid boxes");
    const int ix = std::max(a.x, b.x);
    const int iy = std::max(a.y, b.y);
    const int ix2 = std::min(a.x + a.w, b.x + b.w);
    const int iy2 = std::min(a.y + a.h, b.y + b.h);
    const std::int64_t iw = std::max(0, ix2 - ix);
    const std::int64_t ih = std::max(0, iy2 - iy);
    const std::int64_t inter = iw * ih;
    const std::int64_t uni = a.area() + b.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace evlink

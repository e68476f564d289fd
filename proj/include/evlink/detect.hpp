#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evlink/framing.hpp"
#include "evlink/types.hpp"

namespace evlink {

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 0 or 1

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

// Grayscale-then-threshold binarization: counts saturate at `cap`, scale to
// 0..255, and a pixel is set when the scaled value reaches `threshold`.
// Defaults follow the frame-image convention (cap 5, threshold 50), where
// any pixel with at least one event turns on.
BinaryImage binarize(const EventFrame& frame, int threshold = 50, int cap = 5);

// Largest 8-connected component by filled pixel area; returns its tight
// bounding box, or nothing for an empty image. Equal areas resolve to the
// component found first in row-major scan order.
std::optional<BoundingBox> largest_contour_bbox(const BinaryImage& image);

// Intersection-over-union of two boxes, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace evlink

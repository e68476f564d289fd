#include <doctest.h>

#include "evlink/detect.hpp"
#include "evlink/rng.hpp"

using namespace evlink;

namespace {

EventFrame frame_from(int w, int h, const std::vector<std::pair<int, int>>& set_pixels,
                      std::uint32_t count = 10) {
    EventFrame f;
    f.width = w;
    f.height = h;
    f.counts.assign(static_cast<std::size_t>(w) * h, 0);
    for (const auto& [x, y] : set_pixels) f.at(x, y) = count;
    return f;
}

}  // namespace

TEST_SUITE("detect") {
    TEST_CASE("binarize thresholds the capped grayscale") {
        EventFrame f = frame_from(3, 1, {});
        f.at(0, 0) = 0;
        f.at(1, 0) = 1;
        f.at(2, 0) = 7;
        const auto img = binarize(f);  // cap 5: one count scales to 51
        CHECK(img.at(0, 0) == 0);
        CHECK(img.at(1, 0) == 1);
        CHECK(img.at(2, 0) == 1);
    }

    TEST_CASE("binarize boundary is inclusive at the threshold") {
        EventFrame f = frame_from(2, 1, {});
        f.at(0, 0) = 49;
        f.at(1, 0) = 50;
        const auto img = binarize(f, 50, 255);  // identity scaling
        CHECK(img.at(0, 0) == 0);  // just under: unset
        CHECK(img.at(1, 0) == 1);  // exactly at: set
    }

    TEST_CASE("all-zero frames binarize to an empty image") {
        const auto img = binarize(frame_from(4, 4, {}));
        CHECK(std::all_of(img.pixels.begin(), img.pixels.end(),
                          [](std::uint8_t v) { return v == 0; }));
        CHECK(!largest_contour_bbox(img).has_value());
    }

    TEST_CASE("largest contour box is tight around a filled square") {
        std::vector<std::pair<int, int>> px;
        for (int y = 5; y < 15; ++y)
            for (int x = 5; x < 15; ++x) px.emplace_back(x, y);
        const auto box = largest_contour_bbox(binarize(frame_from(20, 20, px)));
        REQUIRE(box.has_value());
        CHECK(*box == BoundingBox{5, 5, 10, 10});
    }

    TEST_CASE("the larger of two components wins") {
        std::vector<std::pair<int, int>> px;
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 10; ++x) px.emplace_back(x, y);
        for (int y = 15; y < 18; ++y)
            for (int x = 15; x < 18; ++x) px.emplace_back(x, y);
        const auto box = largest_contour_bbox(binarize(frame_from(20, 20, px)));
        REQUIRE(box.has_value());
        CHECK(*box == BoundingBox{0, 0, 10, 10});
    }

    TEST_CASE("diagonal neighbors join under 8-connectivity") {
        const auto box = largest_contour_bbox(
            binarize(frame_from(4, 4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}})));
        REQUIRE(box.has_value());
        CHECK(*box == BoundingBox{0, 0, 4, 4});
    }

    TEST_CASE("contour detection is translation equivariant") {
        Rng rng(3);
        std::vector<std::pair<int, int>> blob;
        for (int i = 0; i < 12; ++i)
            blob.emplace_back(2 + static_cast<int>(rng.next_u64() % 5),
                              2 + static_cast<int>(rng.next_u64() % 5));
        const auto base = largest_contour_bbox(binarize(frame_from(24, 24, blob)));
        REQUIRE(base.has_value());
        for (int shift : {1, 5, 9}) {
            std::vector<std::pair<int, int>> moved;
            for (auto [x, y] : blob) moved.emplace_back(x + shift, y + shift);
            const auto got = largest_contour_bbox(binarize(frame_from(24, 24, moved)));
            REQUIRE(got.has_value());
            CHECK(got->x == base->x + shift);
            CHECK(got->y == base->y + shift);
            CHECK(got->w == base->w);
            CHECK(got->h == base->h);
        }
    }

    TEST_CASE("iou axioms") {
        const BoundingBox a{0, 0, 10, 10};
        CHECK(iou(a, a) == doctest::Approx(1.0));
        CHECK(iou(a, {20, 20, 5, 5}) == doctest::Approx(0.0));
        CHECK(iou(a, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0));
        CHECK(iou({5, 0, 10, 10}, a) == doctest::Approx(1.0 / 3.0));

        Rng rng(4);
        for (int t = 0; t < 100; ++t) {
            const BoundingBox p{static_cast<int>(rng.next_u64() % 20),
                                static_cast<int>(rng.next_u64() % 20),
                                 1 + static_cast<int>(rng.next_u64() % 10),
                                 1 + static_cast<int>(rng.next_u64() % 10)};
            const BoundingBox q{static_cast<int>(rng.next_u64() % 20),
                                static_cast<int>(rng.next_u64() % 20),
                                 1 + static_cast<int>(rng.next_u64() % 10),
                                 1 + static_cast<int>(rng.next_u64() % 10)};
            const double v = iou(p, q);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v == doctest::Approx(iou(q, p)));
        }
        CHECK_THROWS_AS(iou(a, {0, 0, 0, 5}), std::invalid_argument);
    }
}

#include <doctest.h>

#include <algorithm>

#include "evlink/errors.hpp"
#include "evlink/framing.hpp"
#include "evlink/rng.hpp"

using namespace evlink;

namespace {

EventStream random_stream(int n, std::int64_t duration_us, const SensorGeometry& geo, Rng& rng) {
    EventStream s;
    for (int i = 0; i < n; ++i) {
        Event ev;
        ev.t_us = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(duration_us));
        ev.x = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(geo.width));
        ev.y = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(geo.height));
        ev.polarity = rng.coin_bit();
        s.push_back(ev);
    }
    sort_stream(s);
    return s;
}

}  // namespace

TEST_SUITE("framing") {
    TEST_CASE("non-overlapping windows tile the stream duration") {
        SensorGeometry geo{4, 4};
        Rng rng(1);
        const auto stream = random_stream(500, 1'000'000, geo, rng);
        const auto frames = periodic_frames(stream, 100'000, 10.0, 1'000'000, geo);
        REQUIRE(frames.size() == 10);
        std::uint64_t total = 0;
        for (const auto& f : frames) total += f.total();
        CHECK(total == stream.size());
        CHECK(frames.front().t_frame_us == 100'000);
        CHECK(frames.back().t_frame_us == 1'000'000);
    }

    TEST_CASE("overlapping windows see events twice") {
        SensorGeometry geo{4, 4};
        EventStream stream = {{60'000, 1, 1, 1}};
        const auto frames = periodic_frames(stream, 100'000, 20.0, 1'000'000, geo);
        REQUIRE(frames.size() == 20);
        int hits = 0;
        for (const auto& f : frames) hits += static_cast<int>(f.total());
        CHECK(hits == 2);  // windows ending at 100 ms and 150 ms
        CHECK(frames[1].total() == 1);
        CHECK(frames[2].total() == 1);
    }

    TEST_CASE("empty streams produce all-zero frames") {
        SensorGeometry geo{4, 4};
        const auto frames = periodic_frames({}, 100'000, 10.0, 500'000, geo);
        REQUIRE(frames.size() == 5);
        for (const auto& f : frames) CHECK(f.total() == 0);
    }

    TEST_CASE("count conservation holds per window") {
        SensorGeometry geo{6, 6};
        Rng rng(2);
        const auto stream = random_stream(300, 700'000, geo, rng);
        const auto frames = periodic_frames(stream, 50'000, 7.0, 700'000, geo);
        for (const auto& f : frames) {
            const std::int64_t lo = f.t_frame_us - 50'000;
            const auto want = static_cast<std::uint64_t>(
                std::count_if(stream.begin(), stream.end(), [&](const Event& e) {
                    return e.t_us >= lo && e.t_us < f.t_frame_us;
                }));
            CHECK(f.total() == want);
        }
    }

    TEST_CASE("polarity-split frames count one polarity only") {
        SensorGeometry geo{2, 2};
        EventStream stream = {{10, 0, 0, 1}, {20, 0, 0, 0}, {30, 1, 1, 1}};
        const auto on = accumulate_window(stream, 0, 100, geo, PolaritySelect::on_only);
        const auto off = accumulate_window(stream, 0, 100, geo, PolaritySelect::off_only);
        CHECK(on.total() == 2);
        CHECK(off.total() == 1);
        CHECK(on.at(0, 0) == 1);
        CHECK(off.at(0, 0) == 1);
    }

    TEST_CASE("hot pixel is the maximum-count pixel with (y, x) tie-break") {
        EventStream stream;
        for (int i = 0; i < 10; ++i) stream.push_back({i, 4, 4, 1});
        stream.push_back({100, 0, 0, 1});
        sort_stream(stream);
        CHECK(hot_pixel(stream, std::nullopt) == std::make_pair(4, 4));

        // Tie between (x=3, y=5) and (x=2, y=7): smaller y wins.
        EventStream tie = {{0, 3, 5, 1}, {1, 3, 5, 0}, {2, 2, 7, 1}, {3, 2, 7, 0}};
        sort_stream(tie);
        CHECK(hot_pixel(tie, std::nullopt) == std::make_pair(3, 5));
    }

    TEST_CASE("hot pixel maximizes the count over every pixel") {
        SensorGeometry geo{6, 6};
        Rng rng(8);
        for (int t = 0; t < 50; ++t) {
            const auto stream = random_stream(80, 10'000, geo, rng);
            const auto [hx, hy] = hot_pixel(stream, std::nullopt);
            const auto count_at = [&](int x, int y) {
                return std::count_if(stream.begin(), stream.end(), [&](const Event& e) {
                    return e.x == x && e.y == y;
                });
            };
            const auto best = count_at(hx, hy);
            for (int y = 0; y < geo.height; ++y)
                for (int x = 0; x < geo.width; ++x) CHECK(count_at(x, y) <= best);
        }
    }

    TEST_CASE("hot pixel restricted to an empty region raises no-signal") {
        EventStream stream = {{0, 5, 5, 1}};
        const BoundingBox roi{0, 0, 2, 2};
        CHECK_THROWS_AS(hot_pixel(stream, roi), NoSignalError);
        CHECK_THROWS_AS(hot_pixel({}, std::nullopt), NoSignalError);
    }

    TEST_CASE("pixel_events extracts one pixel in time order") {
        EventStream stream = {{0, 1, 1, 1}, {5, 2, 2, 0}, {10, 1, 1, 0}};
        sort_stream(stream);
        const auto events = pixel_events(stream, 1, 1);
        REQUIRE(events.size() == 2);
        CHECK(events[0].t_us == 0);
        CHECK(events[1].t_us == 10);
        CHECK(events[1].polarity == 0);
    }
}

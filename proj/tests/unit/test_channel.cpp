#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "evlink/channel.hpp"
#include "evlink/errors.hpp"
#include "evlink/rng.hpp"

using namespace evlink;

namespace {

PulseString ps(const std::string& s, std::int64_t slot_us = 100) {
    PulseString p;
    p.slot_us = slot_us;
    for (char c : s) p.slots.push_back(c == '1' ? 1 : 0);
    return p;
}

SceneSpec small_scene(const std::string& preset, const PulseString& pulses) {
    SceneSpec s;
    s.geometry = {8, 8};
    s.object_mask = PixelMask::from_rect({2, 2, 4, 4});
    s.surface = surface_preset(preset);
    s.transmitter = {pulses, 4.0, 1.0};
    return s;
}

}  // namespace

TEST_SUITE("channel") {
    TEST_CASE("waveform_to_signal maps slots to levels") {
        CHECK(waveform_to_signal({ps("10"), 2.0, 1.0}).samples == std::vector<double>{2.0, 1.0});
        const auto flat = waveform_to_signal({ps("0000"), 2.0, 1.0});
        CHECK(std::all_of(flat.samples.begin(), flat.samples.end(),
                          [](double v) { return v == 1.0; }));
        const auto alt = waveform_to_signal({ps("1010"), 2.0, 1.0});
        CHECK(alt.samples == std::vector<double>{2.0, 1.0, 2.0, 1.0});
        CHECK(alt.duration_us() == doctest::Approx(400.0));
        CHECK_THROWS_AS(waveform_to_signal({ps(""), 2.0, 1.0}), std::invalid_argument);
    }

    TEST_CASE("reflect is identity for a perfect specular surface") {
        SurfaceProfile s;
        s.reflectivity = 1.0;
        s.gloss = 1.0;
        IntensitySignal in;
        in.samples = {1.0, 2.0, 0.5, 3.0};
        CHECK(reflect(in, s).samples == in.samples);

        s.reflectivity = 0.5;
        const auto half = reflect(in, s);
        for (std::size_t i = 0; i < in.samples.size(); ++i)
            CHECK(half.samples[i] == doctest::Approx(in.samples[i] * 0.5));
    }

    TEST_CASE("a multipath tap echoes a delayed copy onto a step") {
        SurfaceProfile s;
        s.reflectivity = 1.0;
        s.gloss = 1.0;
        s.taps = {{200, 0.3}};
        // Step from 0 to 1; two leading zero slots give the tap history.
        IntensitySignal in;
        in.samples = {0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        const auto out = reflect(in, s);
        CHECK(out.samples[2] == doctest::Approx(1.0));  // echo still sees 0
        CHECK(out.samples[3] == doctest::Approx(1.0));
        CHECK(out.samples[4] == doctest::Approx(1.3));  // echo of the step lands
        CHECK(out.samples[6] == doctest::Approx(1.3));
    }

    TEST_CASE("reflect is linear in the input") {
        Rng rng(5);
        SurfaceProfile s;
        s.reflectivity = 0.7;
        s.gloss = 0.4;
        s.taps = {{200, 0.2}, {500, 0.1}};
        IntensitySignal in;
        for (int i = 0; i < 64; ++i) in.samples.push_back(rng.uniform() * 3.0);
        const auto base = reflect(in, s);
        IntensitySignal scaled = in;
        for (auto& v : scaled.samples) v *= 2.5;
        const auto out = reflect(scaled, s);
        for (std::size_t i = 0; i < in.samples.size(); ++i)
            CHECK(out.samples[i] == doctest::Approx(base.samples[i] * 2.5));
    }

    TEST_CASE("energy bound holds when gains sum below one") {
        Rng rng(6);
        SurfaceProfile s;
        s.reflectivity = 0.6;
        s.gloss = 0.3;
        s.taps = {{100, 0.2}, {300, 0.2}};  // 0.6 + 0.4 = 1
        IntensitySignal in;
        for (int i = 0; i < 256; ++i) in.samples.push_back(rng.uniform() * 5.0);
        const auto out = reflect(in, s);
        const double in_peak = *std::max_element(in.samples.begin(), in.samples.end());
        const double out_peak = *std::max_element(out.samples.begin(), out.samples.end());
        CHECK(out_peak <= in_peak + 1e-9);
    }

    TEST_CASE("surface validation rejects bad profiles") {
        SurfaceProfile s;
        s.reflectivity = 1.2;
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s = SurfaceProfile{};
        s.taps = {{100, 0.7}, {200, 0.7}};
        CHECK_THROWS_AS(s.validate(), ConfigError);
        s = SurfaceProfile{};
        s.taps = {{-5, 0.1}};
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }

    TEST_CASE("square_wave_signal supports fractional half periods") {
        const auto sig = square_wave_signal(40'000.0, 1000, 2.0, 1.0);
        CHECK(sig.slot_us == doctest::Approx(12.5));
        CHECK(sig.samples.size() == 80);
        CHECK(sig.samples[0] == 2.0);
        CHECK(sig.samples[1] == 1.0);
    }

    TEST_CASE("an absorptive surface leaves object pixels flat") {
        SceneSpec scene = small_scene("foam", ps("110010"));
        scene.ambient = {};  // all-zero ambient
        const auto field = compose_scene(scene, 600, 1);
        const auto& sig = field.at({3, 3});
        CHECK(std::adjacent_find(sig.samples.begin(), sig.samples.end(),
                                 std::not_equal_to<>()) == sig.samples.end());
    }

    TEST_CASE("a mirror-like surface scales the transmitter signal") {
        SceneSpec scene = small_scene("mirror", ps("10"));
        scene.ambient = {};
        const auto field = compose_scene(scene, 400, 1);
        const auto& sig = field.at({2, 2});
        REQUIRE(sig.samples.size() == 4);
        CHECK(sig.samples[0] == doctest::Approx(0.95 * 4.0));
        CHECK(sig.samples[1] == doctest::Approx(0.95 * 1.0));
        // Background pixel carries ambient only (zero here).
        CHECK(field.at({0, 0}).samples == std::vector<double>(4, 0.0));
    }

    TEST_CASE("the transmitter loops to fill the scene duration") {
        SceneSpec scene = small_scene("mirror", ps("10"));
        scene.ambient = {};
        const auto sig = tiled_transmitter_signal(scene.transmitter, 1000);
        REQUIRE(sig.samples.size() == 10);
        for (std::size_t i = 0; i < sig.samples.size(); ++i)
            CHECK(sig.samples[i] == (i % 2 == 0 ? 4.0 : 1.0));
    }

    TEST_CASE("scene composition is deterministic per seed") {
        SceneSpec scene = small_scene("ball", ps("1010"));
        scene.ambient = {1.0, 120.0, 0.2, 0.1};
        const auto f1 = compose_scene(scene, 2000, 42);
        const auto f2 = compose_scene(scene, 2000, 42);
        const auto f3 = compose_scene(scene, 2000, 43);
        CHECK(f1.at({3, 3}).samples == f2.at({3, 3}).samples);
        CHECK(f1.at({3, 3}).samples != f3.at({3, 3}).samples);
        // Ambient noise floor keeps the log finite.
        for (double v : f1.at({0, 0}).samples) CHECK(v > 0.0);
    }

    TEST_CASE("lazy scene simulation matches the materialized field") {
        SceneSpec scene = small_scene("ball", ps("10100100"));
        scene.ambient = {0.5, 120.0, 0.1, 0.02};
        SensorBiases biases;
        biases.background_rate_hz = 50.0;
        const std::int64_t duration = 80'000;
        const auto lazy = simulate_scene(scene, biases, duration, std::nullopt, 9);
        const auto eager =
            simulate_sensor(compose_scene(scene, duration, 9), biases, scene.geometry,
                            std::nullopt, 9);
        CHECK(lazy == eager);

        const BoundingBox roi{2, 2, 3, 3};
        const auto lazy_roi = simulate_scene(scene, biases, duration, roi, 9);
        const auto eager_roi =
            simulate_sensor(compose_scene(scene, duration, 9), biases, scene.geometry, roi, 9);
        CHECK(lazy_roi == eager_roi);
    }

    TEST_CASE("a pure-ambient scene simulates without a transmitter") {
        SceneSpec scene;
        scene.geometry = {4, 4};
        scene.object_mask = PixelMask{};  // empty: ambient only
        scene.surface = surface_preset("mirror");
        scene.ambient = {1.0, 120.0, 0.0, 0.0};
        scene.transmitter = {PulseString{}, 4.0, 1.0};
        SensorBiases biases;
        CHECK(simulate_scene(scene, biases, 10'000, std::nullopt, 1).empty());
        biases.background_rate_hz = 5000.0;
        CHECK(!simulate_scene(scene, biases, 100'000, std::nullopt, 1).empty());
    }

    TEST_CASE("presets cover the six objects") {
        for (const auto& name : surface_preset_names()) {
            const auto p = surface_preset(name);
            CHECK(p.label == name);
            CHECK_NOTHROW(p.validate());
        }
        CHECK(surface_preset("foam").reflectivity == 0.0);
        CHECK(surface_preset("mirror").gloss == 1.0);
        CHECK_THROWS_AS(surface_preset("velvet"), ConfigError);
    }
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <unistd.h>

#include "evlink/config.hpp"
#include "evlink/errors.hpp"
#include "evlink/io.hpp"
#include "evlink/rng.hpp"

using namespace evlink;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("evlink_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("event csv round trips and keeps the header") {
        TempDir tmp;
        Rng rng(1);
        EventStream stream;
        for (int i = 0; i < 200; ++i)
            stream.push_back({static_cast<std::int64_t>(rng.next_u64() % 100000),
                              static_cast<int>(rng.next_u64() % 32),
                              static_cast<int>(rng.next_u64() % 32), rng.coin_bit()});
        sort_stream(stream);
        const auto p = tmp.path / "events.csv";
        write_event_csv(p, stream);
        CHECK(read_event_csv(p) == stream);

        std::ifstream in(p);
        std::string header;
        std::getline(in, header);
        CHECK(header == "t_us,x,y,p");

        // Unsorted rows are rejected.
        const auto bad = tmp.path / "bad.csv";
        write_text_atomic(bad, "t_us,x,y,p\n100,0,0,1\n50,0,0,0\n");
        CHECK_THROWS_AS(read_event_csv(bad), Error);
    }

    TEST_CASE("pulse string file carries the slot header") {
        TempDir tmp;
        PulseString p;
        p.slot_us = 100;
        p.slots = {1, 0, 1, 1, 0, 0};
        const auto path = tmp.path / "pulse.txt";
        write_pulse_string(path, p);

        std::ifstream in(path);
        std::string first;
        std::getline(in, first);
        CHECK(first == "# slot_us=100");

        const auto q = read_pulse_string(path);
        CHECK(q.slot_us == p.slot_us);
        CHECK(q.slots == p.slots);
    }

    TEST_CASE("frame pgm round trips counts") {
        TempDir tmp;
        EventFrame f;
        f.width = 3;
        f.height = 2;
        f.counts = {0, 5, 260, 1, 0, 7};
        f.t_frame_us = 1000;
        const auto path = tmp.path / "frame.pgm";
        write_frame_pgm(path, f);
        const auto g = read_frame_pgm(path);
        CHECK(g.width == f.width);
        CHECK(g.height == f.height);
        CHECK(g.counts == f.counts);
    }

    TEST_CASE("packet files round trip odd lengths") {
        TempDir tmp;
        Rng rng(2);
        std::vector<Bits> packets = {random_bits(64, rng), random_bits(5, rng),
                                     random_bits(1, rng), Bits{}};
        packets[3] = random_bits(12, rng);
        const auto path = tmp.path / "packets.txt";
        write_packets(path, packets);
        CHECK(read_packets(path) == packets);
        CHECK(packet_to_hex(bits_from_string("11111110")) == "fe");
        CHECK(packet_to_hex(bits_from_string("10110")) == "b0");
    }

    TEST_CASE("link report json uses the canonical field names") {
        LinkReport r;
        r.packet_error_rate = 0.25;
        r.total_packets = 100;
        r.avg_hamming = 0.5;
        r.max_hamming = 4;
        r.bit_error_rate = 0.01;
        r.achieved_rate_bps = 1454.54;
        r.lost_count = 3;
        const std::string j = link_report_json(r);
        for (const char* key :
             {"packet_error_rate", "total_packets", "avg_hamming", "max_hamming",
              "bit_error_rate", "achieved_rate_bps", "lost_count"})
            CHECK(j.find(std::string("\"") + key + "\"") != std::string::npos);
        CHECK(link_report_csv_row(r).rfind("0.25,100,0.5,4,0.01,", 0) == 0);
    }

    TEST_CASE("ini parser handles sections, comments, and types") {
        std::istringstream in(
            "# comment\n"
            "[run]\n"
            "scheme = npulse2   ; trailing\n"
            "packets = 25\n"
            "\n"
            "[ambient]\n"
            "sigma = 0.125\n"
            "flag = true\n");
        const Ini ini = Ini::parse(in);
        CHECK(ini.get("run", "scheme", "") == "npulse2");
        CHECK(ini.get_int("run", "packets", 0) == 25);
        CHECK(ini.get_double("ambient", "sigma", 0.0) == doctest::Approx(0.125));
        CHECK(ini.get_bool("ambient", "flag", false));
        CHECK(ini.get("missing", "key", "fallback") == "fallback");
        CHECK_THROWS_AS(Ini::parse(*std::make_unique<std::istringstream>("no equals")),
                        ConfigError);
    }

    TEST_CASE("experiment config reads scheme, scene, and sensor sections") {
        std::istringstream in(
            "[run]\n"
            "scheme = npulse4\n"
            "packets = 10\n"
            "seeds = 3,4\n"
            "[scene]\n"
            "width = 12\n"
            "height = 10\n"
            "object = 2,2,4,4\n"
            "preset = mirror\n"
            "[ambient]\n"
            "dc = 0.7\n"
            "sigma = 0.01\n"
            "[sensor]\n"
            "diff_on = 0.25\n");
        const auto cfg = experiment_config_from_ini(Ini::parse(in));
        CHECK(cfg.scheme == Scheme::npulse4);
        CHECK(cfg.packet_count == 10);
        CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
        CHECK(cfg.geometry.width == 12);
        CHECK(cfg.surface_preset_name == "mirror");
        CHECK(cfg.ambient.dc_level == doctest::Approx(0.7));
        CHECK(cfg.biases.diff_on == doctest::Approx(0.25));
    }

    TEST_CASE("explicit surface keys override the preset") {
        std::istringstream in(
            "[scene]\n"
            "reflectivity = 0.4\n"
            "gloss = 0.3\n"
            "taps = 200:0.1,500:0.05\n");
        const auto cfg = experiment_config_from_ini(Ini::parse(in));
        CHECK(cfg.surface_preset_name.empty());
        CHECK(cfg.resolved_surface().reflectivity == doctest::Approx(0.4));
        REQUIRE(cfg.resolved_surface().taps.size() == 2);
        CHECK(cfg.resolved_surface().taps[1].delay_us == 500);
    }

    TEST_CASE("annotation csv round trips label and box") {
        TempDir tmp;
        const std::vector<Annotation> rows = {{"ball", {8, 8, 8, 8}},
                                              {"detected_roi", {7, 8, 9, 8}}};
        const auto path = tmp.path / "annotations.csv";
        write_annotations(path, rows);
        const auto got = read_annotations(path);
        REQUIRE(got.size() == 2);
        CHECK(got[0].label == "ball");
        CHECK(got[0].box == rows[0].box);
        CHECK(got[1].box == rows[1].box);
    }

    TEST_CASE("decode log serializes runs and anomalies") {
        DecodeLog log;
        log.runs = {{0, 8}, {20, 1}};
        log.syncs = {{0, 8}};
        log.anomalies = {{20, 5}};
        const std::string j = decode_log_json(log);
        CHECK(j.find("\"sync_positions\"") != std::string::npos);
        CHECK(j.find("\"anomalies\"") != std::string::npos);
    }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "evlink/channel.hpp"
#include "evlink/codec.hpp"
#include "evlink/sensor.hpp"
#include "evlink/types.hpp"

namespace evlink {

// Minimal INI-style reader: [section] headers, key = value lines,
// '#' or ';' comments, whitespace trimmed.
class Ini {
public:
    static Ini parse(std::istream& in);
    static Ini parse_file(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

enum class Scheme { ook, npulse2, npulse4, npulse4_adaptive };

Scheme scheme_from_string(const std::string& name);
std::string scheme_to_string(Scheme s);

enum class PacketSource { fixed, combos64, random };

// Everything one experiment needs: scheme and timing, scene and surface,
// sensor biases, packet source, seeds, output location.
struct ExperimentConfig {
    Scheme scheme = Scheme::npulse4_adaptive;
    SchemeConfig scheme_cfg;

    SensorGeometry geometry{24, 24};
    BoundingBox object_rect{8, 8, 8, 8};
    int object_disc_radius = 0;  // when positive, a disc mask replaces the rect
    int object_disc_cx = 0;
    int object_disc_cy = 0;
    std::string surface_preset_name = "ball";
    SurfaceProfile surface;      // used when surface_preset_name is empty
    AmbientLight ambient{0.5, 120.0, 0.0, 0.02};  // dark-room noise floor
    double tx_on_level = 4.0;
    double tx_off_level = 1.0;

    SensorBiases biases;

    // Recording length for rate sweeps; packet-driven runs derive their
    // duration from the encoded stream instead.
    std::int64_t duration_us = 3'000'000;
    PacketSource source = PacketSource::random;
    int packet_count = 100;
    int packet_length = 64;
    Bits fixed_bits;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
    std::int64_t lead_in_us = 600;  // idle slots before the first sync
    bool hardware_roi = false;      // re-simulate with the detected RoI

    std::int64_t accumulation_us = 100'000;
    double fps = 10.0;
    int detect_threshold = 150;  // noise-floor pixels collect a few counts
    int detect_cap = 5;

    PixelMask object_mask() const;
    SurfaceProfile resolved_surface() const;
    SceneSpec scene(const PulseString& pulses) const;
    void validate() const;
};

ExperimentConfig experiment_config_from_ini(const Ini& ini);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace evlink

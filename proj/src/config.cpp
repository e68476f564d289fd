#include "evlink/config.hpp"

#include <fstream>
#include <sstream>

#include "evlink/errors.hpp"

namespace evlink {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

Ini Ini::parse(std::istream& in) {
    Ini ini;
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key in line: " + line);
        ini.sections_[section][key] = value;
    }
    return ini;
}

Ini Ini::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return parse(in);
}

bool Ini::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Ini::get(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::int64_t Ini::get_int(const std::string& section, const std::string& key,
                          std::int64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoll(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("expected integer for " + section + "." + key);
    }
}

double Ini::get_double(const std::string& section, const std::string& key,
                       double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("expected number for " + section + "." + key);
    }
}

bool Ini::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected boolean for " + section + "." + key);
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "ook") return Scheme::ook;
    if (name == "npulse2") return Scheme::npulse2;
    if (name == "npulse4") return Scheme::npulse4;
    if (name == "npulse4_adaptive" || name == "adaptive") return Scheme::npulse4_adaptive;
    throw ConfigError("unknown scheme: " + name);
}

std::string scheme_to_string(Scheme s) {
    switch (s) {
        case Scheme::ook: return "ook";
        case Scheme::npulse2: return "npulse2";
        case Scheme::npulse4: return "npulse4";
        case Scheme::npulse4_adaptive: return "npulse4_adaptive";
    }
    return "unknown";
}

PixelMask ExperimentConfig::object_mask() const {
    if (object_disc_radius > 0)
        return PixelMask::from_disc(object_disc_cx, object_disc_cy, object_disc_radius);
    return PixelMask::from_rect(object_rect);
}

SurfaceProfile ExperimentConfig::resolved_surface() const {
    return surface_preset_name.empty() ? surface : surface_preset(surface_preset_name);
}

SceneSpec ExperimentConfig::scene(const PulseString& pulses) const {
    SceneSpec s;
    s.geometry = geometry;
    s.object_mask = object_mask();
    s.surface = resolved_surface();
    s.ambient = ambient;
    s.transmitter = {pulses, tx_on_level, tx_off_level};
    return s;
}

void ExperimentConfig::validate() const {
    scheme_cfg.validate();
    biases.validate();
    ambient.validate();
    resolved_surface().validate();
    if (!object_mask().inside(geometry) && !object_mask().empty())
        throw ConfigError("object mask outside scene geometry");
    if (packet_count <= 0) throw ConfigError("packet_count must be positive");
    if (packet_length <= 0) throw ConfigError("packet_length must be positive");
    if (scheme == Scheme::npulse4 || scheme == Scheme::npulse4_adaptive)
        if (packet_length % 2 != 0)
            throw ConfigError("4-level schemes need an even packet_length");
    if (source == PacketSource::fixed && fixed_bits.empty())
        throw ConfigError("fixed packet source needs packet_bits");
    if (seeds.empty()) throw ConfigError("at least one seed required");
    if (tx_on_level <= tx_off_level || tx_off_level < 0.0)
        throw ConfigError("transmitter needs on_level > off_level >= 0");
    if (lead_in_us < 0) throw ConfigError("lead_in_us must be non-negative");
}

ExperimentConfig experiment_config_from_ini(const Ini& ini) {
    ExperimentConfig cfg;

    cfg.scheme = scheme_from_string(ini.get("run", "scheme", "npulse4_adaptive"));
    const std::string source = ini.get("run", "packet_source", "random");
    if (source == "random")
        cfg.source = PacketSource::random;
    else if (source == "combos64")
        cfg.source = PacketSource::combos64;
    else if (source == "fixed")
        cfg.source = PacketSource::fixed;
    else
        throw ConfigError("unknown packet_source: " + source);
    cfg.packet_count = static_cast<int>(ini.get_int("run", "packets", cfg.packet_count));
    cfg.packet_length = static_cast<int>(ini.get_int("run", "packet_length", cfg.packet_length));
    if (ini.has("run", "packet_bits"))
        cfg.fixed_bits = bits_from_string(ini.get("run", "packet_bits", ""));
    cfg.duration_us = ini.get_int("run", "duration_us", cfg.duration_us);
    cfg.out_dir = ini.get("run", "out", cfg.out_dir);
    cfg.lead_in_us = ini.get_int("run", "lead_in_us", cfg.lead_in_us);
    cfg.hardware_roi = ini.get_bool("run", "hardware_roi", cfg.hardware_roi);
    if (ini.has("run", "seeds")) {
        cfg.seeds.clear();
        std::istringstream in(ini.get("run", "seeds", ""));
        std::string item;
        while (std::getline(in, item, ','))
            cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(trim(item))));
    }

    cfg.scheme_cfg.slot_us = ini.get_int("scheme", "slot_us", cfg.scheme_cfg.slot_us);
    cfg.scheme_cfg.guard_us = ini.get_int("scheme", "guard_us", cfg.scheme_cfg.guard_us);
    cfg.scheme_cfg.sync2_pulses =
        static_cast<int>(ini.get_int("scheme", "sync2_pulses", cfg.scheme_cfg.sync2_pulses));
    cfg.scheme_cfg.sync00_pulses =
        static_cast<int>(ini.get_int("scheme", "sync00_pulses", cfg.scheme_cfg.sync00_pulses));
    cfg.scheme_cfg.sync11_pulses =
        static_cast<int>(ini.get_int("scheme", "sync11_pulses", cfg.scheme_cfg.sync11_pulses));

    cfg.tx_on_level = ini.get_double("transmitter", "on_level", cfg.tx_on_level);
    cfg.tx_off_level = ini.get_double("transmitter", "off_level", cfg.tx_off_level);
    cfg.scheme_cfg.slot_us = ini.get_int("transmitter", "slot_us", cfg.scheme_cfg.slot_us);

    cfg.geometry.width = static_cast<int>(ini.get_int("scene", "width", cfg.geometry.width));
    cfg.geometry.height = static_cast<int>(ini.get_int("scene", "height", cfg.geometry.height));
    if (ini.has("scene", "object")) {
        const auto parts = split(ini.get("scene", "object", ""), ',');
        if (parts.size() != 4) throw ConfigError("scene.object needs x,y,w,h");
        cfg.object_rect = {std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
                           std::stoi(parts[3])};
    }
    if (ini.has("scene", "object_disc")) {
        const auto parts = split(ini.get("scene", "object_disc", ""), ',');
        if (parts.size() != 3) throw ConfigError("scene.object_disc needs cx,cy,r");
        cfg.object_disc_cx = std::stoi(parts[0]);
        cfg.object_disc_cy = std::stoi(parts[1]);
        cfg.object_disc_radius = std::stoi(parts[2]);
    }
    cfg.surface_preset_name = ini.get("scene", "preset", cfg.surface_preset_name);
    if (cfg.surface_preset_name.empty() || ini.has("scene", "reflectivity")) {
        SurfaceProfile s;
        s.label = ini.get("scene", "label", "custom");
        s.reflectivity = ini.get_double("scene", "reflectivity", 1.0);
        s.gloss = ini.get_double("scene", "gloss", 1.0);
        s.matte_spread_us = ini.get_int("scene", "matte_spread_us", s.matte_spread_us);
        if (ini.has("scene", "taps")) {
            for (const auto& tap : split(ini.get("scene", "taps", ""), ',')) {
                if (tap.empty()) continue;
                const auto colon = tap.find(':');
                if (colon == std::string::npos) throw ConfigError("taps need delay:gain pairs");
                s.taps.push_back(
                    {std::stoll(tap.substr(0, colon)), std::stod(tap.substr(colon + 1))});
            }
        }
        cfg.surface = s;
        cfg.surface_preset_name.clear();
    }

    cfg.ambient.dc_level = ini.get_double("ambient", "dc", cfg.ambient.dc_level);
    cfg.ambient.flicker_hz = ini.get_double("ambient", "flicker_hz", cfg.ambient.flicker_hz);
    cfg.ambient.flicker_amplitude =
        ini.get_double("ambient", "flicker_amplitude", cfg.ambient.flicker_amplitude);
    cfg.ambient.shot_noise_sigma = ini.get_double("ambient", "sigma", cfg.ambient.shot_noise_sigma);

    cfg.biases.diff_on = ini.get_double("sensor", "diff_on", cfg.biases.diff_on);
    cfg.biases.diff_off = ini.get_double("sensor", "diff_off", cfg.biases.diff_off);
    cfg.biases.f0_cutoff_hz = ini.get_double("sensor", "f0_cutoff_hz", cfg.biases.f0_cutoff_hz);
    cfg.biases.hpf_cutoff_hz = ini.get_double("sensor", "hpf_cutoff_hz", cfg.biases.hpf_cutoff_hz);
    cfg.biases.refractory_us = ini.get_int("sensor", "refractory_us", cfg.biases.refractory_us);
    cfg.biases.background_rate_hz =
        ini.get_double("sensor", "background_rate_hz", cfg.biases.background_rate_hz);

    cfg.accumulation_us = ini.get_int("framing", "accumulation_us", cfg.accumulation_us);
    cfg.fps = ini.get_double("framing", "fps", cfg.fps);
    cfg.detect_threshold = static_cast<int>(ini.get_int("detect", "threshold", cfg.detect_threshold));
    cfg.detect_cap = static_cast<int>(ini.get_int("detect", "cap", cfg.detect_cap));

    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return experiment_config_from_ini(Ini::parse_file(path));
}

}  // namespace evlink

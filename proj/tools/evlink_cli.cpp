// Command-line front end for the event-camera optical link simulator.
// Subcommands mirror the pipeline stages: encode -> modulate -> simulate ->
// frames/roi -> decode -> evaluate, plus end-to-end run and sweep.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evlink/channel.hpp"
#include "evlink/codec.hpp"
#include "evlink/config.hpp"
#include "evlink/demod.hpp"
#include "evlink/detect.hpp"
#include "evlink/errors.hpp"
#include "evlink/framing.hpp"
#include "evlink/harness.hpp"
#include "evlink/io.hpp"
#include "evlink/metrics.hpp"
#include "evlink/rng.hpp"
#include "evlink/sensor.hpp"

namespace fs = std::filesystem;
using namespace evlink;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

std::optional<BoundingBox> parse_box(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto parts = split_csv(s);
    if (parts.size() != 4) throw ConfigError("box needs x,y,w,h");
    return BoundingBox{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
                       std::stoi(parts[3])};
}

ExperimentConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return load_experiment_config(path);
}

int cmd_encode(const std::string& scheme_name, const std::string& bits_str, bool combos,
               int random_count, int length, std::uint64_t seed, const std::string& out) {
    SchemeConfig cfg;
    const Scheme scheme = scheme_from_string(scheme_name);

    std::vector<Bits> packets;
    if (combos) {
        packets.push_back(combos64_packet());
    } else if (!bits_str.empty()) {
        packets.push_back(bits_from_string(bits_str));
    } else {
        Rng rng(seed);
        for (int i = 0; i < std::max(random_count, 1); ++i)
            packets.push_back(random_bits(static_cast<std::size_t>(length), rng));
    }

    PulseString stream;
    stream.slot_us = cfg.slot_us;
    for (const auto& p : packets) {
        PulseString enc;
        switch (scheme) {
            case Scheme::ook: enc = encode_ook(make_ook_id_frame(p, cfg), cfg); break;
            case Scheme::npulse2: enc = encode_npulse2(p, cfg); break;
            case Scheme::npulse4: enc = encode_npulse4(p, cfg); break;
            case Scheme::npulse4_adaptive: {
                auto [e, mode] = encode_npulse4_adaptive(p, cfg);
                enc = std::move(e);
                std::cout << "packet " << bits_to_string(p) << " mode "
                          << (mode == AdaptiveMode::swapped_11 ? "swapped_11" : "default_00")
                          << "\n";
                break;
            }
        }
        stream.slots.insert(stream.slots.end(), enc.slots.begin(), enc.slots.end());
    }
    write_pulse_string(out, stream);
    std::cout << "wrote " << stream.slots.size() << " slots (" << airtime_us(stream)
              << " us) to " << out << "\n";
    return 0;
}

int cmd_modulate(const std::string& in, double on, double off, const std::string& out) {
    const PulseString p = read_pulse_string(in);
    const IntensitySignal sig = waveform_to_signal({p, on, off});
    std::ostringstream csv;
    csv << "t_us,intensity\n";
    for (std::size_t i = 0; i < sig.samples.size(); ++i)
        csv << sig.sample_time_us(i) << ',' << sig.samples[i] << '\n';
    write_text_atomic(out, csv.str());
    std::cout << "wrote " << sig.samples.size() << " samples to " << out << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out) {
    ExperimentConfig cfg = load_config_or_default(config_path);
    const std::uint64_t s = seed.value_or(cfg.seeds.front());
    const auto packets = make_packets(cfg, s);
    const PulseString tx = encode_stream(cfg, packets);
    const std::int64_t duration = airtime_us(tx);
    const EventStream events = simulate_scene(cfg.scene(tx), cfg.biases, duration, std::nullopt, s);
    write_event_csv(out, events);
    std::cout << "wrote " << events.size() << " events (" << duration << " us) to " << out << "\n";
    return 0;
}

int cmd_frames(const std::string& in, std::int64_t acc_us, double fps, int width, int height,
               std::int64_t duration_us, const std::string& polarity,
               const std::string& out_dir) {
    const EventStream events = read_event_csv(in);
    std::int64_t duration = duration_us;
    if (duration <= 0 && !events.empty()) duration = events.back().t_us + 1;
    const SensorGeometry geo{width, height};
    PolaritySelect select = PolaritySelect::both;
    if (polarity == "on")
        select = PolaritySelect::on_only;
    else if (polarity == "off")
        select = PolaritySelect::off_only;
    else if (polarity != "both")
        throw ConfigError("--polarity must be both, on, or off");
    const auto frames = periodic_frames(events, acc_us, fps, duration, geo, select);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::ostringstream name;
        name << "frame_" << i << ".pgm";
        write_frame_pgm(fs::path(out_dir) / name.str(), frames[i]);
    }
    std::cout << "wrote " << frames.size() << " frames to " << out_dir << "\n";
    return 0;
}

int cmd_roi(const std::string& in, int threshold, int cap, const std::string& format) {
    const EventFrame frame = read_frame_pgm(in);
    const auto box = largest_contour_bbox(binarize(frame, threshold, cap));
    if (!box) {
        std::cout << (format == "csv" ? "none\n" : "{\"roi\": null}\n");
        return 0;
    }
    if (format == "csv")
        std::cout << box->x << ',' << box->y << ',' << box->w << ',' << box->h << '\n';
    else
        std::cout << "{\"roi\": {\"x\": " << box->x << ", \"y\": " << box->y
                  << ", \"w\": " << box->w << ", \"h\": " << box->h << "}}\n";
    return 0;
}

int cmd_decode(const std::string& in, const std::string& pulse_file,
               const std::string& scheme_name, std::int64_t slot_us, const std::string& pixel,
               const std::string& roi_str, int packet_length, const std::string& id_set_csv,
               const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.scheme = scheme_from_string(scheme_name);
    cfg.scheme_cfg.slot_us = slot_us;
    cfg.packet_length = packet_length;

    // Bit-level path: decode a pulse-string file directly.
    if (!pulse_file.empty()) {
        const PulseString p = read_pulse_string(pulse_file);
        const SlotBits bits(p.slots.begin(), p.slots.end());
        DecodeLog log;
        const DecodedPackets packets = decode_slotbits(cfg.scheme, bits, cfg, &log);
        fs::create_directories(out_dir);
        write_packets(fs::path(out_dir) / "decoded_packets.txt", packets);
        write_decode_log(fs::path(out_dir) / "decode_log.json", log);
        for (const auto& pk : packets) std::cout << pk.size() << ' ' << packet_to_hex(pk) << '\n';
        return 0;
    }

    if (in.empty()) throw ConfigError("decode needs --in or --pulse-file");
    const EventStream events = read_event_csv(in);
    const auto roi = parse_box(roi_str);

    std::pair<int, int> hp;
    if (!pixel.empty()) {
        const auto parts = split_csv(pixel);
        if (parts.size() != 2) throw ConfigError("--pixel needs x,y");
        hp = {std::stoi(parts[0]), std::stoi(parts[1])};
    } else {
        hp = hot_pixel(events, roi);
    }

    EventStream selected = events;
    if (roi) {
        selected.clear();
        for (const auto& ev : events)
            if (roi->contains(ev.x, ev.y)) selected.push_back(ev);
    }

    const auto hp_events = pixel_events(selected, hp.first, hp.second);
    const SlotBits bits = sliding_demodulator(hp_events, slot_us);

    // ID-detection mode: report the best-matching candidate and stop.
    if (!id_set_csv.empty()) {
        std::vector<Bits> ids;
        for (const auto& s : split_csv(id_set_csv)) ids.push_back(bits_from_string(s));
        const Bits best = correlate_id(bits, ids, cfg.scheme_cfg);
        std::cout << "detected id " << bits_to_string(best) << "\n";
        return 0;
    }

    DecodeLog log;
    const DecodedPackets packets = decode_slotbits(cfg.scheme, bits, cfg, &log);

    fs::create_directories(out_dir);
    write_packets(fs::path(out_dir) / "decoded_packets.txt", packets);
    write_decode_log(fs::path(out_dir) / "decode_log.json", log);
    std::cout << "hot pixel (" << hp.first << ',' << hp.second << "), " << packets.size()
              << " packets decoded; artifacts in " << out_dir << "\n";
    for (const auto& p : packets) std::cout << p.size() << ' ' << packet_to_hex(p) << '\n';
    return 0;
}

int cmd_evaluate(const std::string& sent_path, const std::string& decoded_path,
                 std::int64_t elapsed_us, const std::string& format) {
    const auto sent = read_packets(sent_path);
    const auto decoded = read_packets(decoded_path);
    const LinkReport r = evaluate_link(sent, decoded, elapsed_us);
    if (format == "csv")
        std::cout << link_report_csv_header() << '\n' << link_report_csv_row(r) << '\n';
    else
        std::cout << link_report_json(r);
    return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& scheme_override, const std::string& out_override,
            const std::string& format) {
    ExperimentConfig cfg = load_config_or_default(config_path);
    if (seed) cfg.seeds = {*seed};
    if (!scheme_override.empty()) cfg.scheme = scheme_from_string(scheme_override);
    if (!out_override.empty()) cfg.out_dir = out_override;

    const ExperimentSummary s = run_experiment(cfg);
    if (format == "csv") {
        std::cout << "seed," << link_report_csv_header() << '\n';
        for (const auto& run : s.runs)
            std::cout << run.seed << ',' << link_report_csv_row(run.report) << '\n';
    } else {
        for (const auto& run : s.runs) {
            std::cout << "seed " << run.seed << (run.roi_fallback ? " [no RoI, full frame]" : "")
                      << "\n"
                      << link_report_json(run.report);
        }
    }
    std::cout << "PER mean " << s.per.mean << " stddev " << s.per.stddev << ", BER mean "
              << s.ber.mean << "; artifacts in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_csv, const std::string& out_override) {
    ExperimentConfig cfg = load_config_or_default(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    const auto values = split_csv(values_csv);
    const SweepTable table = sweep(cfg, sweep_parameter_from_string(param), values);
    std::ostringstream csv;
    csv << table.header << '\n';
    for (const auto& row : table.rows) csv << row << '\n';
    const fs::path out = fs::path(cfg.out_dir) / ("sweep_" + param + ".csv");
    write_text_atomic(out, csv.str());
    std::cout << csv.str();
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-camera optical wireless link simulator"};
    app.require_subcommand(1);

    std::string config_path, scheme = "npulse4_adaptive", out, format = "json", bits_str;
    std::string in, pixel, roi_str, sent_path, decoded_path, param, values_csv;
    std::string polarity = "both";
    std::string id_set_csv;
    bool combos = false;
    int random_count = 1, length = 64, width = 24, height = 24;
    int threshold = 50, cap = 5, packet_length = 64;
    std::int64_t slot_us = 100, acc_us = 100000, duration_us = 0, elapsed_us = 0;
    double fps = 10.0, on_level = 4.0, off_level = 1.0;
    std::uint64_t seed = 1;
    bool seed_set = false;

    auto* enc = app.add_subcommand("encode", "Encode packet bits into a pulse-string file");
    enc->add_option("--scheme", scheme, "ook|npulse2|npulse4|npulse4_adaptive");
    enc->add_option("--bits", bits_str, "explicit packet bits, e.g. 0101");
    enc->add_flag("--combos", combos, "use the 64-bit all-combinations packet");
    enc->add_option("--random", random_count, "number of random packets");
    enc->add_option("--length", length, "random packet bit length");
    enc->add_option("--seed", seed, "random packet seed");
    enc->add_option("--out", out, "output pulse-string file")->required();

    auto* mod = app.add_subcommand("modulate", "Expand a pulse string into a waveform preview CSV");
    mod->add_option("--in", in, "pulse-string file")->required();
    mod->add_option("--on", on_level, "on intensity level");
    mod->add_option("--off", off_level, "off intensity level");
    mod->add_option("--out", out, "output CSV")->required();

    auto* sim = app.add_subcommand("simulate", "Run transmitter+channel+sensor, write event CSV");
    sim->add_option("--config", config_path, "experiment config file");
    sim->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    sim->add_option("--out", out, "output event CSV")->required();

    auto* frm = app.add_subcommand("frames", "Accumulate an event CSV into periodic PGM frames");
    frm->add_option("--in", in, "event CSV")->required();
    frm->add_option("--acc-us", acc_us, "accumulation window, us");
    frm->add_option("--fps", fps, "frames per second");
    frm->add_option("--width", width, "sensor width");
    frm->add_option("--height", height, "sensor height");
    frm->add_option("--duration-us", duration_us, "stream duration (default: last event)");
    frm->add_option("--polarity", polarity, "both|on|off");
    frm->add_option("--out", out, "output directory")->required();

    auto* roi = app.add_subcommand("roi", "Detect the largest-contour bounding box in a frame");
    roi->add_option("--in", in, "frame PGM")->required();
    roi->add_option("--threshold", threshold, "binarization threshold (0-255 scale)");
    roi->add_option("--cap", cap, "count that saturates the grayscale");
    roi->add_option("--format", format, "json|csv");

    std::string pulse_file;
    auto* dec = app.add_subcommand("decode", "Demodulate and decode an event CSV");
    dec->add_option("--in", in, "event CSV");
    dec->add_option("--pulse-file", pulse_file, "decode a pulse-string file at bit level");
    dec->add_option("--scheme", scheme, "ook|npulse2|npulse4|npulse4_adaptive");
    dec->add_option("--slot-us", slot_us, "slot duration, us");
    dec->add_option("--pixel", pixel, "x,y demodulation pixel (default: hot pixel)");
    dec->add_option("--roi", roi_str, "x,y,w,h event filter");
    dec->add_option("--packet-length", packet_length, "payload bits (ook framing)");
    dec->add_option("--id-set", id_set_csv, "candidate IDs for detection, e.g. 0011,0101");
    dec->add_option("--out", out, "artifact directory")->required();

    auto* ev = app.add_subcommand("evaluate", "Score decoded packets against sent packets");
    ev->add_option("--sent", sent_path, "sent packets file")->required();
    ev->add_option("--decoded", decoded_path, "decoded packets file")->required();
    ev->add_option("--elapsed-us", elapsed_us, "elapsed time for rate accounting")->required();
    ev->add_option("--format", format, "json|csv");

    auto* run = app.add_subcommand("run", "End-to-end experiment from a config file");
    run->add_option("--config", config_path, "experiment config file");
    run->add_option("--seed", seed, "single-seed override")->each([&](const std::string&) { seed_set = true; });
    run->add_option("--scheme", scheme, "scheme override")->default_str("");
    run->add_option("--out", out, "output directory override");
    run->add_option("--format", format, "json|csv");

    auto* swp = app.add_subcommand("sweep", "Sweep one parameter over a value list");
    swp->add_option("--config", config_path, "experiment config file");
    swp->add_option("--param", param, "transmitter_hz|ambient_sigma|surface_preset|scheme")
        ->required();
    swp->add_option("--values", values_csv, "comma-separated values")->required();
    swp->add_option("--out", out, "output directory override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed())
            return cmd_encode(scheme, bits_str, combos, random_count, length, seed, out);
        if (mod->parsed()) return cmd_modulate(in, on_level, off_level, out);
        if (sim->parsed())
            return cmd_simulate(config_path,
                                seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt, out);
        if (frm->parsed())
            return cmd_frames(in, acc_us, fps, width, height, duration_us, polarity, out);
        if (roi->parsed()) return cmd_roi(in, threshold, cap, format);
        if (dec->parsed())
            return cmd_decode(in, pulse_file, scheme, slot_us, pixel, roi_str, packet_length,
                              id_set_csv, out);
        if (ev->parsed()) return cmd_evaluate(sent_path, decoded_path, elapsed_us, format);
        if (run->parsed())
            return cmd_run(config_path,
                           seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                           run->count("--scheme") ? scheme : "", out, format);
        if (swp->parsed()) return cmd_sweep(config_path, param, values_csv, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "evlink/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "evlink/channel.hpp"
#include "evlink/detect.hpp"
#include "evlink/errors.hpp"
#include "evlink/framing.hpp"
#include "evlink/io.hpp"
#include "evlink/rng.hpp"
#include "evlink/sensor.hpp"

namespace evlink {

namespace fs = std::filesystem;

namespace {

// Packet content stream is decoupled from the noise streams.
constexpr std::uint64_t kPacketSalt = 0x5041434B4554ULL;

}  // namespace

MetricStats metric_stats(const std::vector<double>& values) {
    MetricStats s;
    if (values.empty()) return s;
    s.min = values[0];
    s.max = values[0];
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    return s;
}

std::vector<Bits> make_packets(const ExperimentConfig& cfg, std::uint64_t seed) {
    std::vector<Bits> packets;
    packets.reserve(static_cast<std::size_t>(cfg.packet_count));
    Rng rng(avalanche64(seed ^ kPacketSalt));
    for (int i = 0; i < cfg.packet_count; ++i) {
        switch (cfg.source) {
            case PacketSource::fixed: packets.push_back(cfg.fixed_bits); break;
            case PacketSource::combos64: packets.push_back(combos64_packet()); break;
            case PacketSource::random:
                packets.push_back(random_bits(static_cast<std::size_t>(cfg.packet_length), rng));
                break;
        }
    }
    return packets;
}

PulseString encode_stream(const ExperimentConfig& cfg, const std::vector<Bits>& packets) {
    PulseString stream;
    stream.slot_us = cfg.scheme_cfg.slot_us;
    const auto lead_slots = static_cast<std::size_t>(cfg.lead_in_us / cfg.scheme_cfg.slot_us);
    stream.slots.assign(lead_slots, 0);
    for (const auto& p : packets) {
        PulseString enc;
        switch (cfg.scheme) {
            case Scheme::ook:
                enc = encode_ook(make_ook_id_frame(p, cfg.scheme_cfg), cfg.scheme_cfg);
                break;
            case Scheme::npulse2: enc = encode_npulse2(p, cfg.scheme_cfg); break;
            case Scheme::npulse4: enc = encode_npulse4(p, cfg.scheme_cfg); break;
            case Scheme::npulse4_adaptive:
                enc = encode_npulse4_adaptive(p, cfg.scheme_cfg).first;
                break;
        }
        stream.slots.insert(stream.slots.end(), enc.slots.begin(), enc.slots.end());
    }
    return stream;
}

DecodedPackets decode_slotbits(Scheme scheme, const SlotBits& bits, const ExperimentConfig& cfg,
                               DecodeLog* log) {
    switch (scheme) {
        case Scheme::ook: {
            const Bits window(bits.begin(), bits.end());
            return scan_payloads(window, cfg.scheme_cfg.ook_start, cfg.scheme_cfg.ook_stop,
                                 static_cast<std::size_t>(cfg.packet_length));
        }
        case Scheme::npulse2:
            return decode_npulse2(pulse_run_indices(bits), cfg.scheme_cfg, log);
        case Scheme::npulse4:
        case Scheme::npulse4_adaptive:
            return demodulate_bits_from_indices(
                pulse_run_indices(bits), 2,
                static_cast<std::size_t>(cfg.scheme_cfg.sync00_pulses),
                static_cast<std::size_t>(cfg.scheme_cfg.sync11_pulses), log);
    }
    return {};
}

namespace {

EventStream filter_roi(const EventStream& stream, const BoundingBox& roi) {
    EventStream out;
    out.reserve(stream.size());
    for (const auto& ev : stream)
        if (roi.contains(ev.x, ev.y)) out.push_back(ev);
    return out;
}

void write_run_artifacts(const ExperimentConfig& cfg, const RunResult& run,
                         const EventStream& events, const std::vector<EventFrame>& frames) {
    const fs::path dir = fs::path(cfg.out_dir) / ("seed_" + std::to_string(run.seed));
    fs::create_directories(dir);
    write_event_csv(dir / "events.csv", events);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::ostringstream name;
        name << "frame_" << i << ".pgm";
        write_frame_pgm(dir / "frames" / name.str(), frames[i]);
    }
    write_packets(dir / "sent_packets.txt", run.sent);
    write_packets(dir / "decoded_packets.txt", run.decoded);
    write_decode_log(dir / "decode_log.json", run.decode_log);
    write_link_report(dir / "report.json", run.report);

    // Synthetic ground truth plus the detection, for IoU scoring.
    std::vector<Annotation> boxes;
    boxes.push_back({cfg.resolved_surface().label, cfg.object_mask().tight_bbox()});
    if (run.roi) boxes.push_back({"detected_roi", *run.roi});
    write_annotations(dir / "annotations.csv", boxes);
}

}  // namespace

RunResult run_experiment_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                              bool write_artifacts) {
    cfg.validate();

    RunResult run;
    run.seed = seed;
    run.sent = make_packets(cfg, seed);

    const PulseString tx = encode_stream(cfg, run.sent);
    run.elapsed_us = airtime_us(tx);

    const SceneSpec scene = cfg.scene(tx);
    const EventStream events = simulate_scene(scene, cfg.biases, run.elapsed_us, std::nullopt, seed);
    run.event_count = static_cast<std::int64_t>(events.size());

    // RoI refinement from the densest frame.
    std::vector<EventFrame> frames =
        periodic_frames(events, cfg.accumulation_us, cfg.fps, run.elapsed_us, cfg.geometry);
    if (frames.empty())
        frames.push_back(accumulate_window(events, 0, run.elapsed_us, cfg.geometry));
    const auto densest =
        std::max_element(frames.begin(), frames.end(),
                         [](const EventFrame& a, const EventFrame& b) { return a.total() < b.total(); });
    run.roi = largest_contour_bbox(binarize(*densest, cfg.detect_threshold, cfg.detect_cap));
    run.roi_fallback = !run.roi.has_value();

    EventStream roi_events;
    if (run.roi && cfg.hardware_roi)
        roi_events = simulate_scene(scene, cfg.biases, run.elapsed_us, run.roi, seed);
    else if (run.roi)
        roi_events = filter_roi(events, *run.roi);
    else
        roi_events = events;  // fall back to the full frame

    try {
        const auto hot = hot_pixel(roi_events, std::nullopt);
        run.hot = hot;
        const auto hp_events = pixel_events(roi_events, hot.first, hot.second);
        const SlotBits bits = sliding_demodulator(hp_events, cfg.scheme_cfg.slot_us);
        run.decoded = decode_slotbits(cfg.scheme, bits, cfg, &run.decode_log);
    } catch (const NoSignalError&) {
        // nothing decodable anywhere (absorptive surface, dark scene)
    }

    run.report = evaluate_link(run.sent, run.decoded, run.elapsed_us);
    if (write_artifacts) write_run_artifacts(cfg, run, events, frames);
    return run;
}

namespace {

std::string summary_json(const ExperimentConfig& cfg, const ExperimentSummary& s);

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg, bool write_artifacts) {
    ExperimentSummary summary;
    std::vector<double> per, ber, avg_ham, rate;
    for (const auto seed : cfg.seeds) {
        RunResult run = run_experiment_seed(cfg, seed, write_artifacts);
        per.push_back(run.report.packet_error_rate);
        ber.push_back(run.report.bit_error_rate);
        avg_ham.push_back(run.report.avg_hamming);
        rate.push_back(run.report.achieved_rate_bps);
        summary.lost_total += run.report.lost_count;
        summary.sent_total += run.report.total_packets;
        summary.runs.push_back(std::move(run));
    }
    summary.per = metric_stats(per);
    summary.ber = metric_stats(ber);
    summary.avg_hamming = metric_stats(avg_ham);
    summary.achieved_rate = metric_stats(rate);

    if (write_artifacts)
        write_text_atomic(fs::path(cfg.out_dir) / "aggregate.json", summary_json(cfg, summary));
    return summary;
}

namespace {

std::string stats_json(const MetricStats& s) {
    std::ostringstream out;
    out << "{\"mean\": " << s.mean << ", \"stddev\": " << s.stddev << ", \"min\": " << s.min
        << ", \"max\": " << s.max << "}";
    return out.str();
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentSummary& s) {
    std::ostringstream out;
    out << "{\n"
        << "  \"scheme\": \"" << scheme_to_string(cfg.scheme) << "\",\n"
        << "  \"surface\": \"" << cfg.resolved_surface().label << "\",\n"
        << "  \"seeds\": " << s.runs.size() << ",\n"
        << "  \"packet_error_rate\": " << stats_json(s.per) << ",\n"
        << "  \"bit_error_rate\": " << stats_json(s.ber) << ",\n"
        << "  \"avg_hamming\": " << stats_json(s.avg_hamming) << ",\n"
        << "  \"achieved_rate_bps\": " << stats_json(s.achieved_rate) << ",\n"
        << "  \"lost_total\": " << s.lost_total << ",\n"
        << "  \"sent_total\": " << s.sent_total << "\n"
        << "}\n";
    return out.str();
}

}  // namespace

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "transmitter_hz") return SweepParameter::transmitter_hz;
    if (name == "ambient_sigma") return SweepParameter::ambient_sigma;
    if (name == "surface_preset") return SweepParameter::surface_preset;
    if (name == "scheme") return SweepParameter::scheme;
    throw ConfigError("unknown sweep parameter: " + name);
}

double transmitter_rate_point(const ExperimentConfig& cfg, double freq_hz, int roi_size,
                              std::uint64_t seed) {
    const IntensitySignal square =
        square_wave_signal(freq_hz, cfg.duration_us, cfg.tx_on_level, cfg.tx_off_level);
    PulseString dummy;
    dummy.slot_us = cfg.scheme_cfg.slot_us;
    dummy.slots = {1, 0};
    SceneSpec scene = cfg.scene(dummy);
    const BoundingBox roi{scene.geometry.width / 2 - roi_size / 2,
                          scene.geometry.height / 2 - roi_size / 2, roi_size, roi_size};
    if (!roi.inside(scene.geometry)) throw InvalidRoiError("sweep roi outside geometry");
    const EventStream events = simulate_scene_signal(scene, square, cfg.biases, roi, seed);
    return average_event_rate(events, cfg.duration_us);
}

SweepTable sweep(const ExperimentConfig& cfg, SweepParameter parameter,
                 const std::vector<std::string>& values, bool write_artifacts) {
    if (values.empty()) throw ConfigError("sweep needs a non-empty value list");

    SweepTable table;
    if (parameter == SweepParameter::transmitter_hz) {
        table.header = "transmitter_hz,events_per_s";
        for (const auto& v : values) {
            const double f = std::stod(v);
            const double rate = transmitter_rate_point(cfg, f, 10, cfg.seeds.front());
            std::ostringstream row;
            row << f << ',' << rate;
            table.rows.push_back(row.str());
        }
        return table;
    }

    table.header = "value,per_mean,per_stddev,ber_mean,ber_stddev,avg_hamming_mean,"
                   "achieved_rate_mean,lost_total,sent_total";
    for (const auto& v : values) {
        ExperimentConfig point = cfg;
        switch (parameter) {
            case SweepParameter::ambient_sigma: point.ambient.shot_noise_sigma = std::stod(v); break;
            case SweepParameter::surface_preset: point.surface_preset_name = v; break;
            case SweepParameter::scheme: point.scheme = scheme_from_string(v); break;
            case SweepParameter::transmitter_hz: break;
        }
        point.out_dir = (fs::path(cfg.out_dir) / ("sweep_" + v)).string();
        const ExperimentSummary s = run_experiment(point, write_artifacts);
        std::ostringstream row;
        row << v << ',' << s.per.mean << ',' << s.per.stddev << ',' << s.ber.mean << ','
            << s.ber.stddev << ',' << s.avg_hamming.mean << ',' << s.achieved_rate.mean << ','
            << s.lost_total << ',' << s.sent_total;
        table.rows.push_back(row.str());
    }
    return table;
}

}  // namespace evlink

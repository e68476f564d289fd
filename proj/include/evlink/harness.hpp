#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evlink/config.hpp"
#include "evlink/demod.hpp"
#include "evlink/metrics.hpp"
#include "evlink/types.hpp"

namespace evlink {

// One seed's trip through the full pipeline.
struct RunResult {
    std::uint64_t seed = 0;
    LinkReport report;
    std::vector<Bits> sent;
    DecodedPackets decoded;
    DecodeLog decode_log;
    std::optional<BoundingBox> roi;
    bool roi_fallback = false;  // detection failed, demodulated full-frame
    std::optional<std::pair<int, int>> hot;
    std::int64_t elapsed_us = 0;
    std::int64_t event_count = 0;
};

// Mean/stddev/min/max of one metric across seeds.
struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

MetricStats metric_stats(const std::vector<double>& values);

struct ExperimentSummary {
    std::vector<RunResult> runs;
    MetricStats per;
    MetricStats ber;
    MetricStats avg_hamming;
    MetricStats achieved_rate;
    std::int64_t lost_total = 0;
    std::int64_t sent_total = 0;
};

std::vector<Bits> make_packets(const ExperimentConfig& cfg, std::uint64_t seed);

// Lead-in idle slots followed by every packet's encoding, back to back.
PulseString encode_stream(const ExperimentConfig& cfg, const std::vector<Bits>& packets);

// Scheme-appropriate decoder from demodulated slot bits to packets.
DecodedPackets decode_slotbits(Scheme scheme, const SlotBits& bits, const ExperimentConfig& cfg,
                               DecodeLog* log = nullptr);

// Full pipeline for one seed: encode, compose the scene, run the sensor,
// frame, detect the RoI, pick the hot pixel, demodulate, decode, score.
// With write_artifacts the event CSV, frame dumps, decode log and report
// land under <out_dir>/seed_<seed>/.
RunResult run_experiment_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                              bool write_artifacts);

// All configured seeds plus cross-seed aggregation; writes per-seed
// artifacts and an aggregate report under cfg.out_dir.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, bool write_artifacts = true);

enum class SweepParameter { transmitter_hz, ambient_sigma, surface_preset, scheme };

SweepParameter sweep_parameter_from_string(const std::string& name);

struct SweepTable {
    std::string header;
    std::vector<std::string> rows;
};

// transmitter_hz sweeps report the average event rate over a small
// hardware RoI per frequency; the other parameters run the full experiment
// per value and report aggregated link metrics.
SweepTable sweep(const ExperimentConfig& cfg, SweepParameter parameter,
                 const std::vector<std::string>& values, bool write_artifacts = false);

// Event-rate measurement behind the transmitter_hz sweep, reusable by
// tests: square wave at freq_hz through the configured surface into a
// centered roi_size x roi_size window.
double transmitter_rate_point(const ExperimentConfig& cfg, double freq_hz, int roi_size,
                              std::uint64_t seed);

}  // namespace evlink

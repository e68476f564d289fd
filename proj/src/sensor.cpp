#include "evlink/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "evlink/errors.hpp"
#include "evlink/rng.hpp"

namespace evlink {

void SensorBiases::validate() const {
    if (diff_on <= 0.0 || diff_off <= 0.0)
        throw ConfigError("contrast thresholds must be positive");
    if (!(hpf_cutoff_hz < f0_cutoff_hz) || hpf_cutoff_hz <= 0.0)
        throw ConfigError("cutoffs must satisfy 0 < hpf < f0");
    if (refractory_us < 0) throw ConfigError("refractory_us must be non-negative");
    if (background_rate_hz < 0.0) throw ConfigError("background_rate_hz must be non-negative");
}

std::vector<double> apply_band_filter(std::span<const double> log_series, double slot_us,
                                      const SensorBiases& biases) {
    if (!(biases.hpf_cutoff_hz < biases.f0_cutoff_hz))
        throw std::invalid_argument("band filter needs hpf < f0");
    if (slot_us <= 0.0) throw std::invalid_argument("slot_us must be positive");
    for (double v : log_series)
        if (!std::isfinite(v)) throw InvalidSignalError("non-finite sample in log series");

    std::vector<double> out(log_series.size());
    if (log_series.empty()) return out;

    const double dt = slot_us * 1e-6;
    const double two_pi = 2.0 * 3.14159265358979323846;
    const double alpha_lp = 1.0 - std::exp(-two_pi * biases.f0_cutoff_hz * dt);
    const double a_hp = std::exp(-two_pi * biases.hpf_cutoff_hz * dt);

    double y_prev = log_series[0];   // low-pass state
    double z = 0.0;                  // high-pass starts settled: DC already rejected
    out[0] = z;
    for (std::size_t i = 1; i < log_series.size(); ++i) {
        const double y = y_prev + alpha_lp * (log_series[i] - y_prev);
        z = a_hp * (z + y - y_prev);
        y_prev = y;
        out[i] = z;
    }
    return out;
}

namespace {

bool all_equal(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

void threshold_events(const IntensitySignal& signal, const SensorBiases& b,
                      std::vector<PixelEvent>& out) {
    for (double v : signal.samples) {
        if (!std::isfinite(v)) throw InvalidSignalError("non-finite intensity sample");
        if (v <= 0.0) throw InvalidSignalError("non-positive intensity sample (log domain)");
    }
    std::vector<double> logs(signal.samples.size());
    std::transform(signal.samples.begin(), signal.samples.end(), logs.begin(),
                   [](double v) { return std::log(v); });
    const std::vector<double> filt = apply_band_filter(logs, signal.slot_us, b);

    double ref = filt[0];
    std::int64_t dead_until = std::numeric_limits<std::int64_t>::min();
    bool pending_reanchor = false;

    for (std::size_t i = 1; i < filt.size(); ++i) {
        const std::int64_t t = signal.sample_time_us(i);

        if (pending_reanchor && t >= dead_until) {
            // Dead time expired: reference re-anchors to the value current
            // at expiry. A sample landing exactly on the boundary is the
            // re-anchor point itself and cannot also fire.
            pending_reanchor = false;
            if (t == dead_until) {
                ref = filt[i];
                continue;
            }
            ref = filt[i - 1];
        }

        const double d = filt[i] - ref;
        const bool cross_on = d >= b.diff_on;
        const bool cross_off = -d >= b.diff_off;
        if (!cross_on && !cross_off) continue;

        if (t < dead_until) {
            pending_reanchor = true;  // crossing discarded, not queued
            continue;
        }
        out.push_back({t, cross_on ? 1 : 0});
        ref = filt[i];
        dead_until = t + b.refractory_us;
    }
}

void noise_events(const IntensitySignal& signal, const SensorBiases& b, std::uint64_t seed,
                  std::vector<PixelEvent>& out) {
    if (b.background_rate_hz <= 0.0 || signal.samples.empty()) return;
    Rng rng(seed);
    const double duration_s = signal.duration_us() * 1e-6;
    double t_s = rng.exponential_s(b.background_rate_hz);
    while (t_s < duration_s) {
        out.push_back({signal.t0_us + static_cast<std::int64_t>(t_s * 1e6), rng.coin_bit()});
        t_s += rng.exponential_s(b.background_rate_hz);
    }
}

}  // namespace

std::vector<PixelEvent> simulate_pixel(const IntensitySignal& signal, const SensorBiases& biases,
                                       std::uint64_t seed) {
    if (signal.samples.empty()) throw InvalidSignalError("empty signal");
    biases.validate();

    std::vector<PixelEvent> events;
    // A flat trace can never cross a contrast threshold, whatever its level;
    // this also keeps all-dark (zero intensity) pixels legal.
    if (!all_equal(signal.samples)) threshold_events(signal, biases, events);
    noise_events(signal, biases, seed, events);

    std::sort(events.begin(), events.end(), [](const PixelEvent& a, const PixelEvent& b) {
        return std::tie(a.t_us, a.polarity) < std::tie(b.t_us, b.polarity);
    });
    return events;
}

EventStream simulate_sensor(const PixelField& field, const SensorBiases& biases,
                            const SensorGeometry& geometry,
                            const std::optional<BoundingBox>& roi, std::uint64_t seed) {
    if (roi && !roi->inside(geometry)) throw InvalidRoiError("roi outside sensor geometry");

    EventStream stream;
    for (const auto& [xy, signal] : field) {
        const auto [x, y] = xy;
        if (!geometry.contains(x, y))
            throw std::invalid_argument("field pixel outside sensor geometry");
        if (roi && !roi->contains(x, y)) continue;
        const auto pixel = simulate_pixel(signal, biases, pixel_seed(seed, x, y));
        for (const auto& ev : pixel) stream.push_back({ev.t_us, x, y, ev.polarity});
    }
    sort_stream(stream);
    return stream;
}

double average_event_rate(const EventStream& stream, std::int64_t duration_us) {
    if (duration_us <= 0) throw std::invalid_argument("duration_us must be positive");
    return static_cast<double>(stream.size()) / (static_cast<double>(duration_us) * 1e-6);
}

}  // namespace evlink

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "evlink/types.hpp"

namespace evlink {

// Per-pixel event generation parameters. diff_on/diff_off are contrast
// thresholds on the band-filtered log intensity; the cutoffs shape the
// analog band-pass; refractory_us is the pixel dead time; background noise
// is a per-pixel Poisson rate with uniform polarity.
struct SensorBiases {
    double diff_on = 0.2;
    double diff_off = 0.2;
    double f0_cutoff_hz = 10000.0;   // low-pass
    double hpf_cutoff_hz = 5.0;      // high-pass, must stay below f0
    std::int64_t refractory_us = 50;
    double background_rate_hz = 0.0;

    void validate() const;
};

// Cascade of a first-order low-pass at f0_cutoff_hz and a first-order
// high-pass at hpf_cutoff_hz, both discretized with exact exponential
// coefficients on the slot grid. The high-pass starts settled, as if the
// first sample had been held forever, so a recording of a steady scene
// opens with no startup transient. Input and output are log-intensity
// series on the same grid. Throws InvalidSignalError on non-finite samples.
std::vector<double> apply_band_filter(std::span<const double> log_series, double slot_us,
                                      const SensorBiases& biases);

// Threshold-crossing event model on the band-filtered log intensity:
// starting from reference = first sample, an on-event fires when the signal
// rises diff_on above the reference and an off-event when it falls diff_off
// below; the reference snaps to the value at each crossing. Crossings
// within refractory_us of the previous event are dropped and the reference
// re-anchors to the value at dead-time expiry. Background noise events are
// superposed as a seeded Poisson process. Constant signals produce no
// threshold events; otherwise every sample must be positive (the log is
// taken) or InvalidSignalError is thrown.
std::vector<PixelEvent> simulate_pixel(const IntensitySignal& signal, const SensorBiases& biases,
                                       std::uint64_t seed);

using PixelField = std::map<std::pair<int, int>, IntensitySignal>;

// Union of simulate_pixel over all mapped pixels, merged into the canonical
// (t, y, x, polarity) order. Pixels outside `roi` (when given) emit
// nothing, modeling the hardware readout overwrite. Per-pixel seeds derive
// as seed ^ hash(x, y), so results do not depend on iteration order.
// Throws InvalidRoiError when roi falls outside the geometry.
EventStream simulate_sensor(const PixelField& field, const SensorBiases& biases,
                            const SensorGeometry& geometry,
                            const std::optional<BoundingBox>& roi, std::uint64_t seed);

// Events per second over the given span.
double average_event_rate(const EventStream& stream, std::int64_t duration_us);

}  // namespace evlink

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evlink/codec.hpp"
#include "evlink/sensor.hpp"
#include "evlink/types.hpp"

namespace evlink {

// Modulated light source: a pulse string played at on/off intensity levels.
struct TransmitterWaveform {
    PulseString pulse_string;
    double on_level = 4.0;
    double off_level = 1.0;
};

struct SurfaceTap {
    std::int64_t delay_us = 0;
    double gain = 0.0;
};

// Three-term reflection model: a specular copy, a matte box-blur, and
// discrete multipath echoes.
struct SurfaceProfile {
    std::string label;
    double reflectivity = 1.0;          // 0..1
    double gloss = 1.0;                 // 1 = specular, 0 = fully matte
    std::vector<SurfaceTap> taps;
    std::int64_t matte_spread_us = 300;

    void validate() const;
};

struct AmbientLight {
    double dc_level = 0.0;
    double flicker_hz = 120.0;          // mains-driven default
    double flicker_amplitude = 0.0;
    double shot_noise_sigma = 0.0;      // per-slot Gaussian

    void validate() const;
};

struct SceneSpec {
    SensorGeometry geometry;
    PixelMask object_mask;
    SurfaceProfile surface;
    AmbientLight ambient;
    TransmitterWaveform transmitter;
};

// sample i = on_level when slot i is on, else off_level.
IntensitySignal waveform_to_signal(const TransmitterWaveform& w);

// Raw square wave for transmitter-frequency sweeps; slot duration is the
// half period and may be fractional microseconds.
IntensitySignal square_wave_signal(double freq_hz, std::int64_t duration_us, double on_level,
                                   double off_level);

// out(t) = reflectivity * (gloss*in(t) + (1-gloss)*boxblur(in)) +
//          sum_k gain_k * in(t - delay_k), history before the trace start
// reading the first sample.
IntensitySignal reflect(const IntensitySignal& signal, const SurfaceProfile& surface);

// Transmitter pulse string tiled cyclically to fill duration_us (a looping
// transmitter); the last repetition is truncated.
IntensitySignal tiled_transmitter_signal(const TransmitterWaveform& w, std::int64_t duration_us);

// Materialized per-pixel field: object pixels carry the reflected
// transmitter plus ambient, background pixels ambient only. Ambient is
// dc + flicker sinusoid + seeded per-slot Gaussian, floored at a small
// positive value so the sensor log stays finite. Deterministic per seed;
// covers every geometry pixel, so keep the geometry small when
// materializing.
PixelField compose_scene(const SceneSpec& scene, std::int64_t duration_us, std::uint64_t seed);

// Streaming equivalent of simulate_sensor(compose_scene(...)): builds one
// pixel signal at a time, so large geometries and hardware RoIs stay cheap.
EventStream simulate_scene(const SceneSpec& scene, const SensorBiases& biases,
                           std::int64_t duration_us, const std::optional<BoundingBox>& roi,
                           std::uint64_t seed);

// Same, but against an arbitrary transmitter trace (used by rate sweeps).
EventStream simulate_scene_signal(const SceneSpec& scene, const IntensitySignal& tx,
                                  const SensorBiases& biases,
                                  const std::optional<BoundingBox>& roi, std::uint64_t seed);

// Named surface presets for the six evaluation objects: mirror, ball,
// flask, nest, tape, foam. Calibration data, not ground truth.
SurfaceProfile surface_preset(const std::string& name);
const std::vector<std::string>& surface_preset_names();

}  // namespace evlink

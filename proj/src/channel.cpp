#include "evlink/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "evlink/errors.hpp"
#include "evlink/rng.hpp"

namespace evlink {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Intensity floor keeping the sensor's log finite under additive noise.
constexpr double kIntensityFloor = 1e-6;
// Ambient noise draws come from a stream separate from the sensor's
// Poisson noise for the same (seed, pixel).
constexpr std::uint64_t kAmbientSalt = 0x414D4249454E54ULL;

}  // namespace

void SurfaceProfile::validate() const {
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw ConfigError("reflectivity must be in [0,1]");
    if (gloss < 0.0 || gloss > 1.0) throw ConfigError("gloss must be in [0,1]");
    if (matte_spread_us < 0) throw ConfigError("matte_spread_us must be non-negative");
    double gain_sum = 0.0;
    for (const auto& tap : taps) {
        if (tap.gain < 0.0) throw ConfigError("tap gains must be non-negative");
        if (tap.delay_us < 0) throw ConfigError("tap delays must be non-negative");
        gain_sum += tap.gain;
    }
    if (gain_sum > 1.0) throw ConfigError("sum of tap gains must not exceed 1");
}

void AmbientLight::validate() const {
    if (dc_level < 0.0) throw ConfigError("ambient dc_level must be non-negative");
    if (flicker_amplitude > dc_level)
        throw ConfigError("flicker_amplitude must not exceed dc_level");
    if (shot_noise_sigma < 0.0) throw ConfigError("shot_noise_sigma must be non-negative");
}

IntensitySignal waveform_to_signal(const TransmitterWaveform& w) {
    if (w.pulse_string.slots.empty())
        throw std::invalid_argument("waveform needs a non-empty pulse string");
    IntensitySignal out;
    out.slot_us = static_cast<double>(w.pulse_string.slot_us);
    out.samples.reserve(w.pulse_string.slots.size());
    for (auto s : w.pulse_string.slots) out.samples.push_back(s ? w.on_level : w.off_level);
    return out;
}

IntensitySignal square_wave_signal(double freq_hz, std::int64_t duration_us, double on_level,
                                   double off_level) {
    if (freq_hz <= 0.0) throw std::invalid_argument("frequency must be positive");
    IntensitySignal out;
    out.slot_us = 5e5 / freq_hz;  // half period
    const auto n = static_cast<std::size_t>(static_cast<double>(duration_us) / out.slot_us);
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = (i % 2 == 0) ? on_level : off_level;
    return out;
}

IntensitySignal reflect(const IntensitySignal& signal, const SurfaceProfile& surface) {
    if (signal.samples.empty()) throw std::invalid_argument("reflect needs a non-empty signal");
    surface.validate();

    const auto& in = signal.samples;
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    auto at = [&](std::ptrdiff_t i) { return in[static_cast<std::size_t>(std::max<std::ptrdiff_t>(i, 0))]; };

    const auto blur_w = std::max<std::ptrdiff_t>(
        1, static_cast<std::ptrdiff_t>(std::llround(static_cast<double>(surface.matte_spread_us) /
                                                    signal.slot_us)));

    IntensitySignal out;
    out.slot_us = signal.slot_us;
    out.t0_us = signal.t0_us;
    out.samples.resize(in.size());

    // Trailing box average; history before the trace start holds the first
    // sample, so the running sum seeds at blur_w * in[0].
    double window_sum = static_cast<double>(blur_w) * in[0];
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        window_sum += at(i) - at(i - blur_w);
        const double blurred = window_sum / static_cast<double>(blur_w);
        double v = surface.reflectivity * (surface.gloss * in[static_cast<std::size_t>(i)] +
                                           (1.0 - surface.gloss) * blurred);
        for (const auto& tap : surface.taps) {
            const auto d = static_cast<std::ptrdiff_t>(
                std::llround(static_cast<double>(tap.delay_us) / signal.slot_us));
            v += tap.gain * at(i - d);
        }
        out.samples[static_cast<std::size_t>(i)] = v;
    }
    return out;
}

IntensitySignal tiled_transmitter_signal(const TransmitterWaveform& w, std::int64_t duration_us) {
    IntensitySignal out;
    out.slot_us = static_cast<double>(w.pulse_string.slot_us);
    const auto n = static_cast<std::size_t>(static_cast<double>(duration_us) / out.slot_us);
    if (w.pulse_string.slots.empty()) {
        // Silent transmitter: the scene still needs a slot grid.
        out.samples.assign(n, w.off_level);
        return out;
    }
    const IntensitySignal base = waveform_to_signal(w);
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = base.samples[i % base.samples.size()];
    return out;
}

namespace {

void add_ambient(std::vector<double>& samples, const AmbientLight& amb, double slot_us,
                 std::int64_t t0_us, std::uint64_t noise_seed) {
    const bool flicker = amb.flicker_amplitude > 0.0 && amb.flicker_hz > 0.0;
    const bool noisy = amb.shot_noise_sigma > 0.0;
    Rng rng(noise_seed);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double v = amb.dc_level;
        if (flicker) {
            const double t_s = (static_cast<double>(t0_us) + static_cast<double>(i) * slot_us) * 1e-6;
            v += amb.flicker_amplitude * std::sin(2.0 * kPi * amb.flicker_hz * t_s);
        }
        if (noisy) v += rng.normal(amb.shot_noise_sigma);
        samples[i] += v;
        if (samples[i] < kIntensityFloor) samples[i] = kIntensityFloor;
    }
}

// Ambient floor only applies when there is any ambient contribution;
// an all-dark scene must keep exact zeros so dark pixels stay silent.
bool has_ambient(const AmbientLight& amb) {
    return amb.dc_level > 0.0 || amb.flicker_amplitude > 0.0 || amb.shot_noise_sigma > 0.0;
}

IntensitySignal scene_pixel_signal(const SceneSpec& scene, const IntensitySignal& reflected,
                                   int x, int y, std::uint64_t seed, std::size_t n_slots,
                                   double slot_us) {
    IntensitySignal sig;
    sig.slot_us = slot_us;
    if (scene.object_mask.contains(x, y)) {
        sig.samples = reflected.samples;
    } else {
        sig.samples.assign(n_slots, 0.0);
    }
    if (has_ambient(scene.ambient))
        add_ambient(sig.samples, scene.ambient, slot_us, 0, pixel_seed(seed ^ kAmbientSalt, x, y));
    return sig;
}

}  // namespace

PixelField compose_scene(const SceneSpec& scene, std::int64_t duration_us, std::uint64_t seed) {
    scene.surface.validate();
    scene.ambient.validate();
    if (!scene.object_mask.inside(scene.geometry))
        throw std::invalid_argument("object mask outside scene geometry");

    IntensitySignal reflected;
    double slot_us = 100.0;
    std::size_t n_slots = 0;
    if (!scene.object_mask.empty()) {
        reflected = reflect(tiled_transmitter_signal(scene.transmitter, duration_us), scene.surface);
        slot_us = reflected.slot_us;
        n_slots = reflected.samples.size();
    } else {
        slot_us = static_cast<double>(scene.transmitter.pulse_string.slot_us);
        n_slots = static_cast<std::size_t>(static_cast<double>(duration_us) / slot_us);
    }

    PixelField field;
    for (int y = 0; y < scene.geometry.height; ++y)
        for (int x = 0; x < scene.geometry.width; ++x)
            field[{x, y}] = scene_pixel_signal(scene, reflected, x, y, seed, n_slots, slot_us);
    return field;
}

EventStream simulate_scene_signal(const SceneSpec& scene, const IntensitySignal& tx,
                                  const SensorBiases& biases,
                                  const std::optional<BoundingBox>& roi, std::uint64_t seed) {
    scene.surface.validate();
    scene.ambient.validate();
    if (roi && !roi->inside(scene.geometry)) throw InvalidRoiError("roi outside scene geometry");
    if (!scene.object_mask.inside(scene.geometry))
        throw std::invalid_argument("object mask outside scene geometry");

    const IntensitySignal reflected = reflect(tx, scene.surface);
    const std::size_t n_slots = reflected.samples.size();

    std::vector<std::pair<int, int>> pixels;
    for (int y = 0; y < scene.geometry.height; ++y)
        for (int x = 0; x < scene.geometry.width; ++x)
            if (!roi || roi->contains(x, y)) pixels.emplace_back(x, y);

    auto simulate_range = [&](std::size_t begin, std::size_t end, EventStream& out) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto [x, y] = pixels[k];
            const IntensitySignal sig =
                scene_pixel_signal(scene, reflected, x, y, seed, n_slots, reflected.slot_us);
            const auto pixel = simulate_pixel(sig, biases, pixel_seed(seed, x, y));
            for (const auto& ev : pixel) out.push_back({ev.t_us, x, y, ev.polarity});
        }
    };

    // Per-pixel streams derive from (seed, x, y) alone, so splitting the
    // pixel list across threads cannot change the merged result.
    EventStream stream;
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                              pixels.size() / 64 + 1);
    if (workers <= 1) {
        simulate_range(0, pixels.size(), stream);
    } else {
        std::vector<EventStream> parts(workers);
        std::vector<std::thread> threads;
        const std::size_t chunk = (pixels.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(begin + chunk, pixels.size());
            if (begin >= end) break;
            threads.emplace_back(simulate_range, begin, end, std::ref(parts[w]));
        }
        for (auto& t : threads) t.join();
        for (auto& part : parts)
            stream.insert(stream.end(), part.begin(), part.end());
    }
    sort_stream(stream);
    return stream;
}

EventStream simulate_scene(const SceneSpec& scene, const SensorBiases& biases,
                           std::int64_t duration_us, const std::optional<BoundingBox>& roi,
                           std::uint64_t seed) {
    return simulate_scene_signal(scene, tiled_transmitter_signal(scene.transmitter, duration_us),
                                 biases, roi, seed);
}

namespace {

const std::vector<std::string> kPresetNames = {"mirror", "ball", "flask", "nest", "tape", "foam"};

}  // namespace

// Calibrated so the dark-floor reference configuration (ambient dc 0.5,
// per-slot sigma 0.02) reproduces the qualitative object ordering:
// mirror and ball decode clean, flask and nest land mid-range through a
// threshold-marginal multipath echo, tape collapses, foam reflects nothing.
SurfaceProfile surface_preset(const std::string& name) {
    SurfaceProfile p;
    p.label = name;
    if (name == "mirror") {
        p.reflectivity = 0.95;
        p.gloss = 1.0;
    } else if (name == "ball") {
        p.reflectivity = 0.85;
        p.gloss = 0.90;
        p.taps = {{200, 0.05}};
    } else if (name == "flask") {
        p.reflectivity = 0.65;
        p.gloss = 0.55;
        p.taps = {{200, 0.091}};
    } else if (name == "nest") {
        p.reflectivity = 0.60;
        p.gloss = 0.45;
        p.taps = {{200, 0.087}};
    } else if (name == "tape") {
        p.reflectivity = 0.45;
        p.gloss = 0.12;
        p.taps = {{200, 0.25}, {500, 0.18}};
        p.matte_spread_us = 500;
    } else if (name == "foam") {
        p.reflectivity = 0.0;
        p.gloss = 0.0;
    } else {
        throw ConfigError("unknown surface preset: " + name);
    }
    return p;
}

const std::vector<std::string>& surface_preset_names() { return kPresetNames; }

}  // namespace evlink

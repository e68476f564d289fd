#include "evlink/codec.hpp"

#include <algorithm>
#include <stdexcept>

#include "evlink/errors.hpp"

namespace evlink {

Bits bits_from_string(const std::string& s) {
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0')
            out.push_back(0);
        else if (c == '1')
            out.push_back(1);
        else if (c == ' ' || c == '_')
            continue;
        else
            throw InvalidPacketError("bit string may only contain 0/1");
    }
    return out;
}

std::string bits_to_string(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (auto v : b) s.push_back(v ? '1' : '0');
    return s;
}

Bits random_bits(std::size_t n, Rng& rng) {
    Bits out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.coin_bit());
    return out;
}

Bits combos64_packet() {
    Bits out;
    out.reserve(64);
    for (int v = 0; v < 16; ++v)
        for (int k = 3; k >= 0; --k) out.push_back(static_cast<std::uint8_t>((v >> k) & 1));
    return out;
}

void SchemeConfig::validate() const {
    if (slot_us <= 0) throw ConfigError("slot_us must be positive");
    if (guard_us < 0 || guard_us % slot_us != 0)
        throw ConfigError("guard_us must be a non-negative multiple of slot_us");
    if (sync00_pulses == sync11_pulses)
        throw ConfigError("sync00_pulses and sync11_pulses must differ");
    // Payload symbol runs reach 4 pulses; sync bursts must stay longer.
    if (sync2_pulses < 5 || sync00_pulses < 5 || sync11_pulses < 5)
        throw ConfigError("sync bursts must be at least 5 pulses");
}

namespace {

void append_pulses(std::vector<std::uint8_t>& slots, int n) {
    for (int i = 0; i < n; ++i) {
        slots.push_back(1);
        slots.push_back(0);
    }
}

void append_guard(std::vector<std::uint8_t>& slots, const SchemeConfig& cfg) {
    slots.insert(slots.end(), static_cast<std::size_t>(cfg.guard_slots()), 0);
}

}  // namespace

PulseString encode_ook(const Bits& bits, const SchemeConfig& cfg) {
    PulseString out;
    out.slot_us = cfg.slot_us;
    out.slots.assign(bits.begin(), bits.end());
    return out;
}

Bits make_ook_id_frame(const Bits& id, const SchemeConfig& cfg) {
    Bits frame = cfg.ook_start;
    frame.insert(frame.end(), id.begin(), id.end());
    frame.insert(frame.end(), cfg.ook_stop.begin(), cfg.ook_stop.end());
    return frame;
}

PulseString encode_npulse2(const Bits& bits, const SchemeConfig& cfg) {
    cfg.validate();
    PulseString out;
    out.slot_us = cfg.slot_us;
    append_pulses(out.slots, cfg.sync2_pulses);
    append_guard(out.slots, cfg);
    for (auto b : bits) {
        append_pulses(out.slots, b ? 2 : 1);
        append_guard(out.slots, cfg);
    }
    return out;
}

int npulse4_symbol_pulses(int bit_hi, int bit_lo, AdaptiveMode mode) {
    const int sym = bit_hi * 2 + bit_lo;
    // default: 00->1, 01->2, 10->3, 11->4; swapped inverts the 00/11 ends.
    static constexpr int kDefault[4] = {1, 2, 3, 4};
    static constexpr int kSwapped[4] = {4, 2, 3, 1};
    return mode == AdaptiveMode::default_00 ? kDefault[sym] : kSwapped[sym];
}

namespace {

PulseString encode_npulse4_with_mode(const Bits& bits, AdaptiveMode mode, int sync_pulses,
                                     const SchemeConfig& cfg) {
    if (bits.size() % 2 != 0)
        throw InvalidPacketError("4-level schemes need an even bit count");
    PulseString out;
    out.slot_us = cfg.slot_us;
    append_pulses(out.slots, sync_pulses);
    append_guard(out.slots, cfg);
    for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
        append_pulses(out.slots, npulse4_symbol_pulses(bits[i], bits[i + 1], mode));
        append_guard(out.slots, cfg);
    }
    return out;
}

}  // namespace

PulseString encode_npulse4(const Bits& bits, const SchemeConfig& cfg) {
    cfg.validate();
    return encode_npulse4_with_mode(bits, AdaptiveMode::default_00, cfg.sync00_pulses, cfg);
}

std::pair<PulseString, AdaptiveMode> encode_npulse4_adaptive(const Bits& bits,
                                                             const SchemeConfig& cfg) {
    cfg.validate();
    if (bits.size() % 2 != 0)
        throw InvalidPacketError("4-level schemes need an even bit count");
    const auto ones = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
    const std::size_t zeros = bits.size() - ones;
    // Strict comparison: ties keep the default map.
    const AdaptiveMode mode =
        ones > zeros ? AdaptiveMode::swapped_11 : AdaptiveMode::default_00;
    const int sync = mode == AdaptiveMode::swapped_11 ? cfg.sync11_pulses : cfg.sync00_pulses;
    return {encode_npulse4_with_mode(bits, mode, sync, cfg), mode};
}

std::int64_t airtime_us(const PulseString& p) {
    return static_cast<std::int64_t>(p.slots.size()) * p.slot_us;
}

std::int64_t payload_airtime_us(const Bits& bits, AdaptiveMode mode, const SchemeConfig& cfg) {
    if (bits.size() % 2 != 0)
        throw InvalidPacketError("4-level schemes need an even bit count");
    std::int64_t slots = 0;
    for (std::size_t i = 0; i + 1 < bits.size(); i += 2)
        slots += 2 * npulse4_symbol_pulses(bits[i], bits[i + 1], mode) + cfg.guard_slots();
    return slots * cfg.slot_us;
}

RateCase rate_case_from_string(const std::string& name) {
    if (name == "npulse2") return RateCase::npulse2;
    if (name == "npulse4") return RateCase::npulse4;
    if (name == "adaptive_best") return RateCase::adaptive_best;
    if (name == "adaptive_avg") return RateCase::adaptive_avg;
    if (name == "adaptive_worst") return RateCase::adaptive_worst;
    if (name == "ook_raw") return RateCase::ook_raw;
    throw ConfigError("unknown rate scheme: " + name);
}

double theoretical_rate_bps(RateCase scheme, const SchemeConfig& cfg) {
    const double slot_s = static_cast<double>(cfg.slot_us) * 1e-6;
    const double guard_s = static_cast<double>(cfg.guard_us) * 1e-6;
    switch (scheme) {
        case RateCase::npulse2:
            // 1.5 pulses per bit on balanced payloads, each pulse slot
            // followed by one guard.
            return 1.0 / (1.5 * (slot_s + guard_s));
        case RateCase::npulse4:
            // 2.5 pulses per 2-bit symbol on uniform data, one guard per
            // symbol burst.
            return 2.0 / (2.5 * slot_s + guard_s);
        // Packet-level reference figures for 64-bit packets, sync included.
        case RateCase::adaptive_best:
            return 1828.57;
        case RateCase::adaptive_avg:
            return 1702.13;
        case RateCase::adaptive_worst:
            return 1454.54;
        case RateCase::ook_raw:
            return 1.0 / slot_s;
    }
    throw ConfigError("unknown rate scheme");
}

}  // namespace evlink

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evlink/rng.hpp"

namespace evlink {

using Bits = std::vector<std::uint8_t>;

Bits bits_from_string(const std::string& s);
std::string bits_to_string(const Bits& b);
Bits random_bits(std::size_t n, Rng& rng);

// Default 64-bit payload: all 4-bit combinations 0000..1111 concatenated.
Bits combos64_packet();

// Slot-level on/off transmit sequence; the canonical encoder output.
// slots[i] is 1 (light on) or 0 (light off) for slot_us microseconds.
struct PulseString {
    std::vector<std::uint8_t> slots;
    std::int64_t slot_us = 100;
};

enum class AdaptiveMode { default_00, swapped_11 };

// Timing and framing parameters shared by the N-pulse schemes.
// One pulse = slots "10" (on then off); a guard is guard_us/slot_us
// consecutive off slots; sync bursts are uninterrupted pulse runs longer
// than any payload symbol run.
struct SchemeConfig {
    std::int64_t slot_us = 100;
    std::int64_t guard_us = 600;
    int sync2_pulses = 5;
    int sync00_pulses = 8;
    int sync11_pulses = 11;
    Bits ook_start = {1, 0, 1};
    Bits ook_stop = {0};

    int guard_slots() const { return static_cast<int>(guard_us / slot_us); }

    // Throws ConfigError when timing or sync parameters are inconsistent
    // (guard not slot-aligned, sync runs not distinguishable from the
    // 4-pulse payload maximum, equal sync lengths).
    void validate() const;
};

// One slot per bit: on for 1, off for 0. No sync, no guards.
PulseString encode_ook(const Bits& bits, const SchemeConfig& cfg);

// start bits + id + stop bit, as transmitted for the ID detection task.
Bits make_ook_id_frame(const Bits& id, const SchemeConfig& cfg);

// 2-symbol N-pulse: sync burst of sync2_pulses, then per bit one pulse
// for 0 and two pulses for 1, every run followed by a guard.
PulseString encode_npulse2(const Bits& bits, const SchemeConfig& cfg);

// 4-level N-pulse: sync burst of sync00_pulses, then per bit pair
// 00->1, 01->2, 10->3, 11->4 pulses, every run followed by a guard.
// Throws InvalidPacketError on odd bit count.
PulseString encode_npulse4(const Bits& bits, const SchemeConfig& cfg);

// Adaptive 4-level N-pulse: when the packet has strictly more ones than
// zeros the symbol map is swapped (11->1, 01->2, 10->3, 00->4) and the
// sync burst is sync11_pulses long; otherwise identical to encode_npulse4.
std::pair<PulseString, AdaptiveMode> encode_npulse4_adaptive(const Bits& bits,
                                                             const SchemeConfig& cfg);

std::int64_t airtime_us(const PulseString& p);

// Payload cost of a 4-level encoding excluding the sync burst and its
// guard; used by the adaptive-optimality property.
std::int64_t payload_airtime_us(const Bits& bits, AdaptiveMode mode, const SchemeConfig& cfg);

enum class RateCase {
    npulse2,
    npulse4,
    adaptive_best,
    adaptive_avg,
    adaptive_worst,
    ook_raw,
};

RateCase rate_case_from_string(const std::string& name);

// Nominal data rates. npulse2/npulse4 evaluate the per-bit airtime
// arithmetic from the scheme parameters; the adaptive cases return the
// packet-level reference figures (sync included) for 64-bit packets.
double theoretical_rate_bps(RateCase scheme, const SchemeConfig& cfg);

// Pulses per bit pair in each adaptive mode.
int npulse4_symbol_pulses(int bit_hi, int bit_lo, AdaptiveMode mode);

}  // namespace evlink

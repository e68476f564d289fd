#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "evlink/codec.hpp"
#include "evlink/types.hpp"

namespace evlink {

// Slot-rate bit sequence reconstructed from one pixel's events.
using SlotBits = std::vector<std::uint8_t>;

using DecodedPackets = std::vector<Bits>;

// Reconstructs the slot string from event timing. The first event seeds the
// sequence; every later event appends round(dt/bit_time)-1 repeats of the
// previous level followed by its own polarity. Throws InvalidStreamError on
// unsorted input.
SlotBits sliding_demodulator(const std::vector<PixelEvent>& events, std::int64_t bit_time_us);

// Indices i with bits[i]=1 and bits[i+1]=0 (the "1-0" detector).
std::vector<std::size_t> pulse_run_indices(const SlotBits& bits);

// What the index-run decoder saw, for the decode log.
struct DecodeLog {
    struct Run {
        std::size_t index = 0;   // first slot index of the run
        std::size_t count = 0;   // consecutive pulses in the run
    };
    std::vector<Run> runs;            // every maximal run, in order
    std::vector<Run> syncs;           // runs that switched the mode
    std::vector<Run> anomalies;       // data runs with no map entry
    std::size_t skipped_before_sync = 0;
};

// Groups maximal arithmetic runs of stride pattern_length and decodes run
// counts to bit pairs. A run meeting sync_threshold_11 (checked first) or
// sync_threshold_00 flushes the current packet and selects the
// corresponding map; data runs without a map entry contribute nothing;
// runs before any sync are skipped; trailing bits flush as a final packet.
DecodedPackets demodulate_bits_from_indices(const std::vector<std::size_t>& indices,
                                            std::size_t pattern_length = 2,
                                            std::size_t sync_threshold_00 = 8,
                                            std::size_t sync_threshold_11 = 11,
                                            DecodeLog* log = nullptr);

// 2-symbol variant: one pulse is a 0 bit, two pulses a 1 bit, a run of at
// least sync2_pulses is a packet boundary.
DecodedPackets decode_npulse2(const std::vector<std::size_t>& indices, const SchemeConfig& cfg,
                              DecodeLog* log = nullptr);

// Slides over every offset of `bits`; wherever start_bits and stop_bits
// frame a payload_length payload, the payload is counted and compared with
// expected_combo. Overlapping matches all count.
std::pair<std::int64_t, std::int64_t> decode_payload(const Bits& bits, const Bits& start_bits,
                                                     const Bits& stop_bits,
                                                     std::size_t payload_length,
                                                     const Bits& expected_combo);

// Extracts every framed payload (start 101 / stop 0 by default) like
// decode_payload, returning the payloads themselves.
std::vector<Bits> scan_payloads(const Bits& bits, const Bits& start_bits, const Bits& stop_bits,
                                std::size_t payload_length);

// Pearson correlation of two equal-length 0/1 sequences. Throws
// UndefinedCorrelationError when either input has zero standard deviation.
double pearson(const Bits& a, const Bits& b);

// ID detection over a demodulated window: majority vote over exactly
// matching framed payloads, falling back to maximum Pearson correlation
// against the candidate set; zero-variance candidates (all-0/all-1) match
// by equality only. Throws NoDetectionError when nothing is decodable.
Bits correlate_id(const SlotBits& window, const std::vector<Bits>& id_set,
                  const SchemeConfig& cfg);

}  // namespace evlink

#pragma once

#include <cstdint>
#include <vector>

#include "evlink/codec.hpp"

namespace evlink {

// Link-quality summary matching the evaluation table columns.
struct LinkReport {
    double packet_error_rate = 0.0;
    std::int64_t total_packets = 0;   // packets sent
    double avg_hamming = 0.0;         // mean over matched packets
    std::int64_t max_hamming = 0;     // worst matched packet
    double bit_error_rate = 0.0;      // matched payload bits only
    double achieved_rate_bps = 0.0;   // sent payload bits / elapsed time
    std::int64_t lost_count = 0;      // sent packets with no received match
    std::int64_t length_mismatches = 0;
    bool no_signal = false;           // nothing decodable at all
};

// Number of differing positions; throws std::invalid_argument on length
// mismatch.
std::int64_t hamming(const Bits& a, const Bits& b);

// Hamming distance over the common prefix, for length-mismatched decodes.
std::int64_t hamming_prefix(const Bits& a, const Bits& b);

// Matches sent and received packets in order. A matched packet with a
// length mismatch or any bit flip counts as a packet error; unmatched sent
// packets count as lost errors (they inflate PER but not BER). BER divides
// flipped bits by matched sent bits.
LinkReport evaluate_link(const std::vector<Bits>& sent, const std::vector<Bits>& received,
                         std::int64_t elapsed_us);

}  // namespace evlink

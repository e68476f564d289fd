#include "evlink/demod.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "evlink/errors.hpp"

namespace evlink {

SlotBits sliding_demodulator(const std::vector<PixelEvent>& events, std::int64_t bit_time_us) {
    if (bit_time_us <= 0) throw std::invalid_argument("bit_time_us must be positive");
    SlotBits bits;
    if (events.empty()) return bits;

    bits.push_back(static_cast<std::uint8_t>(events[0].polarity ? 1 : 0));
    std::int64_t last_time = events[0].t_us;
    for (std::size_t k = 1; k < events.size(); ++k) {
        const auto& ev = events[k];
        if (ev.t_us < last_time) throw InvalidStreamError("events must be time-sorted");
        const double gap = static_cast<double>(ev.t_us - last_time) / static_cast<double>(bit_time_us);
        auto n = static_cast<std::int64_t>(std::llround(gap));
        if (n < 1) n = 1;
        // Silence between events means the level held: repeat it.
        bits.insert(bits.end(), static_cast<std::size_t>(n - 1), bits.back());
        bits.push_back(static_cast<std::uint8_t>(ev.polarity ? 1 : 0));
        last_time = ev.t_us;
    }
    return bits;
}

std::vector<std::size_t> pulse_run_indices(const SlotBits& bits) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i + 1 < bits.size(); ++i)
        if (bits[i] == 1 && bits[i + 1] == 0) indices.push_back(i);
    return indices;
}

namespace {

// Maximal run of pulse indices spaced exactly pattern_length apart,
// starting at position i.
std::size_t run_length(const std::vector<std::size_t>& indices, std::size_t i,
                       std::size_t pattern_length) {
    std::size_t count = 1;
    while (i + count < indices.size() &&
           indices[i + count] == indices[i] + count * pattern_length)
        ++count;
    return count;
}

}  // namespace

DecodedPackets demodulate_bits_from_indices(const std::vector<std::size_t>& indices,
                                            std::size_t pattern_length,
                                            std::size_t sync_threshold_00,
                                            std::size_t sync_threshold_11, DecodeLog* log) {
    DecodedPackets packets;
    Bits decoded_bits;
    bool in_sync_00 = false;
    bool in_sync_11 = false;

    std::size_t i = 0;
    while (i < indices.size()) {
        const std::size_t count = run_length(indices, i, pattern_length);
        if (log) log->runs.push_back({indices[i], count});

        if (count >= sync_threshold_11 || count >= sync_threshold_00) {
            if (!decoded_bits.empty()) packets.push_back(decoded_bits);
            decoded_bits.clear();
            in_sync_11 = count >= sync_threshold_11;
            in_sync_00 = count >= sync_threshold_00;
            if (log) log->syncs.push_back({indices[i], count});
            i += count;
            continue;
        }

        if (in_sync_11) {
            switch (count) {
                case 1: decoded_bits.insert(decoded_bits.end(), {1, 1}); break;
                case 2: decoded_bits.insert(decoded_bits.end(), {0, 1}); break;
                case 3: decoded_bits.insert(decoded_bits.end(), {1, 0}); break;
                case 4: decoded_bits.insert(decoded_bits.end(), {0, 0}); break;
                default:
                    if (log) log->anomalies.push_back({indices[i], count});
                    break;
            }
        } else if (in_sync_00) {
            switch (count) {
                case 1: decoded_bits.insert(decoded_bits.end(), {0, 0}); break;
                case 2: decoded_bits.insert(decoded_bits.end(), {0, 1}); break;
                case 3: decoded_bits.insert(decoded_bits.end(), {1, 0}); break;
                case 4: decoded_bits.insert(decoded_bits.end(), {1, 1}); break;
                default:
                    if (log) log->anomalies.push_back({indices[i], count});
                    break;
            }
        } else if (log) {
            ++log->skipped_before_sync;
        }

        i += count;
    }

    if (!decoded_bits.empty()) packets.push_back(decoded_bits);
    return packets;
}

DecodedPackets decode_npulse2(const std::vector<std::size_t>& indices, const SchemeConfig& cfg,
                              DecodeLog* log) {
    DecodedPackets packets;
    Bits decoded_bits;
    bool in_sync = false;

    std::size_t i = 0;
    while (i < indices.size()) {
        const std::size_t count = run_length(indices, i, 2);
        if (log) log->runs.push_back({indices[i], count});

        if (count >= static_cast<std::size_t>(cfg.sync2_pulses)) {
            if (!decoded_bits.empty()) packets.push_back(decoded_bits);
            decoded_bits.clear();
            in_sync = true;
            if (log) log->syncs.push_back({indices[i], count});
        } else if (in_sync) {
            if (count == 1)
                decoded_bits.push_back(0);
            else if (count == 2)
                decoded_bits.push_back(1);
            else if (log)
                log->anomalies.push_back({indices[i], count});
        } else if (log) {
            ++log->skipped_before_sync;
        }

        i += count;
    }

    if (!decoded_bits.empty()) packets.push_back(decoded_bits);
    return packets;
}

std::pair<std::int64_t, std::int64_t> decode_payload(const Bits& bits, const Bits& start_bits,
                                                     const Bits& stop_bits,
                                                     std::size_t payload_length,
                                                     const Bits& expected_combo) {
    std::int64_t total_packets = 0;
    std::int64_t wrong_packets = 0;
    const std::size_t frame = start_bits.size() + payload_length + stop_bits.size();
    if (bits.size() < frame) return {0, 0};

    for (std::size_t i = 0; i + frame <= bits.size(); ++i) {
        if (!std::equal(start_bits.begin(), start_bits.end(), bits.begin() + i)) continue;
        const std::size_t stop_at = i + start_bits.size() + payload_length;
        if (!std::equal(stop_bits.begin(), stop_bits.end(), bits.begin() + stop_at)) continue;
        const auto payload_begin = bits.begin() + i + start_bits.size();
        if (expected_combo.size() != payload_length ||
            !std::equal(expected_combo.begin(), expected_combo.end(), payload_begin))
            ++wrong_packets;
        ++total_packets;
    }
    return {total_packets, wrong_packets};
}

std::vector<Bits> scan_payloads(const Bits& bits, const Bits& start_bits, const Bits& stop_bits,
                                std::size_t payload_length) {
    std::vector<Bits> payloads;
    const std::size_t frame = start_bits.size() + payload_length + stop_bits.size();
    if (bits.size() < frame) return payloads;
    for (std::size_t i = 0; i + frame <= bits.size(); ++i) {
        if (!std::equal(start_bits.begin(), start_bits.end(), bits.begin() + i)) continue;
        const std::size_t stop_at = i + start_bits.size() + payload_length;
        if (!std::equal(stop_bits.begin(), stop_bits.end(), bits.begin() + stop_at)) continue;
        payloads.emplace_back(bits.begin() + i + start_bits.size(),
                              bits.begin() + i + start_bits.size() + payload_length);
    }
    return payloads;
}

double pearson(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson needs equal lengths");
    if (a.size() < 2) throw std::invalid_argument("pearson needs at least 2 samples");
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    const double ma = sa / n, mb = sb / n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw UndefinedCorrelationError("zero standard deviation input");
    return sab / std::sqrt(saa * sbb);
}

namespace {

bool zero_variance(const Bits& b) {
    return std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
}

}  // namespace

Bits correlate_id(const SlotBits& window, const std::vector<Bits>& id_set,
                  const SchemeConfig& cfg) {
    if (id_set.empty()) throw std::invalid_argument("id_set must not be empty");
    const std::size_t id_len = id_set.front().size();
    const Bits window_bits(window.begin(), window.end());
    const auto payloads = scan_payloads(window_bits, cfg.ook_start, cfg.ook_stop, id_len);
    if (payloads.empty()) throw NoDetectionError("no decodable frame in window");

    // Majority vote over exact matches first.
    std::size_t best_votes = 0;
    const Bits* best_id = nullptr;
    for (const auto& id : id_set) {
        const auto votes = static_cast<std::size_t>(
            std::count(payloads.begin(), payloads.end(), id));
        if (votes > best_votes) {
            best_votes = votes;
            best_id = &id;
        }
    }
    if (best_id) return *best_id;

    // No exact match: correlate every defined (payload, candidate) pair.
    double best_r = -2.0;
    for (const auto& id : id_set) {
        if (zero_variance(id)) continue;  // equality-only candidates
        for (const auto& p : payloads) {
            if (zero_variance(p)) continue;
            const double r = pearson(p, id);
            if (r > best_r) {
                best_r = r;
                best_id = &id;
            }
        }
    }
    if (!best_id) throw NoDetectionError("no exact match and no defined correlation");
    return *best_id;
}

}  // namespace evlink

#include "evlink/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace evlink {

std::int64_t hamming(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming needs equal lengths");
    std::int64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

std::int64_t hamming_prefix(const Bits& a, const Bits& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::int64_t d = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

LinkReport evaluate_link(const std::vector<Bits>& sent, const std::vector<Bits>& received,
                         std::int64_t elapsed_us) {
    if (sent.empty()) throw std::invalid_argument("evaluate_link needs at least one sent packet");

    LinkReport r;
    r.total_packets = static_cast<std::int64_t>(sent.size());

    const std::size_t matched = std::min(sent.size(), received.size());
    std::int64_t wrong = 0;
    std::int64_t ham_sum = 0;
    std::int64_t matched_bits = 0;
    std::int64_t sent_bits = 0;

    for (const auto& p : sent) sent_bits += static_cast<std::int64_t>(p.size());

    for (std::size_t k = 0; k < matched; ++k) {
        const bool len_ok = sent[k].size() == received[k].size();
        const std::int64_t d = hamming_prefix(sent[k], received[k]);
        if (!len_ok) ++r.length_mismatches;
        if (!len_ok || d > 0) ++wrong;
        ham_sum += d;
        matched_bits += static_cast<std::int64_t>(sent[k].size());
        r.max_hamming = std::max(r.max_hamming, d);
    }

    r.lost_count = static_cast<std::int64_t>(sent.size() - matched);
    r.packet_error_rate =
        static_cast<double>(wrong + r.lost_count) / static_cast<double>(sent.size());
    r.avg_hamming = matched > 0 ? static_cast<double>(ham_sum) / static_cast<double>(matched) : 0.0;
    r.bit_error_rate =
        matched_bits > 0 ? static_cast<double>(ham_sum) / static_cast<double>(matched_bits) : 0.0;
    r.achieved_rate_bps =
        elapsed_us > 0 ? static_cast<double>(sent_bits) / (static_cast<double>(elapsed_us) * 1e-6)
                       : 0.0;
    r.no_signal = received.empty();
    return r;
}

}  // namespace evlink

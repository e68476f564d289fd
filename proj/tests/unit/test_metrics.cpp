#include <doctest.h>

#include <algorithm>

#include "evlink/codec.hpp"
#include "evlink/metrics.hpp"
#include "evlink/rng.hpp"

using namespace evlink;

TEST_SUITE("metrics") {
    TEST_CASE("hamming distance basics") {
        Rng rng(3);
        const Bits a = random_bits(64, rng);
        CHECK(hamming(a, a) == 0);

        Bits flipped = a;
        flipped[10] ^= 1;
        CHECK(hamming(a, flipped) == 1);

        Bits complement = a;
        for (auto& b : complement) b ^= 1;
        CHECK(hamming(a, complement) == 64);

        CHECK_THROWS_AS(hamming(a, Bits(32, 0)), std::invalid_argument);
        CHECK(hamming_prefix(bits_from_string("1100"), bits_from_string("10")) == 1);
    }

    TEST_CASE("perfect reception scores zero everywhere") {
        Rng rng(7);
        std::vector<Bits> sent;
        for (int i = 0; i < 50; ++i) sent.push_back(random_bits(64, rng));
        const LinkReport r = evaluate_link(sent, sent, 1'000'000);
        CHECK(r.packet_error_rate == 0.0);
        CHECK(r.bit_error_rate == 0.0);
        CHECK(r.avg_hamming == 0.0);
        CHECK(r.max_hamming == 0);
        CHECK(r.lost_count == 0);
        CHECK(r.total_packets == 50);
        CHECK(r.achieved_rate_bps == doctest::Approx(3200.0));
    }

    TEST_CASE("lost packets inflate PER but not BER") {
        Rng rng(9);
        std::vector<Bits> sent;
        for (int i = 0; i < 100; ++i) sent.push_back(random_bits(64, rng));
        std::vector<Bits> received(sent.begin(), sent.begin() + 98);
        const LinkReport r = evaluate_link(sent, received, 2'000'000);
        CHECK(r.packet_error_rate == doctest::Approx(0.02));
        CHECK(r.bit_error_rate == 0.0);
        CHECK(r.avg_hamming == 0.0);
        CHECK(r.lost_count == 2);
    }

    TEST_CASE("a single flipped bit gives PER 1 and BER 1/64") {
        Rng rng(11);
        const Bits p = random_bits(64, rng);
        Bits q = p;
        q[5] ^= 1;
        const LinkReport r = evaluate_link({p}, {q}, 35'000);
        CHECK(r.packet_error_rate == 1.0);
        CHECK(r.bit_error_rate == doctest::Approx(1.0 / 64.0));
        CHECK(r.max_hamming == 1);
    }

    TEST_CASE("length mismatches are flagged and compared over the prefix") {
        const Bits p = bits_from_string("11001100");
        const Bits q = bits_from_string("1100");
        const LinkReport r = evaluate_link({p}, {q}, 1000);
        CHECK(r.packet_error_rate == 1.0);
        CHECK(r.length_mismatches == 1);
        CHECK(r.max_hamming == 0);  // prefix matches
    }

    TEST_CASE("report invariants hold on randomized links") {
        Rng rng(13);
        for (int t = 0; t < 100; ++t) {
            std::vector<Bits> sent, received;
            const int n = 1 + static_cast<int>(rng.next_u64() % 20);
            for (int i = 0; i < n; ++i) sent.push_back(random_bits(32, rng));
            const int m = static_cast<int>(rng.next_u64() % (n + 2));
            for (int i = 0; i < m && i < n; ++i) {
                Bits p = sent[static_cast<std::size_t>(i)];
                for (int k = 0; k < 3; ++k)
                    if (rng.coin_bit()) p[rng.next_u64() % p.size()] ^= 1;
                received.push_back(p);
            }
            const LinkReport r = evaluate_link(sent, received, 1'000'000);
            CHECK(r.packet_error_rate >= 0.0);
            CHECK(r.packet_error_rate <= 1.0);
            CHECK(r.bit_error_rate >= 0.0);
            CHECK(r.bit_error_rate <= 1.0);
            CHECK(static_cast<double>(r.max_hamming) >= r.avg_hamming);
            if (r.packet_error_rate == 0.0) {
                CHECK(r.bit_error_rate == 0.0);
                CHECK(r.max_hamming == 0);
            }
            CHECK(r.bit_error_rate <= static_cast<double>(r.max_hamming) / 32.0 + 1e-12);
        }
    }

    TEST_CASE("matching is order-sensitive") {
        const Bits a = bits_from_string("0000");
        const Bits b = bits_from_string("1111");
        CHECK(evaluate_link({a, b}, {a, b}, 1000).packet_error_rate == 0.0);
        CHECK(evaluate_link({a, b}, {b, a}, 1000).packet_error_rate == 1.0);
    }

    TEST_CASE("empty sent list is rejected") {
        CHECK_THROWS_AS(evaluate_link({}, {}, 1000), std::invalid_argument);
    }
}

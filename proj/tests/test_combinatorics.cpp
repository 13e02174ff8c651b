#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <random>

#include "gsparc/bits.hpp"
#include "gsparc/combinatorics.hpp"
#include "oracles.hpp"

using namespace gsparc;

namespace {

// Lexicographic listing of the 10 combinations of 3 out of 5.
const std::vector<std::vector<std::uint32_t>> kTable5c3 = {
    {0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 2, 3}, {0, 2, 4},
    {0, 3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4},
};

BigInt random_index(std::mt19937_64& gen, const BigInt& bound) {
    BigInt v = 0;
    for (int i = 0; i < 3; ++i) v = (v << 64) | gen();
    return v % bound;
}

}  // namespace

TEST_CASE("binomials are exact") {
    CHECK(binomial(5, 3) == 10);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(4096, 5) == BigInt("9584242993188864"));
    CHECK(binomial(16384, 5) == BigInt("9832259989126987776"));  // exceeds 63 bits
    CHECK(sfe_index_bits(4096, 5) == 53);
    CHECK(sfe_index_bits(16384, 5) == 63);
    CHECK(sfe_index_bits(257, 2) == 15);
    CHECK(sfe_index_bits(4096, 8) == 80);
    CHECK(sfe_index_bits(5, 3) == 3);
}

TEST_CASE("rank/unrank reproduce the 5-choose-3 listing verbatim") {
    for (std::uint32_t d = 0; d < 10; ++d) {
        CHECK(sfe_unrank(d, 5, 3) == kTable5c3[d]);
        CHECK(sfe_rank(kTable5c3[d], 5, 3) == d);
    }
    CHECK(sfe_unrank(4, 5, 3) == std::vector<std::uint32_t>{0, 2, 4});
    CHECK(sfe_rank({0, 2, 4}, 5, 3) == 4);  // 10 - (4 + 1) - 1
}

TEST_CASE("d=7 at (5,3): root estimate lands on b0=1 with no correction") {
    // floor(4 (1 - 0.3^(1/3))) = 1
    CHECK(std::int64_t((5.0 - 1.0) * (1.0 - std::pow(0.3, 1.0 / 3.0))) == 1);
    UnrankStats st;
    CHECK(sfe_unrank(7, 5, 3, &st) == std::vector<std::uint32_t>{1, 2, 4});
    CHECK(st.corrections == 0);
}

TEST_CASE("exhaustive bijection against enumeration for all L <= 12") {
    for (std::uint32_t L = 1; L <= 12; ++L) {
        for (std::uint32_t K = 1; K <= L; ++K) {
            const auto all = oracles::enumerate_combinations(L, K);
            REQUIRE(BigInt(all.size()) == binomial(L, K));
            for (std::size_t d = 0; d < all.size(); ++d) {
                CHECK(sfe_unrank(BigInt(d), L, K) == all[d]);
                CHECK(sfe_rank(all[d], L, K) == BigInt(d));
            }
        }
    }
}

TEST_CASE("randomized bijection at production sizes") {
    std::mt19937_64 gen(7);
    UnrankStats st;
    for (std::uint32_t K : {5u, 8u}) {
        const BigInt total = binomial(4096, K);
        for (int trial = 0; trial < 10000; ++trial) {
            const BigInt d = random_index(gen, total);
            const auto comb = sfe_unrank(d, 4096, K, &st);
            REQUIRE(comb.size() == K);
            for (std::size_t i = 1; i < comb.size(); ++i) CHECK(comb[i] > comb[i - 1]);
            CHECK(sfe_rank(comb, 4096, K) == d);
        }
    }
    // the root estimate stays within a couple of exact-window corrections
    std::cout << "unrank max corrections per stage: " << st.max_corrections << "\n";
    CHECK(st.max_corrections <= 2);
}

TEST_CASE("adjacent indices produce adjacent combinations") {
    std::mt19937_64 gen(11);
    const BigInt total = binomial(4096, 5);
    for (int trial = 0; trial < 2000; ++trial) {
        const BigInt d = random_index(gen, total - 1);
        const auto a = sfe_unrank(d, 4096, 5);
        const auto b = sfe_unrank(d + 1, 4096, 5);
        CHECK(sfe_rank(a, 4096, 5) + 1 == sfe_rank(b, 4096, 5));
        CHECK(a < b);  // lexicographic order
    }
}

TEST_CASE("the root estimate upper-bounds the chosen object") {
    // ibar >= b0 at the first stage, over exhaustive small cases
    for (std::uint32_t L = 2; L <= 12; ++L) {
        for (std::uint32_t K = 1; K <= L; ++K) {
            const auto all = oracles::enumerate_combinations(L, K);
            for (std::size_t d = 0; d < all.size(); ++d) {
                const double frac = 1.0 - double(d) / double(all.size());
                const double est =
                    (double(L) - double(K - 1) / 2.0) * (1.0 - std::pow(frac, 1.0 / double(K)));
                CHECK(std::int64_t(std::floor(est)) >= std::int64_t(all[d][0]));
            }
        }
    }
}

TEST_CASE("unrank rejects out-of-range indices") {
    CHECK_THROWS_AS(sfe_unrank(10, 5, 3), config_error);
    CHECK_THROWS_AS(sfe_unrank(-1, 5, 3), config_error);
    CHECK_THROWS_AS(sfe_rank({2, 1, 0}, 5, 3), config_error);
    CHECK_THROWS_AS(sfe_rank({0, 1, 5}, 5, 3), config_error);
}

TEST_CASE("bit strings round-trip through hex") {
    BitString b(10);
    b.set(0, 1);
    b.set(9, 1);
    CHECK(b.to_hex() == "201");
    CHECK(BitString::from_hex("201", 10) == b);
    CHECK_THROWS_AS(BitString::from_hex("fff", 10), config_error);  // value too wide
    CHECK_THROWS_AS(BitString::from_hex("20", 10), config_error);   // wrong digit count

    BitWriter w;
    w.put(0x2cd, 10);
    const BitString v = w.take();
    BitReader r(v);
    CHECK(r.take(4) == 0xb);
    CHECK(r.take_big(6) == 0xd);
}

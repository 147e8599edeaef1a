#include <catch2/catch_amalgamated.hpp>

#include "qcoin/coins.hpp"

#include <set>

using namespace qcoin;

TEST_CASE("coin config serialization round trip") {
    auto x = coin_config::from_string("0010");
    CHECK(x.n == 4);
    CHECK(x.weight() == 1);
    CHECK(x.bits[2] == 1);
    CHECK(x.to_string() == "0010");

    auto z = coin_config::from_string("0000");
    CHECK(z.weight() == 0); // k = 0 is representable (harness use)

    CHECK_THROWS_AS(coin_config::from_string(""), std::invalid_argument);
    CHECK_THROWS_AS(coin_config::from_string("01x0"), std::invalid_argument);
}

TEST_CASE("coin config word bridging is big endian") {
    auto x = coin_config::from_string("0010");
    CHECK(x.to_word() == 0b0010u);
    CHECK(coin_config::from_word(4, 0b0010u).to_string() == "0010");
    CHECK(coin_config::from_word(6, 1u).to_string() == "000001");
    for (uint64_t w = 0; w < 32; ++w)
        CHECK(coin_config::from_word(5, w).to_word() == w);
}

TEST_CASE("balance query serialization and pan validation") {
    auto q = balance_query::from_string("+-00");
    CHECK(q.n == 4);
    CHECK(q.pan_size() == 1);
    CHECK(q.to_string() == "+-00");
    CHECK(balance_query::from_string("0000").pan_size() == 0);

    // pans must have equal size and fit in the coin set
    CHECK_THROWS_AS(balance_query::from_string("++-0"), std::invalid_argument);
    CHECK_THROWS_AS(balance_query::from_string("+?-0"), std::invalid_argument);
    CHECK_THROWS_AS(balance_query::from_string(""), std::invalid_argument);
}

TEST_CASE("chi on worked examples") {
    auto x = coin_config::from_string("0001");
    CHECK(chi(x, balance_query::from_string("+-00")) == 0); // no false coin on a pan
    CHECK(chi(x, balance_query::from_string("00+-")) == 1); // false coin tilts right pan

    auto y = coin_config::from_string("0110");
    CHECK(chi(y, balance_query::from_string("+--+")) == 1); // both false on minus pans
    CHECK(chi(y, balance_query::from_string("+-+-")) == 0); // one on each side cancels

    CHECK_THROWS_AS(chi(x, balance_query::from_string("+-0")), std::invalid_argument);
}

TEST_CASE("balance oracle phase matches chi") {
    auto x = coin_config::from_string("0110");
    CHECK(b_oracle_phase(x, balance_query::from_string("+--+")) == -1);
    CHECK(b_oracle_phase(x, balance_query::from_string("+-+-")) == 1);
}

TEST_CASE("balance oracle cannot separate a config from its complement") {
    for (int n : {4, 6, 8}) {
        for (uint64_t xw = 0; xw < (1ull << n); ++xw) {
            auto x = coin_config::from_word(n, xw);
            auto xc = x.complement();
            // exhaustive over all pan assignments via ternary counter
            std::vector<int8_t> s(n, 0);
            while (true) {
                int plus = 0, minus = 0;
                for (int8_t v : s) {
                    plus += v == 1;
                    minus += v == -1;
                }
                if (plus == minus) {
                    balance_query q{n, s};
                    REQUIRE(chi(x, q) == chi(xc, q));
                }
                int i = 0;
                for (; i < n; ++i) {
                    if (s[i] < 1) {
                        ++s[i];
                        break;
                    }
                    s[i] = -1;
                }
                if (i == n) break;
            }
            if (n == 8 && xw > 64) break; // n=8 spot check only
        }
    }
}

TEST_CASE("inner product phase on worked examples") {
    auto x = coin_config::from_string("001");
    CHECK(ip_phase(x, coin_config::from_string("011")) == -1);
    CHECK(ip_phase(x, coin_config::from_string("110")) == 1);
    CHECK(ip_phase(coin_config::from_string("101"), coin_config::from_string("101")) == 1);
    // masks must have an even number of coins
    CHECK_THROWS_AS(ip_phase(x, coin_config::from_string("010")), std::invalid_argument);
}

TEST_CASE("inner product phase is complement invariant") {
    int n = 8;
    for (uint64_t mw = 0; mw < (1ull << n); ++mw) {
        if (std::popcount(mw) % 2) continue;
        auto m = coin_config::from_word(n, mw);
        for (uint64_t xw = 0; xw < (1ull << n); xw += 7) {
            auto x = coin_config::from_word(n, xw);
            CHECK(ip_phase(x, m) == ip_phase(x.complement(), m));
        }
    }
}

TEST_CASE("split parity query construction") {
    CHECK(split_parity_query(coin_config::from_string("0110")).to_string() == "0+-0");
    CHECK(split_parity_query(coin_config::from_string("1111")).to_string() == "++--");
    CHECK(split_parity_query(coin_config::from_string("0000")).to_string() == "0000");
    CHECK_THROWS_AS(split_parity_query(coin_config::from_string("0100")),
                    std::invalid_argument);

    // pans tile exactly the mask support, lexicographic first half on the left
    for (uint64_t mw = 0; mw < (1u << 10); ++mw) {
        if (std::popcount(mw) % 2) continue;
        auto m = coin_config::from_word(10, mw);
        auto q = split_parity_query(m);
        int seen_minus = 0;
        for (int i = 0; i < 10; ++i) {
            CHECK((q.signs[i] != 0) == (m.bits[i] != 0));
            if (q.signs[i] == -1) seen_minus = 1;
            if (q.signs[i] == 1) CHECK(!seen_minus);
        }
        if (mw > 600) break;
    }
}

TEST_CASE("split parity query realizes mask parity on sparse overlaps") {
    // with at most one false coin on the mask, the balance answer equals the
    // mask parity bit
    for (int n : {6, 10}) {
        for (uint64_t mw = 0; mw < (1ull << n); ++mw) {
            if (std::popcount(mw) % 2) continue;
            auto m = coin_config::from_word(n, mw);
            auto q = split_parity_query(m);
            for (uint64_t xw = 0; xw < (1ull << n); ++xw) {
                if (std::popcount(xw & mw) > 1) continue;
                auto x = coin_config::from_word(n, xw);
                REQUIRE(b_oracle_phase(x, q) == ip_phase(x, m));
            }
            if (n == 10 && mw > 40) break;
        }
    }
}

TEST_CASE("big pan splitting on worked examples") {
    auto [q1, q2] = bigpan_split(coin_config::from_string("11000000"));
    CHECK(q1.to_string() == "+0+--000");
    CHECK(q2.to_string() == "0++--000");

    auto [r1, r2] = bigpan_split(coin_config::from_string("0000"));
    CHECK(r1.to_string() == "+-00");
    CHECK(r2.to_string() == "+-00");
}

TEST_CASE("big pan splitting yields even masks recombining to the input") {
    for (int n : {4, 6, 8, 10, 12}) {
        int T = 2 * (n / 4);
        for (uint64_t mw = 0; mw < (1ull << n); ++mw) {
            if (std::popcount(mw) % 2) continue;
            if ((int)std::popcount(mw) / 2 > T) continue;
            auto m = coin_config::from_word(n, mw);
            auto [q1, q2] = bigpan_split(m);
            // recover masks from the pan supports
            uint64_t m1 = 0, m2 = 0;
            for (int i = 0; i < n; ++i) {
                if (q1.signs[i] != 0) m1 |= 1ull << (n - 1 - i);
                if (q2.signs[i] != 0) m2 |= 1ull << (n - 1 - i);
            }
            REQUIRE(std::popcount(m1) % 2 == 0);
            REQUIRE(std::popcount(m2) % 2 == 0);
            REQUIRE((m1 ^ m2) == mw);
            REQUIRE(q1.pan_size() == T / 2);
            REQUIRE(q2.pan_size() == T / 2);
            if (mw > 5000) break;
        }
    }
    // support too large for the pan budget
    CHECK_THROWS_AS(bigpan_split(coin_config::from_string("111111")),
                    std::invalid_argument);
}

TEST_CASE("mask phase product identity under big pan splitting") {
    for (int n : {6, 8, 10}) {
        for (uint64_t mw = 0; mw < (1ull << n); ++mw) {
            if (std::popcount(mw) % 2) continue;
            if ((int)std::popcount(mw) / 2 > 2 * (n / 4)) continue;
            auto m = coin_config::from_word(n, mw);
            auto [q1, q2] = bigpan_split(m);
            uint64_t m1 = 0, m2 = 0;
            for (int i = 0; i < n; ++i) {
                if (q1.signs[i] != 0) m1 |= 1ull << (n - 1 - i);
                if (q2.signs[i] != 0) m2 |= 1ull << (n - 1 - i);
            }
            for (uint64_t xw = 0; xw < (1ull << n); ++xw) {
                auto x = coin_config::from_word(n, xw);
                REQUIRE(ip_phase(x, coin_config::from_word(n, m1)) *
                            ip_phase(x, coin_config::from_word(n, m2)) ==
                        ip_phase(x, m));
            }
            if (mw > 300) break;
        }
    }
}

TEST_CASE("weighing answers realize the split parities on sparse configs") {
    // a lone false coin tilts exactly the pans whose support contains it
    for (int n : {6, 8, 10}) {
        for (uint64_t mw = 0; mw < (1ull << n); ++mw) {
            if (std::popcount(mw) % 2) continue;
            if ((int)std::popcount(mw) / 2 > 2 * (n / 4)) continue;
            auto m = coin_config::from_word(n, mw);
            auto [q1, q2] = bigpan_split(m);
            for (int i = 0; i <= n; ++i) {
                auto x = coin_config::from_word(n, i == n ? 0 : 1ull << i);
                REQUIRE(b_oracle_phase(x, q1) * b_oracle_phase(x, q2) == ip_phase(x, m));
            }
            if (mw > 300) break;
        }
    }
    // two false coins on one pan tilt it without flipping the answer, so the
    // weighing-level product is weaker than the mask parity off this scope
    auto [q1, q2] = bigpan_split(coin_config::from_string("11000000"));
    auto x = coin_config::from_string("10100000");
    CHECK(b_oracle_phase(x, q1) * b_oracle_phase(x, q2) == 1);
    CHECK(ip_phase(x, coin_config::from_string("11000000")) == -1);
}

TEST_CASE("quasi balanced probability table") {
    auto x = coin_config::from_string("0011");
    CHECK(quasi_prob_balanced(x, coin_config::from_string("1100")) == 1.0);
    CHECK(quasi_prob_balanced(x, coin_config::from_string("0110")) == 0.0);
    CHECK(quasi_prob_balanced(x, coin_config::from_string("0011")) ==
          Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(quasi_prob_balanced(coin_config::from_string("1111"),
                              coin_config::from_string("1111")) ==
          Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quasi oracle rotation amplitudes") {
    // overlap 2 -> balanced probability 1/sqrt 2
    auto x = coin_config::from_string("0011");
    auto q = coin_config::from_string("0011");
    auto a1 = quasi_oracle_amps(x, q, 1);
    CHECK(a1.stay == Catch::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
    CHECK(a1.flip == Catch::Approx(-std::sqrt(1.0 - std::sqrt(0.5))).epsilon(1e-14));
    auto a0 = quasi_oracle_amps(x, q, 0);
    CHECK(a0.flip > 0);
    CHECK(a0.stay * a0.stay + a0.flip * a0.flip == Catch::Approx(1.0).epsilon(1e-14));
}

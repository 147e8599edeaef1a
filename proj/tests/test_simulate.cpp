#include <catch2/catch_amalgamated.hpp>

#include "qcoin/simulate.hpp"

#include <cstdlib>
#include <map>

using namespace qcoin;

namespace {

// Literal reference: one branch simulated over its actual ordered partitions,
// no sector-uniformity assumption. Returns the signal and garbage mass.
struct branch_ref {
    double signal;
    double garbage_sq;
    long queries;
};

branch_ref simulate_branch_literal(const coin_config& x, uint64_t mask,
                                   const search_schedule& sched) {
    int n = x.n;
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
        if ((mask >> (n - 1 - i)) & 1) support.push_back(i);
    int w = (int)support.size();

    // ordered partitions: the chosen half goes on the left pan
    std::vector<balance_query> queries;
    std::vector<int> balanced;
    for (uint64_t pick = 0; pick < (1ull << w); ++pick) {
        if (std::popcount(pick) != w / 2) continue;
        balance_query q;
        q.n = n;
        q.signs.assign(n, 0);
        for (int j = 0; j < w; ++j) q.signs[support[j]] = (pick >> j) & 1 ? 1 : -1;
        queries.push_back(q);
        balanced.push_back(chi(x, q) == 0);
    }
    size_t P = queries.size();
    auto stages = sched.expanded();
    size_t S = stages.size();

    // amplitudes indexed by (partition, flag); flag 0 is active
    std::vector<std::vector<double>> v(S + 1, std::vector<double>(P, 0.0));
    double u = 1.0 / std::sqrt((double)P);
    for (size_t i = 0; i < P; ++i) v[0][i] = u;
    long charged = 0;

    auto oracle_phase = [&] {
        ++charged;
        for (size_t i = 0; i < P; ++i)
            if (balanced[i]) v[0][i] = -v[0][i];
    };
    auto reflect = [&] {
        double mean = 0;
        for (size_t i = 0; i < P; ++i) mean += v[0][i];
        mean /= (double)P;
        for (size_t i = 0; i < P; ++i) v[0][i] = 2 * mean - v[0][i];
    };
    auto check_swap = [&](size_t s) {
        ++charged;
        for (size_t i = 0; i < P; ++i)
            if (balanced[i]) std::swap(v[0][i], v[s + 1][i]);
    };

    for (size_t s = 0; s < S; ++s) {
        for (int t = 0; t < stages[s]; ++t) {
            oracle_phase();
            reflect();
        }
        check_swap(s);
    }
    ++charged; // payload flip
    for (size_t i = 0; i < P; ++i)
        if (!balanced[i]) v[0][i] = -v[0][i];
    for (size_t s = S; s-- > 0;) {
        check_swap(s);
        for (int t = 0; t < stages[s]; ++t) {
            reflect();
            oracle_phase();
        }
    }

    double sig = 0;
    for (size_t i = 0; i < P; ++i) sig += u * v[0][i];
    double c2 = 0;
    for (size_t i = 0; i < P; ++i) {
        double d = v[0][i] - sig * u;
        c2 += d * d;
    }
    for (size_t s = 1; s <= S; ++s)
        for (size_t i = 0; i < P; ++i) c2 += v[s][i] * v[s][i];
    return {sig, c2, charged};
}

} // namespace

TEST_CASE("partition fraction closed form") {
    CHECK(partition_fraction(4, 2) == Catch::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(partition_fraction(0, 0) == 1.0);
    CHECK(partition_fraction(6, 0) == 1.0);
    CHECK(partition_fraction(6, 6) == 1.0);
    CHECK(partition_fraction(6, 3) == 0.0);
    CHECK_THROWS_AS(partition_fraction(5, 2), std::invalid_argument);
    CHECK(partition_fraction_exact(4, 2) == bigrat(2, 3));
    CHECK(partition_fraction_exact(8, 4) == bigrat(36, 70));
    for (long w = 2; w <= 64; w += 2)
        for (long m = 0; m <= w; ++m) {
            double d = partition_fraction(w, m);
            double e = (double)partition_fraction_exact(w, m);
            REQUIRE(d == Catch::Approx(e).margin(1e-13));
            if (m > 0 && m < w) REQUIRE(d <= 2.0 / 3.0 + 1e-12); // interior max at (4,2)
        }
}

TEST_CASE("class enumeration on a worked example") {
    auto cls = enumerate_classes(4, 1);
    std::map<std::pair<long, long>, double> got;
    for (auto& c : cls) got[{c.w, c.m}] = std::exp(c.log_count);
    REQUIRE(got.size() == 4);
    CHECK(got[{0, 0}] == Catch::Approx(1.0));
    CHECK(got[{2, 0}] == Catch::Approx(3.0));
    CHECK(got[{2, 1}] == Catch::Approx(3.0));
    CHECK(got[{4, 1}] == Catch::Approx(1.0));
}

TEST_CASE("class counts cover the even masks exactly") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 2}, {9, 3}, {14, 5}}) {
        bigint total = 0;
        for (auto& c : enumerate_classes(n, k)) total += class_count_exact(n, k, c.w, c.m);
        CHECK(total == bigint(1) << (n - 1));
    }
}

TEST_CASE("charge totals per oracle role") {
    auto s = plan_schedule(1);
    CHECK(charge_total(s, balance_costs) == 49);
    CHECK(charge_total(s, quasi_costs) == 62); // 2 * (1 + 2 * 15 iterations)
    CHECK(charge_total(plan_schedule(2), balance_costs) == 73);
}

TEST_CASE("full engine agrees with the literal partition reference") {
    for (auto [xs, kname] : std::vector<std::pair<std::string, int>>{
             {"00010100", 2}, {"10000001", 2}, {"01100001", 3}, {"000101", 2}}) {
        auto x = coin_config::from_string(xs);
        auto sched = plan_schedule(kname);
        query_ledger led;
        b_oracle oracle(x, led);
        auto full = find_star_full(oracle, sched, 12);
        CHECK(full.queries == sched.total_queries());
        CHECK(led.balance == sched.total_queries());

        double garbage_total = 0;
        for (uint64_t q = 0; q < (1ull << x.n); ++q) {
            if (std::popcount(q) % 2) continue;
            auto ref = simulate_branch_literal(x, q, sched);
            REQUIRE(full.signal[q] == Catch::Approx(ref.signal).margin(1e-11));
            garbage_total += ref.garbage_sq;
            REQUIRE(ref.queries == sched.total_queries());
            // closed form: signal = 1 - 2 beta^2
            long w = std::popcount(q), m = std::popcount(q & x.to_word());
            double beta = ladder_residual_amp(partition_fraction(w, m), sched.expanded());
            REQUIRE(ref.signal == Catch::Approx(branch_signal(beta)).margin(1e-11));
            REQUIRE(ref.garbage_sq == Catch::Approx(branch_garbage_sq(beta)).margin(1e-11));
        }
        double g2 = std::pow(2.0, -(double)(x.n - 1));
        CHECK(full.garbage_word == Catch::Approx(g2 * g2 * garbage_total).margin(1e-13));
    }
}

TEST_CASE("full and class engines agree") {
    for (auto [xs, dummy] : std::vector<std::pair<std::string, int>>{
             {"0001010000", 0}, {"1000000001", 0}, {"0110000101", 0}, {"00010100", 0}}) {
        auto x = coin_config::from_string(xs);
        int k = x.weight();
        auto sched = plan_schedule(k);
        query_ledger led;
        b_oracle oracle(x, led);
        auto full = find_star_full(oracle, sched, 12);
        auto cls = find_star_classes(x.n, k, sched);
        REQUIRE(full.a_x == Catch::Approx(cls.a_x).margin(1e-11));
        REQUIRE(full.eps == Catch::Approx(cls.eps).margin(1e-11));
        REQUIRE(full.garbage_word == Catch::Approx(cls.garbage_word).margin(1e-13));
        REQUIRE(full.success == Catch::Approx(cls.success).margin(1e-11));
        REQUIRE(full.queries == cls.queries);
    }
}

TEST_CASE("full engine success does not depend on the planted configuration") {
    auto sched = plan_schedule(2);
    double base = -1;
    for (std::string xs : {"000000011", "010000010", "100100000", "001001000"}) {
        query_ledger led;
        b_oracle oracle(coin_config::from_string(xs), led);
        double s = find_star_full(oracle, sched, 12).success;
        if (base < 0) base = s;
        REQUIRE(s == Catch::Approx(base).margin(1e-12));
    }
}

TEST_CASE("class engine closes its mass and stays near certainty") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{8, 2}, {11, 3}, {64, 7}, {257, 12}}) {
        auto r = find_star_classes(n, k, plan_schedule(k));
        CHECK(r.mass_check == Catch::Approx(1.0).margin(1e-9));
        CHECK(r.success > 0.997);
        CHECK(r.success <= 1.0 + 1e-12);
        CHECK(r.eps < 4 * cal::residual_target);
    }
    CHECK_THROWS_AS(find_star_classes(8, 4, plan_schedule(4)), std::invalid_argument);
}

TEST_CASE("class engine is deterministic across worker counts") {
    auto run = [] {
        auto r = find_star_classes(257, 12, plan_schedule(12));
        return std::pair{r.success, r.eps};
    };
    setenv("QCOIN_THREADS", "1", 1);
    auto a = run();
    setenv("QCOIN_THREADS", "3", 1);
    auto b = run();
    unsetenv("QCOIN_THREADS");
    auto c = run();
    REQUIRE(a.first == b.first);   // bitwise equality, not approximate
    REQUIRE(a.second == b.second);
    REQUIRE(a.first == c.first);
}

TEST_CASE("quasi engines mirror the balance engines") {
    auto x = coin_config::from_string("00010100");
    auto sched = plan_schedule(2);
    query_ledger led;
    q_oracle oracle(x, led);
    auto full = quasi_full(oracle, sched, 12);
    auto cls = quasi_classes(8, 2, sched);
    CHECK(led.quasi == charge_total(sched, quasi_costs));
    CHECK(led.balance == 0);
    CHECK(full.success == Catch::Approx(cls.success).margin(1e-11));
    CHECK(cls.success > 0.999);
    // overlap-2 branches end at the 1/sqrt2 residual, nonzero but tiny
    double beta = ladder_residual_amp(1.0 / std::numbers::sqrt2, sched.expanded());
    CHECK(beta * beta < cal::residual_target);
    CHECK(beta * beta > 0);
}

TEST_CASE("probability vector sampling is seed deterministic") {
    std::vector<double> probs(8, 0.0);
    probs[2] = 0.3;
    probs[5] = 0.7;
    rng64 a(99), b(99);
    for (int t = 0; t < 100; ++t) {
        uint64_t w = sample_from_probs(probs, a);
        REQUIRE((w == 2 || w == 5));
        REQUIRE(w == sample_from_probs(probs, b));
    }
}

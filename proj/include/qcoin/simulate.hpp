#pragma once

// Exact simulation engines for the staged search. The full engine walks every
// even parity mask branch of a concrete configuration query-major, charging
// the oracle handle once per coherent application. The class engine aggregates
// branches by (mask size, overlap) and evaluates the closed form residuals, so
// it scales to thousands of coins.
//
// Within one branch the amplitudes stay uniform over the balanced and tilted
// partition sectors (the preparation, the oracle phase and the reflection all
// preserve sector uniformity), so a branch reduces to a good/bad pair plus one
// inert flag per stage. The literal per-partition dynamics is reproduced in
// the test suite and must agree.

#include "qcoin/amplify.hpp"
#include "qcoin/oracle.hpp"
#include "qcoin/parallel.hpp"
#include "qcoin/pure_state.hpp"
#include "qcoin/wtransform.hpp"

#include <vector>

namespace qcoin {

// good fraction of the ordered equal partitions of a mask of size w holding m
// false coins: both pans take m/2 false coins each
inline double partition_fraction(long w, long m) {
    if (w < 0 || w % 2 || m < 0 || m > w)
        throw std::invalid_argument("partition_fraction: bad class");
    if (m % 2) return 0.0;
    if (m == 0 || m == w) return 1.0;
    return std::exp(log_binomial(m, m / 2) + log_binomial(w - m, (w - m) / 2) -
                    log_binomial(w, w / 2));
}

inline bigrat partition_fraction_exact(long w, long m) {
    if (w < 0 || w % 2 || m < 0 || m > w)
        throw std::invalid_argument("partition_fraction_exact: bad class");
    if (m % 2) return 0;
    return bigrat(binomial_exact(m, m / 2) * binomial_exact(w - m, (w - m) / 2),
                  binomial_exact(w, w / 2));
}

struct branch_class {
    long w = 0; // mask size (even)
    long m = 0; // false coins inside the mask
    double log_count = 0;
};

inline bigint class_count_exact(int n, int k, long w, long m) {
    return binomial_exact(k, m) * binomial_exact(n - k, w - m);
}

inline std::vector<branch_class> enumerate_classes(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("enumerate_classes: bad k");
    std::vector<branch_class> out;
    for (long w = 0; w <= n; w += 2) {
        long lo = std::max(0L, w - (n - k));
        long hi = std::min((long)k, w);
        for (long m = lo; m <= hi; ++m)
            out.push_back({w, m, log_binomial(k, m) + log_binomial(n - k, w - m)});
    }
    return out;
}

// ledger cost of one logical oracle application in each role
struct engine_costs {
    long prep = 0, iter = 1, check = 1, flip = 1;
};

inline constexpr engine_costs balance_costs{0, 1, 1, 1};
inline constexpr engine_costs quasi_costs{1, 2, 0, 0};

inline long charge_total(const search_schedule& s, const engine_costs& c) {
    long fwd = c.prep;
    for (int t : s.expanded()) fwd += (long)t * c.iter + c.check;
    return 2 * fwd + c.flip;
}

struct class_engine_result {
    int n = 0, k = 0;
    double a_x = 0;         // amplitude left on the planted configuration
    double eps = 0;         // 2 * (1 - a_x)
    double garbage_word = 0; // uniform garbage probability per lower-half word
    double success = 0;     // a_x^2 + garbage_word
    double mass_check = 0;  // sum of normalized class counts, should be 1
    long queries = 0;
};

namespace detail {

template <class FracFn>
class_engine_result class_engine(int n, int k, const search_schedule& sched,
                                 FracFn&& frac, const engine_costs& costs) {
    if (k < 1 || 2 * k >= n) throw std::invalid_argument("class engine: need 1 <= k < n/2");
    auto stages = sched.expanded();
    double log_norm = (n - 1) * std::numbers::ln2;

    struct slot {
        double mass = 0, eps = 0, garbage = 0;
    };
    long nw = n / 2 + 1;
    std::vector<slot> slots(nw);
    parallel_for(nw, [&](long wi) {
        long w = 2 * wi;
        long lo = std::max(0L, w - (n - k));
        long hi = std::min((long)k, w);
        kahan_sum mass, eps, garbage;
        for (long m = lo; m <= hi; ++m) {
            double cnt = std::exp(log_binomial(k, m) + log_binomial(n - k, w - m) - log_norm);
            double beta = ladder_residual_amp(frac(w, m), stages);
            mass.add(cnt);
            if (m % 2 == 0) eps.add(cnt * beta * beta);
            garbage.add(cnt * branch_garbage_sq(beta));
        }
        slots[wi] = {mass.value(), eps.value(), garbage.value()};
    });

    kahan_sum mass, epst, garb;
    for (auto& s : slots) {
        mass.add(s.mass);
        epst.add(s.eps);
        garb.add(s.garbage);
    }
    class_engine_result r;
    r.n = n;
    r.k = k;
    r.mass_check = mass.value();
    if (std::abs(r.mass_check - 1.0) > 1e-8)
        throw std::runtime_error("class engine: class mass does not close");
    r.eps = 4.0 * epst.value();
    r.a_x = 1.0 - r.eps / 2.0;
    double g2 = std::exp(-log_norm); // gamma^2; underflows to 0 for huge n
    r.garbage_word = g2 * garb.value();
    r.success = r.a_x * r.a_x + r.garbage_word;
    r.queries = charge_total(sched, costs);
    return r;
}

} // namespace detail

inline class_engine_result find_star_classes(int n, int k, const search_schedule& sched) {
    return detail::class_engine(
        n, k, sched, [](long w, long m) { return partition_fraction(w, m); }, balance_costs);
}

inline class_engine_result quasi_classes(int n, int k, const search_schedule& sched) {
    return detail::class_engine(
        n, k, sched,
        [](long, long m) {
            if (m == 0) return 1.0;
            if (m % 2) return 0.0;
            return 1.0 / std::sqrt((double)m);
        },
        quasi_costs);
}

struct full_engine_result {
    int n = 0, k = 0;
    double a_x = 0;
    double eps = 0;
    double garbage_word = 0;
    double success = 0;
    std::vector<double> signal; // per mask word, zero on odd parity words
    std::vector<double> r_prob; // per word, zero outside the lower half
    long queries = 0;           // audited against the oracle ledger
};

namespace detail {

inline void fwht(std::vector<double>& a) {
    for (size_t len = 1; len < a.size(); len <<= 1)
        for (size_t i = 0; i < a.size(); i += len << 1)
            for (size_t j = i; j < i + len; ++j) {
                double u = a[j], v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
}

// query-major staged ladder over all even parity mask branches
template <class Oracle, class FracFn>
full_engine_result full_engine(Oracle& oracle, const search_schedule& sched,
                               FracFn&& frac, const engine_costs& costs, int size_cap) {
    const coin_config& x = oracle.config_for_simulation();
    int n = x.n;
    int k = x.weight();
    if (k < 1 || 2 * k >= n) throw std::invalid_argument("full engine: need 1 <= k < n/2");
    if (n > size_cap) throw resource_error("full engine: register too wide");
    uint64_t xw = x.to_word();
    long before = oracle.ledger().balance + oracle.ledger().quasi;

    std::vector<uint64_t> masks;
    masks.reserve(1ull << (n - 1));
    for (uint64_t q = 0; q < (1ull << n); ++q)
        if (std::popcount(q) % 2 == 0) masks.push_back(q);
    size_t B = masks.size();

    std::vector<double> ug(B), ub(B), g(B), bd(B);
    for (size_t i = 0; i < B; ++i) {
        long w = std::popcount(masks[i]);
        long m = std::popcount(masks[i] & xw);
        double th = std::asin(std::sqrt(std::min(1.0, frac(w, m, masks[i]))));
        ug[i] = std::sin(th);
        ub[i] = std::cos(th);
        g[i] = ug[i];
        bd[i] = ub[i];
    }

    auto stages = sched.expanded();
    size_t S = stages.size();
    std::vector<std::vector<double>> found(S, std::vector<double>(B, 0.0));

    auto oracle_phase = [&] {
        oracle.charge(costs.iter);
        for (size_t i = 0; i < B; ++i) g[i] = -g[i];
    };
    auto reflect = [&] {
        for (size_t i = 0; i < B; ++i) {
            double d = ug[i] * g[i] + ub[i] * bd[i];
            g[i] = 2 * d * ug[i] - g[i];
            bd[i] = 2 * d * ub[i] - bd[i];
        }
    };

    // the check exchanges the active good sector with the stage flag; as a
    // unitary it is its own inverse, and on the way back the flags keep
    // whatever garbage the reversal leaves behind
    oracle.charge(costs.prep);
    for (size_t s = 0; s < S; ++s) {
        for (int t = 0; t < stages[s]; ++t) {
            oracle_phase();
            reflect();
        }
        oracle.charge(costs.check);
        found[s].swap(g); // flags start empty, so g comes back zero
    }
    oracle.charge(costs.flip);
    for (size_t i = 0; i < B; ++i) bd[i] = -bd[i];
    for (size_t s = S; s-- > 0;) {
        oracle.charge(costs.check);
        g.swap(found[s]);
        for (int t = 0; t < stages[s]; ++t) {
            reflect();
            oracle_phase();
        }
    }
    oracle.charge(costs.prep);

    full_engine_result r;
    r.n = n;
    r.k = k;
    r.signal.assign(1ull << n, 0.0);
    double garbage_total = 0; // sum over branches of the garbage mass
    for (size_t i = 0; i < B; ++i) {
        double s = ug[i] * g[i] + ub[i] * bd[i];
        double dg = g[i] - s * ug[i], db = bd[i] - s * ub[i];
        double c2 = dg * dg + db * db;
        for (size_t st = 0; st < S; ++st) c2 += found[st][i] * found[st][i];
        garbage_total += c2;
        r.signal[masks[i]] = s;
    }

    // the run starts from the uniform mask state, so the branch signals carry
    // the parity phases themselves; the inverse W is a plain phase transform
    double g2 = std::pow(2.0, -(double)(n - 1)); // gamma^2
    auto F = r.signal;
    fwht(F);
    r.a_x = g2 * F[xw];
    r.eps = 2.0 * (1.0 - r.a_x);
    r.garbage_word = g2 * g2 * garbage_total;
    r.r_prob.assign(1ull << n, 0.0);
    double norm = 0;
    for (uint64_t y = 0; y < (1ull << n); ++y) {
        if (!in_lower_half(n, y)) continue;
        double amp = g2 * F[y];
        r.r_prob[y] = amp * amp + r.garbage_word;
        norm += r.r_prob[y];
    }
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::runtime_error("full engine: output norm does not close");
    r.success = r.r_prob[xw];
    r.queries = oracle.ledger().balance + oracle.ledger().quasi - before;
    if (r.queries != charge_total(sched, costs))
        throw std::runtime_error("full engine: ledger drifted from the schedule");
    return r;
}

} // namespace detail

inline full_engine_result find_star_full(b_oracle& oracle, const search_schedule& sched,
                                         int size_cap = 12) {
    return detail::full_engine(
        oracle, sched,
        [](long w, long m, uint64_t) { return partition_fraction(w, m); }, balance_costs,
        size_cap);
}

inline full_engine_result quasi_full(q_oracle& oracle, const search_schedule& sched,
                                     int size_cap = 12) {
    const coin_config& x = oracle.config_for_simulation();
    return detail::full_engine(
        oracle, sched,
        [&x](long, long, uint64_t mask) {
            return quasi_prob_balanced(x, coin_config::from_word(x.n, mask));
        },
        quasi_costs, size_cap);
}

// Born sample from a word-indexed probability vector
inline uint64_t sample_from_probs(const std::vector<double>& probs, rng64& rng) {
    double total = 0;
    for (double p : probs) total += p;
    if (total <= 0) throw std::invalid_argument("sample_from_probs: empty distribution");
    double target = rng.uniform() * total;
    double acc = 0;
    uint64_t last = 0;
    for (uint64_t w = 0; w < probs.size(); ++w) {
        if (probs[w] <= 0) continue;
        acc += probs[w];
        last = w;
        if (acc > target) return w;
    }
    return last;
}

} // namespace qcoin

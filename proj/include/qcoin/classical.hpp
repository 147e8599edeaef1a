#pragma once

// Classical baselines: the halving search for one fake, an exhaustive
// minimal-depth decision tree search at desk scale, and a majority-reference
// group splitter for general k. All three are deterministic: identical ledger
// and verdict on every run.

#include "qcoin/combinat.hpp"
#include "qcoin/parallel.hpp"
#include "qcoin/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qcoin {

inline int ceil_log2(long v) {
    int d = 0;
    while ((1L << d) < v) ++d;
    return d;
}

// halving search for a single fake coin: each weighing puts about half of the
// live candidates on the pans (a tilt keeps them, a balance drops them), so
// the worst case over hidden positions is exactly ceil(log2 n) weighings
inline solve_report classical_k1(int n, b_oracle& oracle) {
    if (n < 2) throw std::domain_error("classical_k1: need n >= 2");
    const query_ledger before = oracle.ledger();
    solve_report rep;
    rep.mode = solve_mode::classical;

    std::vector<int> cand(n);
    for (int i = 0; i < n; ++i) cand[i] = i;
    bool undecided = false;
    while (cand.size() > 1) {
        const int s = (int)cand.size();
        const bool have_good = s < n; // anything ever dropped is known genuine
        int h = s / 2;
        if (h % 2 && !have_good) h += 1; // no pad coin available: even the pans up
        if (h >= s) {
            // two coins, one fake: they are complements and no weighing
            // separates them; spend the single legal weighing and flag
            detail::weigh(oracle, n, {cand[0]}, {cand[1]});
            undecided = true;
            break;
        }
        std::vector<int> plus(cand.begin(), cand.begin() + (h + 1) / 2);
        std::vector<int> minus(cand.begin() + (h + 1) / 2, cand.begin() + h);
        if (h % 2) {
            // pad the light pan with a known-genuine coin
            for (int i = 0; i < n; ++i)
                if (std::find(cand.begin(), cand.end(), i) == cand.end()) {
                    minus.push_back(i);
                    break;
                }
        }
        if (detail::weigh(oracle, n, plus, minus))
            cand.erase(cand.begin() + h, cand.end());
        else
            cand.erase(cand.begin(), cand.begin() + h);
    }

    std::vector<uint8_t> bits(n, false);
    bits[cand.front()] = 1;
    rep.x_found = coin_config{n, bits};
    rep.success = !undecided && rep.x_found == oracle.config_for_simulation();
    rep.success_probability = undecided ? 0.5 : (rep.success ? 1.0 : 0.0);
    rep.ledger = detail::ledger_diff(oracle.ledger(), before);
    return rep;
}

// ---------------------------------------------------------------------------
// exhaustive minimal-depth decision tree search (desk scale)

struct decision_tree {
    balance_query node;                       // empty signs on a leaf
    std::optional<coin_config> verdict;       // set on leaves only
    std::unique_ptr<decision_tree> balanced;  // answer 0 branch
    std::unique_ptr<decision_tree> tilted;    // answer 1 branch
};

namespace detail {

constexpr int tree_search_cap = 6;

// all equal-pan queries on n coins, reduced to their balanced-set signature
// over the candidate configurations (queries inducing the same split are
// interchangeable for a decision tree)
struct tree_space {
    std::vector<coin_config> configs;
    std::vector<balance_query> queries; // one representative per signature
    std::vector<uint32_t> balanced;     // bit i: configs[i] balances the query
};

inline tree_space build_tree_space(int n, int k) {
    tree_space sp;
    for (uint64_t w = 0; w < (1ull << n); ++w)
        if (std::popcount(w) == k) sp.configs.push_back(coin_config::from_word(n, w));
    std::map<uint32_t, balance_query> seen;
    std::vector<int8_t> signs(n, 0);
    const auto walk = [&](auto&& self, int i, int plus, int minus) -> void {
        if (i == n) {
            if (plus != minus || plus == 0) return;
            balance_query q;
            q.n = n;
            q.signs = signs;
            uint32_t sig = 0;
            for (size_t j = 0; j < sp.configs.size(); ++j)
                if (chi(sp.configs[j], q) == 0) sig |= 1u << j;
            seen.emplace(sig, std::move(q));
            return;
        }
        for (int8_t v : {int8_t(0), int8_t(1), int8_t(-1)}) {
            signs[i] = v;
            self(self, i + 1, plus + (v == 1), minus + (v == -1));
        }
        signs[i] = 0;
    };
    walk(walk, 0, 0, 0);
    for (auto& [sig, q] : seen) {
        sp.balanced.push_back(sig);
        sp.queries.push_back(std::move(q));
    }
    return sp;
}

// minimal depth distinguishing the candidate set, with memoized states and an
// information-floor cutoff
inline int tree_depth(const tree_space& sp, uint32_t live, std::map<uint32_t, int>& memo) {
    const int cnt = std::popcount(live);
    if (cnt <= 1) return 0;
    if (const auto it = memo.find(live); it != memo.end()) return it->second;
    const int floor = ceil_log2(cnt);
    int best = -1;
    for (size_t qi = 0; qi < sp.balanced.size(); ++qi) {
        const uint32_t bal = live & sp.balanced[qi];
        if (bal == 0 || bal == live) continue; // no information
        const int d = 1 + std::max(tree_depth(sp, bal, memo),
                                   tree_depth(sp, live & ~sp.balanced[qi], memo));
        if (best < 0 || d < best) best = d;
        if (best == floor) break; // cannot do better than the information floor
    }
    if (best < 0)
        throw std::runtime_error("decision tree: candidate set is indistinguishable");
    memo.emplace(live, best);
    return best;
}

inline std::unique_ptr<decision_tree> tree_build(const tree_space& sp, uint32_t live,
                                                 std::map<uint32_t, int>& memo) {
    auto node = std::make_unique<decision_tree>();
    if (std::popcount(live) <= 1) {
        if (live) node->verdict = sp.configs[std::countr_zero(live)];
        return node;
    }
    const int target = tree_depth(sp, live, memo);
    for (size_t qi = 0; qi < sp.balanced.size(); ++qi) {
        const uint32_t bal = live & sp.balanced[qi];
        if (bal == 0 || bal == live) continue;
        if (1 + std::max(tree_depth(sp, bal, memo),
                         tree_depth(sp, live & ~sp.balanced[qi], memo)) != target)
            continue;
        node->node = sp.queries[qi];
        node->balanced = tree_build(sp, bal, memo);
        node->tilted = tree_build(sp, live & ~sp.balanced[qi], memo);
        return node;
    }
    throw std::logic_error("decision tree: memo lost the optimal branch");
}

inline void require_tree_domain(int n, int k) {
    if (n < 1 || k < 0 || k > n)
        throw std::domain_error("decision tree: need 0 <= k <= n");
    if (n > tree_search_cap)
        throw resource_error("decision tree: exhaustive search capped at n = 6");
    if (binomial_exact(n, k) > 1 && 2 * k >= n)
        throw std::domain_error(
            "decision tree: complement configurations are indistinguishable");
}

} // namespace detail

inline int min_decision_tree_depth(int n, int k) {
    detail::require_tree_domain(n, k);
    const auto sp = detail::build_tree_space(n, k);
    if (sp.configs.size() <= 1) return 0;
    const uint32_t all = (uint32_t)((1ull << sp.configs.size()) - 1);

    // split the top-level query choices across workers, each with its own memo
    const size_t nq = sp.balanced.size();
    std::vector<int> depth_of(nq, -1);
    parallel_for(nq, [&](size_t qi) {
        const uint32_t bal = all & sp.balanced[qi];
        if (bal == 0 || bal == all) return;
        std::map<uint32_t, int> memo;
        depth_of[qi] = 1 + std::max(detail::tree_depth(sp, bal, memo),
                                    detail::tree_depth(sp, all & ~sp.balanced[qi], memo));
    });
    int best = -1;
    for (int d : depth_of)
        if (d >= 0 && (best < 0 || d < best)) best = d;
    if (best < 0) throw std::runtime_error("decision tree: candidate set is indistinguishable");
    return best;
}

inline std::unique_ptr<decision_tree> build_decision_tree(int n, int k) {
    detail::require_tree_domain(n, k);
    const auto sp = detail::build_tree_space(n, k);
    std::map<uint32_t, int> memo;
    const uint32_t all = (uint32_t)((1ull << sp.configs.size()) - 1);
    return detail::tree_build(sp, all, memo);
}

// ---------------------------------------------------------------------------
// general-k baseline: majority reference plus doubling group verification

namespace detail {

// weigh group vs an equal number of verified-genuine coins; 0 means clean
inline int weigh_against_pool(b_oracle& oracle, int n, const std::vector<int>& group,
                              const std::vector<int>& pool) {
    std::vector<int> minus(pool.begin(), pool.begin() + (long)group.size());
    return weigh(oracle, n, group, minus);
}

} // namespace detail

// identifies all k fakes: 2k reference weighings classify the first 2k+1
// coins (their majority is genuine), then the remainder is scanned in
// doubling chunks against the verified pool, splitting tilted chunks
inline solve_report classical_general(int n, int k, b_oracle& oracle) {
    if (k == 0) {
        solve_report rep;
        rep.mode = solve_mode::classical;
        rep.x_found = coin_config{n, std::vector<uint8_t>(n, 0)};
        rep.success = rep.x_found == oracle.config_for_simulation();
        rep.success_probability = rep.success ? 1.0 : 0.0;
        return rep;
    }
    detail::require_promise(n, k, oracle.config_for_simulation());
    if (k == 1) return classical_k1(n, oracle);
    const query_ledger before = oracle.ledger();

    std::vector<int> fake, pool;
    // coin 0 balances >= k of its 2k partners iff it is genuine: the first
    // 2k+1 coins hold at most k fakes, so the majority side is the genuine one
    std::vector<int> same; // partners balancing coin 0
    std::vector<int> diff;
    for (int i = 1; i <= 2 * k; ++i)
        (detail::weigh(oracle, n, {0}, {i}) == 0 ? same : diff).push_back(i);
    if ((int)same.size() >= k) {
        pool.push_back(0);
        pool.insert(pool.end(), same.begin(), same.end());
        fake = diff;
    } else {
        fake.push_back(0);
        fake.insert(fake.end(), same.begin(), same.end());
        pool = diff;
    }

    const long cap = std::max(1L, ((long)n - 2L * k - 1) / k); // keeps splits shallow
    const auto split = [&](auto&& self, const std::vector<int>& group) -> void {
        // precondition: group holds at least one fake
        if (group.size() == 1) {
            fake.push_back(group[0]);
            return;
        }
        const std::vector<int> left(group.begin(), group.begin() + group.size() / 2);
        const std::vector<int> right(group.begin() + group.size() / 2, group.end());
        if (detail::weigh_against_pool(oracle, n, left, pool) == 0) {
            pool.insert(pool.end(), left.begin(), left.end());
            self(self, right); // the fake mass must sit on the right
            return;
        }
        self(self, left);
        if ((int)fake.size() == k) { // everything else is genuine by count
            pool.insert(pool.end(), right.begin(), right.end());
            return;
        }
        if (detail::weigh_against_pool(oracle, n, right, pool) == 0)
            pool.insert(pool.end(), right.begin(), right.end());
        else
            self(self, right);
    };

    long pos = 2L * k + 1, chunk = 1;
    while (pos < n && (int)fake.size() < k) {
        if (n - pos <= k - (int)fake.size()) {
            for (long i = pos; i < n; ++i) fake.push_back((int)i); // forced by count
            break;
        }
        const long c = std::min({chunk, (long)n - pos, (long)pool.size(), cap});
        std::vector<int> group;
        for (long i = pos; i < pos + c; ++i) group.push_back((int)i);
        if (detail::weigh_against_pool(oracle, n, group, pool) == 0) {
            pool.insert(pool.end(), group.begin(), group.end());
            chunk = c * 2;
        } else {
            split(split, group);
            chunk = std::max(1L, c / 2);
        }
        pos += c;
    }

    std::vector<uint8_t> bits(n, false);
    for (int i : fake) bits[i] = 1;
    solve_report rep;
    rep.mode = solve_mode::classical;
    rep.x_found = coin_config{n, bits};
    rep.success = rep.x_found == oracle.config_for_simulation();
    rep.success_probability = rep.success ? 1.0 : 0.0;
    rep.ledger = detail::ledger_diff(oracle.ledger(), before);
    return rep;
}

// the budget envelope the baseline is measured against
inline double classical_budget(int n, int k) {
    if (k < 1) return 0.0;
    return (double)k * std::log2((double)n / (double)k) + (double)k;
}

} // namespace qcoin

#pragma once

// Lower-bound machinery: the balanced-count gamma and its two ratio lemmas,
// the strong weighted adversary evaluator, its stochastic generalization, the
// three concrete weight-scheme presets, and the information-theoretic bound.
//
// All binomials and gamma values use exact big integers; ratios are formed as
// exact rationals and only converted to double at the interface.

#include "qcoin/coins.hpp"
#include "qcoin/combinat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcoin {

// ---------------------------------------------------------------------------
// balanced-configuration counts

// number of weight-k words balanced against a fixed query with l coins per
// pan: sum over m of C(l,m)^2 * C(n-2l, k-2m)
inline bigint gamma_by_pan(int n, int k, int l) {
    if (l < 0 || 2 * l > n) throw std::domain_error("gamma: pans must fit");
    if (k < 0 || 2 * k > n) throw std::domain_error("gamma: need k <= n/2");
    bigint total = 0;
    for (int m = 0; 2 * m <= k; ++m)
        total += binomial_exact(l, m) * binomial_exact(l, m) *
                 binomial_exact(n - 2 * l, k - 2 * m);
    return total;
}

inline bigint gamma_balanced(int n, int k, int c) {
    if (c < 2 || n % c != 0)
        throw std::domain_error("gamma: c must be a divisor of n with c >= 2");
    return gamma_by_pan(n, k, n / c);
}

inline double tilt_probability(int n, int k, int c) {
    const bigint bc = binomial_exact(n, k);
    return bigrat(bc - gamma_balanced(n, k, c), bc).convert_to<double>();
}

// ---------------------------------------------------------------------------
// the two gamma ratio lemmas, with their proof internals exposed

struct gamma_terms {
    std::vector<bigint> t;                    // t(m), m = 0..k/2
    std::vector<std::pair<long, bigrat>> r;   // (m, t(m+1)/t(m)) where t(m) > 0
};

namespace detail {

inline void require_gamma_domain(int n, int k, int c) {
    if (c < 2 || n % c != 0)
        throw std::domain_error("gamma lemmas: c must divide n, c >= 2");
    if (k < 1 || 2 * k > n) throw std::domain_error("gamma lemmas: need 1 <= k <= n/2");
}

} // namespace detail

inline gamma_terms gamma_chain_terms(int n, int k, int c) {
    detail::require_gamma_domain(n, k, c);
    const long p = n / c;       // coins per pan
    const long rest = n - 2 * p;
    gamma_terms out;
    for (long m = 0; 2 * m <= k; ++m) {
        const bigint bp = binomial_exact(p, m);
        out.t.push_back(bp * bp * binomial_exact(rest, k - 2 * m));
    }
    for (long m = 0; 2 * (m + 1) <= k; ++m) {
        if (out.t[m] == 0) continue; // ratio undefined where the support restarts
        const bigint num = bigint(p - m) * (p - m) * (k - 2 * m) * (k - 2 * m - 1);
        const bigint den =
            bigint(m + 1) * (m + 1) * (rest - k + 2 * m + 1) * (rest - k + 2 * m + 2);
        out.r.emplace_back(m, bigrat(num, den));
    }
    return out;
}

// the ratio formula at a rational index, for the proof's checkpoint m = k/2c - 1
inline bigrat gamma_chain_r_at(int n, int k, int c, const bigrat& m) {
    detail::require_gamma_domain(n, k, c);
    const bigrat p(n, c);
    const bigrat rest = bigrat(n) - 2 * p;
    const bigrat num = (p - m) * (p - m) * (k - 2 * m) * (k - 2 * m - 1);
    const bigrat den = (m + 1) * (m + 1) * (rest - k + 2 * m + 1) * (rest - k + 2 * m + 2);
    return num / den;
}

// [gamma/C(n,k)] / sqrt(c/k); bounded by a small constant for 2 <= c <= k/3
inline double gamma_chain_ratio(int n, int k, int c) {
    detail::require_gamma_domain(n, k, c);
    if (3 * c > k) throw std::domain_error("gamma_chain_ratio: needs c <= k/3");
    const double frac =
        bigrat(gamma_balanced(n, k, c), binomial_exact(n, k)).convert_to<double>();
    return frac / std::sqrt((double)c / (double)k);
}

struct tilt_terms {
    std::vector<bigrat> t_prime;                  // t'(m), m = 0..k
    std::vector<std::pair<long, bigrat>> r_prime; // (m, t'(m+1)/t'(m)) where t'(m) > 0
};

inline tilt_terms tilt_chain_terms(int n, int k, int c) {
    detail::require_gamma_domain(n, k, c);
    const long on_pans = 2L * n / c;
    const bigint denom = binomial_exact(n, on_pans);
    tilt_terms out;
    for (long m = 0; m <= k; ++m)
        out.t_prime.emplace_back(
            binomial_exact(k, m) * binomial_exact(n - k, on_pans - m), denom);
    for (long m = 0; m < k; ++m) {
        if (out.t_prime[m] == 0) continue;
        // t'(m) > 0 forces m <= min(k, 2n/c) and the denominator positive
        const bigint num = bigint(k - m) * (on_pans - m);
        const bigint den = bigint(m + 1) * (n - k - on_pans + m + 1);
        out.r_prime.emplace_back(m, bigrat(num, den));
    }
    return out;
}

// [(C(n,k)-gamma)/C(n,k)] / (k/c); bounded by a small constant for c >= 3
inline double tilt_chain_ratio(int n, int k, int c) {
    detail::require_gamma_domain(n, k, c);
    if (c < 3) throw std::domain_error("tilt_chain_ratio: needs c >= 3");
    const bigint bc = binomial_exact(n, k);
    const double frac =
        bigrat(bc - gamma_balanced(n, k, c), bc).convert_to<double>();
    return frac / ((double)k / (double)c);
}

// ---------------------------------------------------------------------------
// information and pan-restriction bounds

inline double classical_info_bound(int n, int k) {
    if (k < 0 || k > n) throw std::domain_error("info bound: need 0 <= k <= n");
    if (k == 0) return 0.0;
    return log_binomial(n, k) / std::log(2.0);
}

// min over divisors c of n with pans n/c <= l1 or >= l2 of C/sqrt(gamma(C-gamma))
inline double medium_pan_bound(int n, int k, int l1, int l2) {
    if (l1 < 1 || l1 > l2 || 2 * l2 > n)
        throw std::domain_error("medium pan bound: need 1 <= l1 <= l2 <= n/2");
    const bigint bc = binomial_exact(n, k);
    double best = 0;
    bool found = false;
    for (int c = 2; c <= n; ++c) {
        if (n % c != 0) continue;
        const int pan = n / c;
        if (pan > l1 && pan < l2) continue;
        const bigint g = gamma_balanced(n, k, c);
        if (g == 0 || g == bc) continue;
        const double v =
            std::sqrt(bigrat(bc * bc, g * (bc - g)).convert_to<double>());
        if (!found || v < best) best = v;
        found = true;
    }
    if (!found) throw std::domain_error("medium pan bound: no admissible pan size");
    return best;
}

// ---------------------------------------------------------------------------
// strong weighted adversary evaluator

struct adversary_instance {
    size_t inputs = 0;
    size_t queries = 0;
    std::function<int(size_t)> label;             // f(x) as an integer id
    std::function<double(size_t, size_t)> p_zero; // Pr[answer 0] for (input, query)
};

struct weight_scheme {
    std::function<double(size_t, size_t)> w;
    std::function<double(size_t, size_t, size_t)> w_prime;
};

namespace detail {

inline bool surely_equal(double pa, double pb) {
    // both answers deterministic and identical
    return pa == pb && (pa == 0.0 || pa == 1.0);
}

// validates the scheme conditions over every pair and triple; the product
// condition is required exactly where the two answer distributions differ
inline void validate_scheme(const adversary_instance& in, const weight_scheme& s) {
    for (size_t i = 0; i < in.inputs; ++i)
        for (size_t j = 0; j < in.inputs; ++j) {
            const double wij = s.w(i, j);
            if (wij < 0) throw std::invalid_argument(
                "weight scheme: negative w at pair (" + std::to_string(i) + "," +
                std::to_string(j) + ")");
            if (wij != s.w(j, i)) throw std::invalid_argument(
                "weight scheme: asymmetric w at pair (" + std::to_string(i) + "," +
                std::to_string(j) + ")");
            if (in.label(i) == in.label(j) && wij != 0) throw std::invalid_argument(
                "weight scheme: w must vanish on equal labels at pair (" +
                std::to_string(i) + "," + std::to_string(j) + ")");
        }
    for (size_t q = 0; q < in.queries; ++q)
        for (size_t i = 0; i < in.inputs; ++i) {
            const double pi = in.p_zero(i, q);
            for (size_t j = 0; j < in.inputs; ++j) {
                const double pj = in.p_zero(j, q);
                const double wp = s.w_prime(i, j, q);
                const auto triple = "(" + std::to_string(i) + "," + std::to_string(j) +
                                    ";q=" + std::to_string(q) + ")";
                if (wp < 0)
                    throw std::invalid_argument("weight scheme: negative w' at triple " + triple);
                if ((surely_equal(pi, pj) || in.label(i) == in.label(j)) && wp != 0)
                    throw std::invalid_argument(
                        "weight scheme: w' must vanish at triple " + triple);
                if (pi != pj && in.label(i) != in.label(j)) {
                    const double wij = s.w(i, j);
                    if (wp * s.w_prime(j, i, q) < wij * wij - 1e-12)
                        throw std::invalid_argument(
                            "weight scheme: product condition fails at triple " + triple);
                }
            }
        }
}

struct adversary_tables {
    std::vector<double> mu;
    std::vector<std::vector<double>> nu; // [input][query]
};

inline adversary_tables tabulate(const adversary_instance& in, const weight_scheme& s) {
    adversary_tables t;
    t.mu.assign(in.inputs, 0.0);
    for (size_t i = 0; i < in.inputs; ++i)
        for (size_t j = 0; j < in.inputs; ++j) t.mu[i] += s.w(i, j);
    t.nu.assign(in.inputs, std::vector<double>(in.queries, 0.0));
    for (size_t i = 0; i < in.inputs; ++i)
        for (size_t q = 0; q < in.queries; ++q)
            for (size_t j = 0; j < in.inputs; ++j) t.nu[i][q] += s.w_prime(i, j, q);
    return t;
}

inline double adversary_min(const adversary_instance& in, const weight_scheme& s,
                            bool stochastic) {
    validate_scheme(in, s);
    const auto tab = tabulate(in, s);
    double best = -1;
    for (size_t i = 0; i < in.inputs; ++i)
        for (size_t j = 0; j < in.inputs; ++j) {
            if (s.w(i, j) <= 0) continue;
            for (size_t q = 0; q < in.queries; ++q) {
                const double pi = in.p_zero(i, q), pj = in.p_zero(j, q);
                if (pi == pj) continue; // answer distributions identical
                const double nn = tab.nu[i][q] * tab.nu[j][q];
                if (nn <= 0) continue; // pair unreachable through this scheme
                double v = std::sqrt(tab.mu[i] * tab.mu[j] / nn);
                if (stochastic) {
                    const double p01 = pi * (1 - pj), p10 = (1 - pi) * pj;
                    v /= std::sqrt(p01) + std::sqrt(p10);
                }
                if (best < 0 || v < best) best = v;
            }
        }
    if (best < 0) throw std::domain_error("adversary bound: no admissible triple");
    return best;
}

} // namespace detail

inline double adversary_bound(const adversary_instance& in, const weight_scheme& s) {
    for (size_t i = 0; i < in.inputs; ++i)
        for (size_t q = 0; q < in.queries; ++q) {
            const double p = in.p_zero(i, q);
            if (p != 0.0 && p != 1.0)
                throw std::domain_error(
                    "adversary bound: stochastic answers need the stochastic evaluator");
        }
    return detail::adversary_min(in, s, false);
}

inline double stochastic_adversary_bound(const adversary_instance& in,
                                         const weight_scheme& s) {
    return detail::adversary_min(in, s, true);
}

// ---------------------------------------------------------------------------
// concrete weight-scheme presets

struct adversary_problem {
    adversary_instance inst;
    weight_scheme scheme;
    std::vector<coin_config> inputs;
    std::vector<balance_query> pan_queries; // deterministic presets
    std::vector<coin_config> mask_queries;  // quasi preset
};

inline double nu_value(const adversary_problem& p, size_t i, size_t q) {
    double s = 0;
    for (size_t j = 0; j < p.inst.inputs; ++j) s += p.scheme.w_prime(i, j, q);
    return s;
}

namespace detail {

inline std::vector<coin_config> weight_class(int n, int k) {
    std::vector<coin_config> v;
    for (uint64_t w = 0; w < (1ull << n); ++w)
        if (std::popcount(w) == k) v.push_back(coin_config::from_word(n, w));
    return v;
}

inline std::vector<balance_query> pan_queries_of_size(int n, int l) {
    std::vector<balance_query> out;
    for (uint64_t left = 0; left < (1ull << n); ++left) {
        if (std::popcount(left) != l) continue;
        for (uint64_t right = 0; right < (1ull << n); ++right) {
            if (std::popcount(right) != l || (left & right)) continue;
            balance_query q;
            q.n = n;
            q.signs.assign(n, 0);
            for (int i = 0; i < n; ++i) {
                if (left >> i & 1) q.signs[i] = 1;
                if (right >> i & 1) q.signs[i] = -1;
            }
            out.push_back(std::move(q));
        }
    }
    return out;
}

inline int hamming(const coin_config& a, const coin_config& b) {
    return (int)std::popcount(a.to_word() ^ b.to_word());
}

// fakes of x on the two pans of q
inline std::pair<int, int> pan_counts(const coin_config& x, const balance_query& q) {
    int plus = 0, minus = 0;
    for (int i = 0; i < x.n; ++i) {
        if (!x.bits[i]) continue;
        if (q.signs[i] > 0) ++plus;
        if (q.signs[i] < 0) ++minus;
    }
    return {plus, minus};
}

// the piecewise pan-count table for the small-pan scheme: one side balanced
// at b, the other tilted; the tilted multiset determines the row
inline double smallpan_wprime(long n, long k, long l, int x1, int x2, int y1, int y2) {
    const bool xb = x1 == x2, yb = y1 == y2;
    if (xb == yb) return 0.0; // answers agree surely
    const int b = xb ? x1 : y1;
    const int lo = std::min(xb ? y1 : x1, xb ? y2 : x2);
    const int hi = std::max(xb ? y1 : x1, xb ? y2 : x2);
    if (lo == b - 1 && hi == b) {
        const double a = (double)b * (double)(n - k - 2 * l + 2 * b);
        const double d = (double)(l - b + 1) * (double)(k - 2 * b + 1);
        return xb ? d / a : a / d; // tilted side x gets a/d, tilted y the inverse
    }
    if ((lo == b && hi == b + 1) || (lo == b - 1 && hi == b + 1)) return 1.0;
    return 0.0;
}

// the overlap table for the quasi scheme: arguments are wt(x & q), wt(y & q)
inline double quasi_wprime(long n, long k, long l, long a, long b) {
    if (b == a + 1) {
        if (a % 2 == 0) return 1.0;
        const long m = (a + 1) / 2;
        return (double)(2 * m) * (double)(n - k - l + 2 * m) /
               ((double)(l - 2 * m + 1) * (double)(k - 2 * m + 1));
    }
    if (b == a - 1) {
        if (a % 2 == 1) return 1.0;
        const long m = a / 2;
        return (double)(l - 2 * m + 1) * (double)(k - 2 * m + 1) /
               ((double)(2 * m) * (double)(n - k - l + 2 * m));
    }
    return 0.0;
}

} // namespace detail

// all-ones scheme over pans of size >= ceil(n/d): the bound collapses to the
// balanced-count closed form per pan size
inline adversary_problem bigpan_problem(int n, int k, int d) {
    if (n > 14) throw resource_error("bigpan problem: enumeration capped at n = 14");
    if (d < 2 || k < 1 || k > n) throw std::domain_error("bigpan problem: bad shape");
    adversary_problem p;
    p.inputs = detail::weight_class(n, k);
    const int l_min = (n + d - 1) / d;
    for (int l = l_min; 2 * l <= n; ++l) {
        auto qs = detail::pan_queries_of_size(n, l);
        p.pan_queries.insert(p.pan_queries.end(), qs.begin(), qs.end());
    }
    if (p.pan_queries.empty())
        throw std::domain_error("bigpan problem: no pans of the required size fit");
    auto inputs = std::make_shared<std::vector<coin_config>>(p.inputs);
    auto queries = std::make_shared<std::vector<balance_query>>(p.pan_queries);
    p.inst.inputs = inputs->size();
    p.inst.queries = queries->size();
    p.inst.label = [](size_t i) { return (int)i; };
    p.inst.p_zero = [inputs, queries](size_t i, size_t q) {
        return chi((*inputs)[i], (*queries)[q]) ? 0.0 : 1.0;
    };
    p.scheme.w = [](size_t i, size_t j) { return i == j ? 0.0 : 1.0; };
    p.scheme.w_prime = [inputs, queries](size_t i, size_t j, size_t q) {
        if (i == j) return 0.0;
        return chi((*inputs)[i], (*queries)[q]) != chi((*inputs)[j], (*queries)[q])
                   ? 1.0
                   : 0.0;
    };
    return p;
}

// Hamming-distance-2 scheme over pans of exactly size l; weights follow the
// pan-count table. Requires 2l <= n - k so fair coins can fill both pans.
inline adversary_problem smallpan_problem(int n, int k, int l) {
    if (n > 14) throw resource_error("smallpan problem: enumeration capped at n = 14");
    if (l < 1 || 2 * l > n || k < 1 || k > n)
        throw std::domain_error("smallpan problem: bad shape");
    if (2 * l > n - k)
        throw std::domain_error("smallpan problem: needs 2l <= n - k");
    adversary_problem p;
    p.inputs = detail::weight_class(n, k);
    p.pan_queries = detail::pan_queries_of_size(n, l);
    auto inputs = std::make_shared<std::vector<coin_config>>(p.inputs);
    auto queries = std::make_shared<std::vector<balance_query>>(p.pan_queries);
    p.inst.inputs = inputs->size();
    p.inst.queries = queries->size();
    p.inst.label = [](size_t i) { return (int)i; };
    p.inst.p_zero = [inputs, queries](size_t i, size_t q) {
        return chi((*inputs)[i], (*queries)[q]) ? 0.0 : 1.0;
    };
    p.scheme.w = [inputs](size_t i, size_t j) {
        return detail::hamming((*inputs)[i], (*inputs)[j]) == 2 ? 1.0 : 0.0;
    };
    const long ln = n, lk = k, ll = l;
    p.scheme.w_prime = [inputs, queries, ln, lk, ll](size_t i, size_t j, size_t q) {
        if (detail::hamming((*inputs)[i], (*inputs)[j]) != 2) return 0.0;
        auto [x1, x2] = detail::pan_counts((*inputs)[i], (*queries)[q]);
        auto [y1, y2] = detail::pan_counts((*inputs)[j], (*queries)[q]);
        return detail::smallpan_wprime(ln, lk, ll, x1, x2, y1, y2);
    };
    return p;
}

// Hamming-distance-2 scheme over weight-l masks of the rotation oracle
inline adversary_problem quasi_problem(int n, int k, int l) {
    if (n > 14) throw resource_error("quasi problem: enumeration capped at n = 14");
    if (l < 1 || l > n || k < 1 || k > n)
        throw std::domain_error("quasi problem: bad shape");
    adversary_problem p;
    p.inputs = detail::weight_class(n, k);
    p.mask_queries = detail::weight_class(n, l);
    auto inputs = std::make_shared<std::vector<coin_config>>(p.inputs);
    auto masks = std::make_shared<std::vector<coin_config>>(p.mask_queries);
    p.inst.inputs = inputs->size();
    p.inst.queries = masks->size();
    p.inst.label = [](size_t i) { return (int)i; };
    p.inst.p_zero = [inputs, masks](size_t i, size_t q) {
        return quasi_prob_balanced((*inputs)[i], (*masks)[q]);
    };
    p.scheme.w = [inputs](size_t i, size_t j) {
        return detail::hamming((*inputs)[i], (*inputs)[j]) == 2 ? 1.0 : 0.0;
    };
    const long ln = n, lk = k, ll = l;
    p.scheme.w_prime = [inputs, masks, ln, lk, ll](size_t i, size_t j, size_t q) {
        if (detail::hamming((*inputs)[i], (*inputs)[j]) != 2) return 0.0;
        const long a = (long)and_weight((*inputs)[i], (*masks)[q]);
        const long b = (long)and_weight((*inputs)[j], (*masks)[q]);
        return detail::quasi_wprime(ln, lk, ll, a, b);
    };
    return p;
}

// column sum nu(x,q) of the quasi scheme depends only on mu = wt(x & q): the
// distance-2 moves lower the overlap mu(n-k-l+mu) ways and raise it
// (k-mu)(l-mu) ways
inline double quasi_nu(long n, long k, long l, long mu) {
    double s = 0;
    if (mu >= 1)
        s += (double)mu * (double)(n - k - l + mu) *
             detail::quasi_wprime(n, k, l, mu, mu - 1);
    if (mu < std::min(k, l))
        s += (double)(k - mu) * (double)(l - mu) *
             detail::quasi_wprime(n, k, l, mu, mu + 1);
    return s;
}

// closed-form evaluation of the quasi scheme for instances too large to
// enumerate: the minimization runs over adjacent overlap pairs
inline double quasi_bound_closed_form(long n, long k, long l) {
    if (k < 1 || 2 * k >= n || l < 1 || l > n - k)
        throw std::domain_error("quasi closed form: bad shape");
    const auto p0 = [&](long mu) {
        if (mu == 0) return 1.0;
        if (mu % 2) return 0.0;
        return 1.0 / std::sqrt((double)mu);
    };
    const double mu_w = (double)k * (double)(n - k); // row sum of w
    const long top = std::min(k, l);
    double best = -1;
    for (long a = 0; a + 1 <= top; ++a) {
        if ((k - a) * (l - a) <= 0) continue; // pair (a, a+1) unrealizable
        const double na = quasi_nu(n, k, l, a), nb = quasi_nu(n, k, l, a + 1);
        if (na <= 0 || nb <= 0) continue;
        const double pa = p0(a), pb = p0(a + 1);
        const double p01 = pa * (1 - pb), p10 = (1 - pa) * pb;
        const double v =
            std::sqrt(mu_w * mu_w / (na * nb)) / (std::sqrt(p01) + std::sqrt(p10));
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) throw std::domain_error("quasi closed form: no adjacent overlap pair");
    return best;
}

inline adversary_problem preset_problem(const std::string& name, int n, int k, int param) {
    if (name == "bigpan") return bigpan_problem(n, k, param);
    if (name == "smallpan") return smallpan_problem(n, k, param);
    if (name == "quasi") return quasi_problem(n, k, param);
    throw std::domain_error("unknown weight scheme preset: " + name);
}

} // namespace qcoin

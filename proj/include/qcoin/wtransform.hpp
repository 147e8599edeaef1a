#pragma once

// The W transform: maps a lower-half configuration to the phase pattern it
// imprints on the even-size parity masks. Circuit: put the ancilla in |+>,
// conditionally complement the word, uncompute the ancilla by the lower-half
// membership test, then Hadamard every word bit.

#include "qcoin/pure_state.hpp"

#include <numbers>
#include <vector>

namespace qcoin {

constexpr int dense_reg_cap = 16;

// wt < n/2, plus (even n) the half of the wt = n/2 layer with top bit 0 so
// that no member's complement is a member
inline bool in_lower_half(int n, uint64_t word) {
    int w = std::popcount(word);
    if (2 * w < n) return true;
    if (2 * w == n) return ((word >> (n - 1)) & 1) == 0;
    return false;
}

namespace detail {

// dense layout: index = (word << 1) | aux
inline std::vector<cplx> to_dense(const pure_state& s) {
    if (s.n > dense_reg_cap) throw resource_error("w transform: register too wide");
    std::vector<cplx> a(1ull << (s.n + 1));
    for (auto& [l, amp] : s.amps) {
        if (l.ans) throw std::invalid_argument("w transform: answer bit in use");
        a[(l.word << 1) | l.aux] += amp;
    }
    return a;
}

inline pure_state from_dense(int n, const std::vector<cplx>& a) {
    pure_state s;
    s.n = n;
    for (uint64_t i = 0; i < a.size(); ++i)
        if (std::norm(a[i]) > 1e-30) s.amps[{i >> 1, (uint8_t)(i & 1), 0}] = a[i];
    return s;
}

inline void hadamard_bit(std::vector<cplx>& a, int dense_bit) {
    const double inv = 1.0 / std::numbers::sqrt2;
    uint64_t step = 1ull << dense_bit;
    for (uint64_t i = 0; i < a.size(); ++i) {
        if (i & step) continue;
        cplx u = a[i], v = a[i | step];
        a[i] = (u + v) * inv;
        a[i | step] = (u - v) * inv;
    }
}

inline void hadamard_words(std::vector<cplx>& a, int n) {
    for (int b = 0; b < n; ++b) hadamard_bit(a, b + 1);
}

inline void flip_word_if_aux(std::vector<cplx>& a, int n) {
    uint64_t mask = (1ull << n) - 1;
    for (uint64_t w = 0; w < (1ull << n); ++w) {
        uint64_t c = ~w & mask;
        if (w < c) std::swap(a[(w << 1) | 1], a[(c << 1) | 1]);
    }
}

inline void flip_aux_outside_lower_half(std::vector<cplx>& a, int n) {
    for (uint64_t w = 0; w < (1ull << n); ++w)
        if (!in_lower_half(n, w)) std::swap(a[w << 1], a[(w << 1) | 1]);
}

} // namespace detail

inline pure_state w_transform(const pure_state& s) {
    auto a = detail::to_dense(s);
    detail::hadamard_bit(a, 0); // ancilla |0> -> |+>
    detail::flip_word_if_aux(a, s.n);
    detail::flip_aux_outside_lower_half(a, s.n);
    detail::hadamard_words(a, s.n);
    auto out = detail::from_dense(s.n, a);
    out.prune();
    return out;
}

inline pure_state w_inverse(const pure_state& s) {
    auto a = detail::to_dense(s);
    detail::hadamard_words(a, s.n);
    detail::flip_aux_outside_lower_half(a, s.n);
    detail::flip_word_if_aux(a, s.n);
    detail::hadamard_bit(a, 0);
    auto out = detail::from_dense(s.n, a);
    out.prune();
    return out;
}

// closed form of W on a lower-half configuration: equal weight on the even
// masks with the configuration's parity phases
inline pure_state even_mask_phase_state(int n, uint64_t x_word) {
    if (n > dense_reg_cap) throw resource_error("even_mask_phase_state: register too wide");
    pure_state s;
    s.n = n;
    double g = std::pow(2.0, -0.5 * (n - 1));
    for (uint64_t q = 0; q < (1ull << n); ++q) {
        if (std::popcount(q) % 2) continue;
        s.amps[{q, 0, 0}] = (std::popcount(q & x_word) % 2) ? -g : g;
    }
    return s;
}

} // namespace qcoin

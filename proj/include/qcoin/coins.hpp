#pragma once

// Coin configurations, balance queries and the oracle arithmetic they induce.
// A configuration marks each coin true (0) or false (1); a balance query puts
// equal-size pans on the scale and answers "balanced" iff the pans hold the
// same number of false coins.

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcoin {

// thrown when an exact simulation would exceed its configured size cap
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct coin_config {
    int n = 0;
    std::vector<uint8_t> bits; // bits[i] == 1 -> coin i is false

    static coin_config from_string(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("coin config: empty string");
        coin_config x;
        x.n = (int)s.size();
        x.bits.resize(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1')
                throw std::invalid_argument("coin config: bad character in " + s);
            x.bits[i] = s[i] == '1';
        }
        return x;
    }

    // big-endian: character 0 of the string is the top bit of the word
    static coin_config from_word(int n, uint64_t w) {
        if (n < 1 || n > 64) throw std::invalid_argument("coin config: word size");
        coin_config x;
        x.n = n;
        x.bits.resize(n);
        for (int i = 0; i < n; ++i) x.bits[i] = (w >> (n - 1 - i)) & 1;
        return x;
    }

    uint64_t to_word() const {
        if (n > 64) throw std::invalid_argument("coin config: too wide for a word");
        uint64_t w = 0;
        for (int i = 0; i < n; ++i) w = (w << 1) | bits[i];
        return w;
    }

    std::string to_string() const {
        std::string s(n, '0');
        for (int i = 0; i < n; ++i) s[i] = bits[i] ? '1' : '0';
        return s;
    }

    int weight() const {
        int k = 0;
        for (uint8_t b : bits) k += b;
        return k;
    }

    coin_config complement() const {
        coin_config c = *this;
        for (auto& b : c.bits) b ^= 1;
        return c;
    }

    bool operator==(const coin_config&) const = default;
};

struct balance_query {
    int n = 0;
    std::vector<int8_t> signs; // +1 left pan, -1 right pan, 0 off the scale

    static balance_query from_string(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("balance query: empty string");
        balance_query q;
        q.n = (int)s.size();
        q.signs.resize(s.size());
        int plus = 0, minus = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
            case '+': q.signs[i] = 1; ++plus; break;
            case '-': q.signs[i] = -1; ++minus; break;
            case '0': q.signs[i] = 0; break;
            default: throw std::invalid_argument("balance query: bad character in " + s);
            }
        }
        if (plus != minus) throw std::invalid_argument("balance query: pans differ in size");
        return q;
    }

    std::string to_string() const {
        std::string s(n, '0');
        for (int i = 0; i < n; ++i) s[i] = signs[i] > 0 ? '+' : (signs[i] < 0 ? '-' : '0');
        return s;
    }

    int pan_size() const {
        int l = 0;
        for (int8_t v : signs) l += v == 1;
        return l;
    }

    bool operator==(const balance_query&) const = default;
};

// 0 iff the pans balance; the answer never separates x from its complement.
inline int chi(const coin_config& x, const balance_query& q) {
    if (x.n != q.n) throw std::invalid_argument("chi: size mismatch");
    int sum = 0;
    for (int i = 0; i < x.n; ++i) sum += (int)q.signs[i] * (int)x.bits[i];
    return sum == 0 ? 0 : 1;
}

inline int b_oracle_phase(const coin_config& x, const balance_query& q) {
    return chi(x, q) ? -1 : 1;
}

inline int and_weight(const coin_config& x, const coin_config& m) {
    if (x.n != m.n) throw std::invalid_argument("and_weight: size mismatch");
    int w = 0;
    for (int i = 0; i < x.n; ++i) w += x.bits[i] & m.bits[i];
    return w;
}

// (-1)^{m.x} for even-size masks; even size keeps the phase complement invariant
inline int ip_phase(const coin_config& x, const coin_config& m) {
    if (m.weight() % 2) throw std::invalid_argument("ip_phase: mask size must be even");
    return and_weight(x, m) % 2 ? -1 : 1;
}

// put the lexicographically first half of the mask support on the left pan
inline balance_query split_parity_query(const coin_config& m) {
    int l = m.weight();
    if (l % 2) throw std::invalid_argument("split_parity_query: mask size must be even");
    balance_query q;
    q.n = m.n;
    q.signs.assign(m.n, 0);
    int placed = 0;
    for (int i = 0; i < m.n; ++i) {
        if (!m.bits[i]) continue;
        q.signs[i] = placed < l / 2 ? 1 : -1;
        ++placed;
    }
    return q;
}

// Split an even mask q into two masks q1^b, q2^b of pan budget T = 2*floor(n/4):
// q1, q2 are the support halves and b is a disjoint filler, so the two split
// queries use big pans and their masks XOR back to q.
inline std::pair<balance_query, balance_query> bigpan_split(const coin_config& m) {
    int l = m.weight();
    if (l % 2) throw std::invalid_argument("bigpan_split: mask size must be even");
    int T = 2 * (m.n / 4);
    if (l / 2 > T) throw std::invalid_argument("bigpan_split: mask too wide for pan budget");
    coin_config m1, m2;
    m1.n = m2.n = m.n;
    m1.bits.assign(m.n, 0);
    m2.bits.assign(m.n, 0);
    int placed = 0;
    for (int i = 0; i < m.n; ++i) {
        if (!m.bits[i]) continue;
        (placed < l / 2 ? m1 : m2).bits[i] = 1;
        ++placed;
    }
    int fill = T - l / 2;
    for (int i = 0; i < m.n && fill > 0; ++i) {
        if (m.bits[i]) continue;
        m1.bits[i] = m2.bits[i] = 1;
        --fill;
    }
    return {split_parity_query(m1), split_parity_query(m2)};
}

// Quasi oracle answer distribution: certainly balanced on empty overlap,
// certainly tilted on odd overlap, probability 1/sqrt(wt) on even overlap wt.
inline double quasi_prob_balanced(const coin_config& x, const coin_config& q) {
    int w = and_weight(x, q);
    if (w == 0) return 1.0;
    if (w % 2) return 0.0;
    return 1.0 / std::sqrt((double)w);
}

// One quasi oracle application on a basis state |q, a>: amplitude `stay` on
// |q, a> and `flip` on |q, a^1>; columns of the rotation
// [[sqrt(p0), -sqrt(p1)], [sqrt(p1), sqrt(p0)]].
struct quasi_amps {
    double stay;
    double flip;
};

inline quasi_amps quasi_oracle_amps(const coin_config& x, const coin_config& q, int a) {
    double p0 = quasi_prob_balanced(x, q);
    double s0 = std::sqrt(p0), s1 = std::sqrt(1.0 - p0);
    return {s0, a ? -s1 : s1};
}

} // namespace qcoin

#pragma once

// Sparse pure states over labelled basis vectors. The label covers the coin
// word register plus the two ancilla bits the algorithms use; map ordering
// keeps every iteration deterministic.

#include "qcoin/coins.hpp"

#include <complex>
#include <map>
#include <random>

namespace qcoin {

using cplx = std::complex<double>;

struct basis_label {
    uint64_t word = 0;
    uint8_t aux = 0; // W-transform ancilla
    uint8_t ans = 0; // quasi oracle answer bit
    auto operator<=>(const basis_label&) const = default;
};

struct pure_state {
    int n = 0;
    std::map<basis_label, cplx> amps;

    static pure_state basis(int n, uint64_t word, uint8_t aux = 0, uint8_t ans = 0) {
        pure_state s;
        s.n = n;
        s.amps[{word, aux, ans}] = 1.0;
        return s;
    }

    void add(const basis_label& l, cplx a) {
        auto [it, fresh] = amps.try_emplace(l, a);
        if (!fresh) it->second += a;
    }

    double norm_sq() const {
        double s = 0;
        for (auto& [l, a] : amps) s += std::norm(a);
        return s;
    }

    void prune(double eps = 1e-15) {
        for (auto it = amps.begin(); it != amps.end();)
            it = std::norm(it->second) < eps * eps ? amps.erase(it) : std::next(it);
    }
};

inline cplx inner(const pure_state& a, const pure_state& b) {
    cplx s = 0;
    auto ia = a.amps.begin();
    auto ib = b.amps.begin();
    while (ia != a.amps.end() && ib != b.amps.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            s += std::conj(ia->second) * ib->second;
            ++ia, ++ib;
        }
    }
    return s;
}

// mt19937_64 driven directly: uniform_real_distribution is implementation
// defined and would break byte-identical reports across toolchains
struct rng64 {
    std::mt19937_64 eng;
    explicit rng64(uint64_t seed) : eng(seed) {}
    double uniform() { return (double)(eng() >> 11) * 0x1.0p-53; }
};

// Born sample of the word register (ancillas marginalized out)
inline uint64_t measure_word(const pure_state& s, rng64& rng) {
    double total = s.norm_sq();
    if (total <= 0) throw std::invalid_argument("measure_word: empty state");
    double target = rng.uniform() * total;
    double acc = 0;
    uint64_t cur = s.amps.begin()->first.word;
    double cur_p = 0;
    for (auto& [l, a] : s.amps) {
        if (l.word != cur) {
            acc += cur_p;
            if (acc > target) return cur;
            cur = l.word;
            cur_p = 0;
        }
        cur_p += std::norm(a);
    }
    return cur;
}

} // namespace qcoin

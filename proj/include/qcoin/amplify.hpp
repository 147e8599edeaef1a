#pragma once

// Staged amplitude amplification ("fixed schedule" Grover ladder). A branch
// with good fraction p is driven through geometrically growing iteration
// counts; after each stage the good component is captured into an inert flag.
// The whole ladder runs a fixed number of passes so that every achievable p
// down to the floor ends with bad mass below the residual target.

#include "qcoin/calibration.hpp"
#include "qcoin/combinat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qcoin {

inline double grover_amplitude(double p, long t) {
    if (p < 0 || p > 1) throw std::invalid_argument("grover_amplitude: p out of range");
    double th = std::asin(std::sqrt(p));
    double s = std::sin((2.0 * t + 1.0) * th);
    return s * s;
}

struct search_schedule {
    int k = 1;
    std::vector<int> pass;                // iterations per stage, one pass
    int passes = cal::ladder_passes;

    std::vector<int> expanded() const {
        std::vector<int> v;
        for (int r = 0; r < passes; ++r) v.insert(v.end(), pass.begin(), pass.end());
        return v;
    }

    // oracle calls of one forward ladder: each iteration plus each stage check
    long forward_queries() const {
        long s = 0;
        for (int t : pass) s += t + 1;
        return s * passes;
    }

    // forward ladder + payload flip + uncompute of the ladder
    long total_queries() const { return 2 * forward_queries() + 1; }

    long cap() const { return (long)std::ceil(cal::c0 * std::pow((double)k, 0.25)); }
};

// stage j targets p ~ 2^-j with ceil(pi/4 * 2^{j/2}) iterations, down to the
// floor p_floor_coeff / sqrt k
inline search_schedule plan_schedule(int k) {
    if (k < 1) throw std::invalid_argument("plan_schedule: k must be positive");
    search_schedule s;
    s.k = k;
    int J = 0;
    while ((__int128)1 << (2 * J) < (__int128)16 * k) ++J;
    for (int j = 0; j <= J; ++j)
        s.pass.push_back((int)std::ceil(std::numbers::pi / 4.0 * std::pow(2.0, 0.5 * j)));
    return s;
}

// signed bad amplitude left after the ladder; the first stage starts on the
// prepared state, later stages restart from pure bad
inline double ladder_residual_amp(double p, const std::vector<int>& stages) {
    double th = std::asin(std::sqrt(std::min(1.0, std::max(0.0, p))));
    double b = 1.0;
    bool first = true;
    for (int t : stages) {
        b *= std::cos((first ? 2.0 * t + 1.0 : 2.0 * t) * th);
        first = false;
    }
    return b;
}

inline double ladder_residual(double p, const search_schedule& s) {
    double b = ladder_residual_amp(p, s.expanded());
    return b * b;
}

struct ladder_outcome {
    double residual = 0;            // bad mass left active
    double found_total = 0;         // good mass captured by the checks
    std::vector<double> found;      // per stage
    long queries = 0;               // forward oracle calls (iterations + checks)
};

// literal two dimensional simulation of one forward ladder
inline ladder_outcome staged_search(double p, const search_schedule& sched) {
    if (p < 0 || p > 1) throw std::invalid_argument("staged_search: p out of range");
    double th = std::asin(std::sqrt(p));
    double ug = std::sin(th), ub = std::cos(th);
    double g = ug, b = ub;
    ladder_outcome out;
    for (int t : sched.expanded()) {
        for (int i = 0; i < t; ++i) {
            g = -g;                                   // oracle marks good
            double d = ug * g + ub * b;               // reflect about the start
            g = 2 * d * ug - g;
            b = 2 * d * ub - b;
            ++out.queries;
        }
        out.found.push_back(g * g);                   // check captures good
        out.found_total += g * g;
        g = 0;
        ++out.queries;
    }
    out.residual = b * b;
    return out;
}

// branch signal and garbage after flip + uncompute, from the residual amplitude
inline double branch_signal(double residual_amp) { return 1.0 - 2.0 * residual_amp * residual_amp; }
inline double branch_garbage_sq(double residual_amp) {
    double b2 = residual_amp * residual_amp;
    return 4.0 * b2 * (1.0 - b2);
}

// check ancilla rotation for the exact solver: beta1^2 = 1/(4a)
struct aux_rotation {
    double beta0, beta1;
    explicit aux_rotation(double a) {
        if (a < 0.25 || a > 1.0)
            throw std::invalid_argument("aux_rotation: success must lie in [1/4, 1]");
        beta1 = std::sqrt(1.0 / (4.0 * a));
        beta0 = std::sqrt(1.0 - 1.0 / (4.0 * a));
    }
};

} // namespace qcoin

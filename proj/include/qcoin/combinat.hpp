#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_int/literals.hpp>

#include <cmath>
#include <stdexcept>

namespace qcoin {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

inline bigint binomial_exact(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    bigint r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i; // exact: r is C(n-k+i, i) after each step
    }
    return r;
}

// natural log of C(n, k); accurate to ~1e-13 relative even at n ~ 4096
inline double log_binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("log_binomial: out of range");
    return std::lgamma((double)n + 1) - std::lgamma((double)k + 1) -
           std::lgamma((double)(n - k) + 1);
}

inline double binomial_double(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    return std::exp(log_binomial(n, k));
}

// compensated accumulator for long deterministic sums
struct kahan_sum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

} // namespace qcoin

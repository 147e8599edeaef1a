#pragma once

// Pinned schedule constants. The values marked "measured" are produced by
// `qcoin calibrate` (see data/calibration.json) and re-checked by the
// acceptance gate; edit them only together with a fresh calibration run.

namespace qcoin::cal {

inline constexpr char schedule_id[] = "ladder-r3-p25-v1";

// ladder shape: stage j targets good fraction 2^-j down to p_floor_coeff/sqrt k
inline constexpr double p_floor_coeff = 0.25;
inline constexpr int ladder_passes = 3;

// every branch with a nonzero even overlap must end below this bad mass
inline constexpr double residual_target = 1.0 / 1600.0;

inline constexpr long k_max_calibrated = 4096;

// measured: max over k <= k_max of total find_star queries / k^0.25
inline constexpr double c0 = 68.881;

// measured: max over k <= k_max of total quasi queries / k^0.25
inline constexpr double c1 = 102.14;

// measured: max over the doubling grid of find_exact queries / k^0.25
inline constexpr double find_exact_norm_cap = 192.0;

// measured: min over the golden grid (k = 2,4,...,64 with n = 4k, l = 2k) of
// quasi adversary bound / k^0.25; the minimum 0.9651 sits at k = 4
inline constexpr double quasi_adversary_floor = 0.96;

// measured: max over the verification grid of classical_general weighings
// divided by (k log2(n/k) + k); the observed worst is 1.750 at (16,2)
inline constexpr double classical_budget_coeff = 2.0;

} // namespace qcoin::cal

#pragma once

// Frozen comparison constants for the inequality checks.  Each constant was
// fixed once from a run on the calibration family (bump and smoothed-saw
// profiles, generator seeds 101..110, amplitudes such that ||A'||_inf <= 0.05)
// and is immutable; the verify/acceptance suites run on disjoint corpora.

namespace hv::calib {

/// Kernel lower bound: LHS >= kKernelLowerC(k) * ||A'||_2^2 - kKernelLowerBigC(k) * ||A'||_inf^4.
inline double kernel_lower_c(int k) {
    switch (k) {
        case 1: return 4.9;
        case 3: return 44.0;
        case 5: return 122.0;
        default: return 4.9;
    }
}
inline double kernel_lower_big_c(int k) {
    switch (k) {
        case 1: return 30.0;
        case 3: return 300.0;
        case 5: return 900.0;
        default: return 30.0;
    }
}

/// Band-operator comparison on the pipeline corpus:
/// ||T_band||_{L2(mu|F cap pi^-1(4 I0))} >= kBandLowerC ||A'||_2 - kBandLowerBigC alpha^2.
constexpr double kBandLowerC = 0.5;
constexpr double kBandLowerBigC = 40.0;

/// Localization: | ||T(H1|Gamma)||_2 - ||T_band(H1|Gamma)||_{2, 4I0} | <= kLocalizationC alpha^2.
constexpr double kLocalizationC = 40.0;

/// Smoothing-kernel shift bound: |eta_{pD(t)}(t-s) - eta_{pD(s)}(t-s)| <=
/// kEtaShiftC sqrt(lambda)/D(s) on the indicator window of radius
/// kEtaShiftWindow sqrt(lambda) D(s).
constexpr double kEtaShiftC = 8.0;
constexpr double kEtaShiftWindow = 2.0;

/// Slope comparison on sampled S pairs: |pi_perp difference| <=
/// (alpha + kSlopeC sqrt(lambda)) |pi difference|.
constexpr double kSlopeC = 12.0;

/// Neighbour consistency of the interval lines: |A_i(q) - A_j(q)| <=
/// kNeighborC lambda diam I_j on touching doubled intervals.
constexpr double kNeighborC = 400.0;

/// Partition-of-unity derivative bound: ||psi_i'||_inf diam I_i <= kPouC.
constexpr double kPouC = 4.0;

/// Projection growth constant of the sigma check (criterion constant).
constexpr double kGrowthC = 10.0;

/// Graph-closeness band: |pi_perp(x) - A(pi(x))| <= kCloseC lambda D(pi(x)).
constexpr double kCloseC = 10.0;

}  // namespace hv::calib

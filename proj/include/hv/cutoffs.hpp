#pragma once

#include <cmath>
#include <stdexcept>

namespace hv {

/// Transport test cutoff: 1 on [0,3), linear ramp to 0 on [3,4), 0 beyond.
/// Lipschitz constant exactly 1.
inline double phi(double t) {
    if (t < 0.0) throw std::invalid_argument("phi: t must be nonnegative");
    if (t < 3.0) return 1.0;
    if (t < 4.0) return 4.0 - t;
    return 0.0;
}

/// Smooth truncation for the singular transforms: 0 on [0,1/2], 1 on [1,inf),
/// cubic smoothstep in between.  |psi''| peaks at 24.
inline double psi(double t) {
    if (t < 0.0) throw std::invalid_argument("psi: t must be nonnegative");
    if (t <= 0.5) return 0.0;
    if (t >= 1.0) return 1.0;
    double u = 2.0 * t - 1.0;
    return u * u * (3.0 - 2.0 * u);
}

/// Smoothing kernel profile: 1 on [0,1/4], C^1 cubic ramp to 0 at
/// kEtaTransition, 0 beyond.  The transition endpoint 3/4 is the unique value
/// for which the integral over [0,inf) is exactly 1/2.
constexpr double kEtaTransition = 0.75;

inline double eta_tilde(double t) {
    if (t < 0.0) throw std::invalid_argument("eta_tilde: t must be nonnegative");
    if (t <= 0.25) return 1.0;
    if (t >= kEtaTransition) return 0.0;
    double u = (t - 0.25) / (kEtaTransition - 0.25);
    return 1.0 - u * u * (3.0 - 2.0 * u);
}

/// eta_p(t) = eta_tilde(|t|/p)/p; integrates to 1 over the line.
inline double eta_p(double p, double t) {
    if (!(p > 0.0)) throw std::invalid_argument("eta_p: p must be positive");
    return eta_tilde(std::fabs(t) / p) / p;
}

}  // namespace hv
